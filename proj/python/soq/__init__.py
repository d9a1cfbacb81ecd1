from ._soq import (
    check_block_lemmas,
    decompose,
    enumerate_good,
    equal_in_ring,
    holonomy_stress,
    kappa_residual,
    normal_form,
    verify_theorem,
)

__all__ = [
    "check_block_lemmas",
    "decompose",
    "enumerate_good",
    "equal_in_ring",
    "holonomy_stress",
    "kappa_residual",
    "normal_form",
    "verify_theorem",
]
