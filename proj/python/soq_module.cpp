#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "soq/decompose.hpp"
#include "soq/diag.hpp"
#include "soq/good.hpp"
#include "soq/holonomy.hpp"
#include "soq/oracle.hpp"
#include "soq/poly.hpp"
#include "soq/serialize.hpp"

namespace py = pybind11;
using namespace soq;

namespace {

Mask full_mask(int n) {
    Mask X = 0;
    for (int i = 1; i <= n; ++i) X |= Mask(1) << i;
    return X;
}

EnumCaps make_caps(int depth, int blocks) {
    return EnumCaps{.max_blocks_per_slot = blocks, .max_split_depth = depth};
}

}  // namespace

PYBIND11_MODULE(_soq, m) {
    m.doc() =
        "exact quotient-ring normal forms, good-monomial decomposition "
        "certificates, and holonomy property tests";

    m.def(
        "normal_form",
        [](const std::string& poly) { return normal_form(parse_polynomial(poly)).str(); },
        py::arg("poly"),
        "Diagonal normal form of a polynomial in the y+/y- generators, as text.");

    m.def(
        "equal_in_ring",
        [](const std::string& a, const std::string& b) {
            return equal_in_R(parse_polynomial(a), parse_polynomial(b));
        },
        py::arg("a"), py::arg("b"), "Exact equality in the quotient ring.");

    m.def(
        "decompose",
        [](const std::string& monomial, int n, int g) {
            Monomial p = parse_monomial(monomial);
            Mask X = full_mask(n);
            Decomposition dec = decompose_full(p, X, g);
            if (!verify_decomposition(dec, p, X, g))
                throw std::runtime_error("certificate failed independent verification");
            return to_json(dec).dump();
        },
        py::arg("monomial"), py::arg("n"), py::arg("g"),
        "Certified decomposition over the good monomials, as a JSON string. "
        "The certificate is re-verified by normal-form equality before return.");

    m.def(
        "enumerate_good",
        [](int n, int g, int max_depth, int max_blocks) {
            std::vector<std::string> out;
            for (const auto& gm : enumerate_good(n, g, make_caps(max_depth, max_blocks)))
                out.push_back(gm.mono.str());
            return out;
        },
        py::arg("n"), py::arg("g"), py::arg("max_depth") = 2, py::arg("max_blocks") = 2,
        "Good monomials over {1..n}, as text.");

    m.def(
        "verify_theorem",
        [](int n, int g, int degree, int max_depth, int max_blocks, int jobs) {
            if (degree < 0) degree = 2 * g * n * n + (n - 1) * (n - 2) / 2;
            TheoremReport r = verify_theorem(n, g, degree, make_caps(max_depth, max_blocks), jobs);
            return to_json(r).dump();
        },
        py::arg("n"), py::arg("g"), py::arg("degree") = -1, py::arg("max_depth") = 2,
        py::arg("max_blocks") = 2, py::arg("jobs") = 1,
        "Certify every diagonal monomial of the given degree; JSON report.");

    m.def(
        "check_block_lemmas",
        [](int max_size) { return to_json(check_block_lemmas(max_size)).dump(); },
        py::arg("max_size") = 5, "Exhaustive block-calculus identities; JSON report.");

    m.def(
        "holonomy_stress",
        [](int n, int g, long long trials, double tol, std::uint64_t seed, int jobs) {
            StressReport r =
                stress_lemma(FormSpec{FormSpec::Kind::plusmat}, n, g, trials, tol, seed, jobs);
            return to_json(r).dump();
        },
        py::arg("n"), py::arg("g"), py::arg("trials") = 1000, py::arg("tol") = 1e-9,
        py::arg("seed") = 42, py::arg("jobs") = 1,
        "Commutator-vs-generic-torus stress test for the realified-unitary form; JSON report.");

    m.def("kappa_residual", &kappa_residual, py::arg("n"), py::arg("pairs") = 1000,
          py::arg("seed") = 42,
          "Max residual of the realification homomorphism over random unitary pairs.");
}
