#pragma once

// Numeric property tests of the geometric no-common-zero lemmas: structured
// SO(2n+1) matrix forms, the realification embedding of U(n), commutator
// products, genericity of torus elements, and the section evaluations dual to
// each structured form. Everything here is double precision; structural zeros
// are checked at 1e-12 and group-theoretic identities at 1e-9.

#include "soq/blocks.hpp"
#include "soq/good.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace soq {

using OrthMatrix = Eigen::MatrixXd;

struct FormSpec {
    enum class Kind {
        plusmat,           // realified unitary, bordered by e_{2n+1}
        minusmat,          // plusmat conjugated by the V-side row swaps of B
        so5_plus,          // plusmat at n = 2
        so5_pm,            // minusmat at n = 2, B = {1} x {2}
        block_diag_embed,  // leading `inner` indices realified-unitary, the
                           // remaining 2(n - inner) coordinates independent
    };
    Kind kind = Kind::plusmat;
    std::optional<Block> B;  // minusmat: block over {1..n}
    int inner = 1;           // block_diag_embed

    std::string name() const;
};

// Deterministic counter-based generator: every draw is a pure function of
// (seed, stream, counter), so trials are reproducible and splittable.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
    std::uint64_t next_u64();
    double next_unit();      // [0, 1)
    double next_gaussian();  // standard normal

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::optional<double> spare_;
};

// Real 2x2-block realification of a unitary, bordered with a trailing 1.
OrthMatrix kappa(const Eigen::MatrixXcd& U);

// Block-rotation torus element (theta_1, ..., theta_n) in SO(2n+1).
OrthMatrix torus_element(const std::vector<double>& angles);

// The row-swap involution used to conjugate between the two structured
// forms: swaps coordinates 2k-1 and 2k for every k in V.
OrthMatrix swap_matrix(Mask V, int n);

// Haar-ish random unitary / special orthogonal matrices.
Eigen::MatrixXcd random_unitary(int n, CounterRng& rng);
Eigen::MatrixXd random_special_orthogonal(int m, CounterRng& rng);

// A random matrix of the requested structured form; trial selects the RNG
// stream so samples are independent and reproducible.
OrthMatrix sample_form(const FormSpec& spec, int n, std::uint64_t seed, std::uint64_t trial);

// True iff M is within tol of torus block-rotation form and its angles admit
// no relation sum lambda_i theta_i in 2 pi Z over lambda in {-1,0,1}^n \ {0}.
bool is_generic_torus(const OrthMatrix& M, double tol);

// Angles of a matrix within tol of torus form; nullopt otherwise.
std::optional<std::vector<double>> torus_angles(const OrthMatrix& M, double tol);

// prod_l A_l B_l A_l^{-1} B_l^{-1}.
OrthMatrix commutator_product(const std::vector<OrthMatrix>& A,
                              const std::vector<OrthMatrix>& B);

// (s+_ij, s-_ij) evaluated on the (i,j) 2x2 block of M (1-based indices).
std::pair<std::complex<double>, std::complex<double>> section_values(const OrthMatrix& M, int i,
                                                                     int j);

// The sections a matrix of this form zeroes, over ordered pairs of {1..n}.
std::vector<SectionEmission> zero_sections(const FormSpec& spec, int n);

struct StressReport {
    FormSpec spec;
    int n = 0;
    int g = 0;
    long long trials = 0;
    double tol = 0;
    std::uint64_t seed = 0;
    long long violations = 0;  // commutator products within tol of a generic torus element
    long long angle_sum_failures = 0;  // torus-form products whose angle sum misses 2 pi Z
    std::optional<long long> first_violation;
};

// Samples `trials` 2g-tuples of structured matrices and asserts that no
// commutator product comes within tol of a generic torus element; for the
// realified-unitary form additionally checks the determinant argument (a
// torus-form product has angle sum in 2 pi Z).
StressReport stress_lemma(const FormSpec& spec, int n, int g, long long trials, double tol,
                          std::uint64_t seed, int jobs = 1);

struct DualityReport {
    FormSpec spec;
    int n = 0;
    long long samples = 0;
    double max_zero_section = 0;        // must stay below the structural tolerance
    double min_perturbed_section = 0;   // must rise well above it after a 1e-3 bump
};

// Form/section duality: sampled matrices zero exactly the associated
// sections; perturbing one structured entry by `bump` makes the matching
// section nonzero.
DualityReport check_duality(const FormSpec& spec, int n, long long samples, double bump,
                            std::uint64_t seed);

// Max homomorphism residual ||kappa(UV) - kappa(U) kappa(V)||_inf over
// random pairs.
double kappa_residual(int n, long long pairs, std::uint64_t seed);

}  // namespace soq
