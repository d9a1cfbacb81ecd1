#include "soq/holonomy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace soq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double dist_to_multiple_of_two_pi(double x) {
    const double r = std::remainder(x, kTwoPi);
    return std::abs(r);
}

}  // namespace

std::string FormSpec::name() const {
    switch (kind) {
        case Kind::plusmat:
            return "plusmat";
        case Kind::minusmat:
            return "minusmat";
        case Kind::so5_plus:
            return "so5-plus";
        case Kind::so5_pm:
            return "so5-pm";
        case Kind::block_diag_embed:
            return "block-diagonal-embed";
    }
    return {};
}

std::uint64_t CounterRng::next_u64() {
    // Key, stream, and counter are independently whitened so distinct trials
    // of distinct runs never share a sequence.
    return splitmix(splitmix(seed_) ^ splitmix(stream_ * 0xd1342543de82ef95ULL + counter_++));
}

double CounterRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u1 = next_unit(), u2 = next_unit();
    if (u1 <= 0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    return r * std::cos(kTwoPi * u2);
}

OrthMatrix kappa(const Eigen::MatrixXcd& U) {
    const int n = static_cast<int>(U.rows());
    if (U.cols() != n) throw std::invalid_argument("kappa: square matrix required");
    if (((U.adjoint() * U) - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("kappa: input is not unitary");
    OrthMatrix M = OrthMatrix::Zero(2 * n + 1, 2 * n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            M(2 * i, 2 * j) = U(i, j).real();
            M(2 * i, 2 * j + 1) = -U(i, j).imag();
            M(2 * i + 1, 2 * j) = U(i, j).imag();
            M(2 * i + 1, 2 * j + 1) = U(i, j).real();
        }
    M(2 * n, 2 * n) = 1.0;
    return M;
}

OrthMatrix torus_element(const std::vector<double>& angles) {
    const int n = static_cast<int>(angles.size());
    OrthMatrix M = OrthMatrix::Zero(2 * n + 1, 2 * n + 1);
    for (int i = 0; i < n; ++i) {
        const double c = std::cos(angles[i]), s = std::sin(angles[i]);
        M(2 * i, 2 * i) = c;
        M(2 * i, 2 * i + 1) = -s;
        M(2 * i + 1, 2 * i) = s;
        M(2 * i + 1, 2 * i + 1) = c;
    }
    M(2 * n, 2 * n) = 1.0;
    return M;
}

OrthMatrix swap_matrix(Mask V, int n) {
    OrthMatrix E = OrthMatrix::Identity(2 * n + 1, 2 * n + 1);
    for (int k = 1; k <= n; ++k)
        if (mask_has(V, k)) {
            E(2 * k - 2, 2 * k - 2) = 0;
            E(2 * k - 1, 2 * k - 1) = 0;
            E(2 * k - 2, 2 * k - 1) = 1;
            E(2 * k - 1, 2 * k - 2) = 1;
        }
    return E;
}

Eigen::MatrixXcd random_unitary(int n, CounterRng& rng) {
    Eigen::MatrixXcd Z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Z(i, j) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
    Eigen::MatrixXcd Q = qr.householderQ();
    const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is Haar.
    for (int j = 0; j < n; ++j) {
        const std::complex<double> d = R(j, j);
        Q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
    }
    return Q;
}

Eigen::MatrixXd random_special_orthogonal(int m, CounterRng& rng) {
    if (m == 0) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd Z(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) Z(i, j) = rng.next_gaussian();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
    Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < m; ++j)
        if (R(j, j) < 0) Q.col(j) *= -1.0;
    if (Q.determinant() < 0) Q.col(0) *= -1.0;
    return Q;
}

OrthMatrix sample_form(const FormSpec& spec, int n, std::uint64_t seed, std::uint64_t trial) {
    CounterRng rng(seed, trial);
    switch (spec.kind) {
        case FormSpec::Kind::plusmat:
            return kappa(random_unitary(n, rng));
        case FormSpec::Kind::so5_plus:
            if (n != 2) throw std::invalid_argument("sample_form: so5 forms require n = 2");
            return kappa(random_unitary(2, rng));
        case FormSpec::Kind::minusmat: {
            if (!spec.B || !spec.B->valid())
                throw std::invalid_argument("sample_form: minusmat requires a block");
            const OrthMatrix E = swap_matrix(spec.B->V, n);
            return E * kappa(random_unitary(n, rng)) * E;
        }
        case FormSpec::Kind::so5_pm: {
            if (n != 2) throw std::invalid_argument("sample_form: so5 forms require n = 2");
            const OrthMatrix E = swap_matrix(Mask(1) << 1, 2);
            return E * kappa(random_unitary(2, rng)) * E;
        }
        case FormSpec::Kind::block_diag_embed: {
            const int k = spec.inner;
            if (k < 1 || k > n)
                throw std::invalid_argument("sample_form: embed size out of range");
            const Eigen::MatrixXcd U = random_unitary(k, rng);
            const Eigen::MatrixXd Q = random_special_orthogonal(2 * (n - k), rng);
            OrthMatrix M = OrthMatrix::Zero(2 * n + 1, 2 * n + 1);
            const OrthMatrix inner = kappa(U);
            M.topLeftCorner(2 * k, 2 * k) = inner.topLeftCorner(2 * k, 2 * k);
            if (n > k) M.block(2 * k, 2 * k, 2 * (n - k), 2 * (n - k)) = Q;
            M(2 * n, 2 * n) = 1.0;
            return M;
        }
    }
    throw std::invalid_argument("sample_form: unknown kind");
}

std::optional<std::vector<double>> torus_angles(const OrthMatrix& M, double tol) {
    const int dim = static_cast<int>(M.rows());
    if (dim % 2 == 0 || M.cols() != dim) return std::nullopt;
    const int n = (dim - 1) / 2;
    OrthMatrix D = M;
    std::vector<double> angles(n);
    for (int i = 0; i < n; ++i) {
        const double c = M(2 * i, 2 * i), s = M(2 * i + 1, 2 * i);
        if (std::abs(M(2 * i, 2 * i + 1) + s) > tol || std::abs(M(2 * i + 1, 2 * i + 1) - c) > tol)
            return std::nullopt;
        if (std::abs(c * c + s * s - 1.0) > 10 * tol) return std::nullopt;
        angles[i] = std::atan2(s, c);
        D.block(2 * i, 2 * i, 2, 2).setZero();
    }
    if (std::abs(M(2 * n, 2 * n) - 1.0) > tol) return std::nullopt;
    D(2 * n, 2 * n) = 0;
    if (D.cwiseAbs().maxCoeff() > tol) return std::nullopt;
    return angles;
}

bool is_generic_torus(const OrthMatrix& M, double tol) {
    const auto angles = torus_angles(M, tol);
    if (!angles) return false;
    const int n = static_cast<int>(angles->size());
    std::vector<int> lambda(n, -1);
    while (true) {
        bool nonzero = false;
        double sum = 0;
        for (int i = 0; i < n; ++i) {
            if (lambda[i] != 0) nonzero = true;
            sum += lambda[i] * (*angles)[i];
        }
        if (nonzero && dist_to_multiple_of_two_pi(sum) <= tol) return false;
        int i = 0;
        while (i < n && lambda[i] == 1) lambda[i++] = -1;
        if (i == n) break;
        ++lambda[i];
    }
    return true;
}

OrthMatrix commutator_product(const std::vector<OrthMatrix>& A,
                              const std::vector<OrthMatrix>& B) {
    if (A.empty() || A.size() != B.size())
        throw std::invalid_argument("commutator_product: need matching nonempty tuples");
    OrthMatrix P = OrthMatrix::Identity(A[0].rows(), A[0].cols());
    for (std::size_t l = 0; l < A.size(); ++l)
        P = P * A[l] * B[l] * A[l].transpose() * B[l].transpose();
    return P;
}

std::pair<std::complex<double>, std::complex<double>> section_values(const OrthMatrix& M, int i,
                                                                     int j) {
    const double a = M(2 * i - 2, 2 * j - 2);
    const double b = M(2 * i - 2, 2 * j - 1);
    const double c = M(2 * i - 1, 2 * j - 2);
    const double d = M(2 * i - 1, 2 * j - 1);
    return {std::complex<double>(a - d, c + b), std::complex<double>(a + d, c - b)};
}

std::vector<SectionEmission> zero_sections(const FormSpec& spec, int n) {
    std::vector<SectionEmission> out;
    auto plus_all = [&] {
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) out.push_back({Sign::plus, i, j});
    };
    switch (spec.kind) {
        case FormSpec::Kind::plusmat:
        case FormSpec::Kind::so5_plus:
            plus_all();
            break;
        case FormSpec::Kind::minusmat:
        case FormSpec::Kind::so5_pm: {
            const Block B = spec.kind == FormSpec::Kind::minusmat
                                ? *spec.B
                                : Block{Mask(1) << 1, (Mask(1) << 1) | (Mask(1) << 2)};
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j)
                    out.push_back({eps_block(B, i, j) > 0 ? Sign::minus : Sign::plus, i, j});
            break;
        }
        case FormSpec::Kind::block_diag_embed:
            for (int i = 1; i <= spec.inner; ++i)
                for (int j = 1; j <= spec.inner; ++j) out.push_back({Sign::plus, i, j});
            for (int i = 1; i <= spec.inner; ++i)
                for (int j = spec.inner + 1; j <= n; ++j) {
                    out.push_back({Sign::plus, i, j});
                    out.push_back({Sign::minus, i, j});
                    out.push_back({Sign::plus, j, i});
                    out.push_back({Sign::minus, j, i});
                }
            break;
    }
    return out;
}

StressReport stress_lemma(const FormSpec& spec, int n, int g, long long trials, double tol,
                          std::uint64_t seed, int jobs) {
    if (trials < 1 || g < 1 || n < 1)
        throw std::invalid_argument("stress_lemma: need positive n, g, trials");
    StressReport report;
    report.spec = spec;
    report.n = n;
    report.g = g;
    report.trials = trials;
    report.tol = tol;
    report.seed = seed;

    const bool check_angle_sum =
        spec.kind == FormSpec::Kind::plusmat || spec.kind == FormSpec::Kind::so5_plus;

    std::vector<long long> violation_by_trial;
    std::vector<long long> anglesum_counts(std::max(1, jobs), 0);
    std::vector<std::vector<long long>> violations(std::max(1, jobs));
    auto run = [&](int w, long long lo, long long hi) {
        for (long long t = lo; t < hi; ++t) {
            std::vector<OrthMatrix> A(g), B(g);
            for (int l = 0; l < g; ++l) {
                A[l] = sample_form(spec, n, seed, static_cast<std::uint64_t>(t) * 2 * g + 2 * l);
                B[l] = sample_form(spec, n, seed,
                                   static_cast<std::uint64_t>(t) * 2 * g + 2 * l + 1);
            }
            const OrthMatrix P = commutator_product(A, B);
            if (is_generic_torus(P, tol)) violations[w].push_back(t);
            if (check_angle_sum) {
                if (auto angles = torus_angles(P, tol)) {
                    double sum = 0;
                    for (double th : *angles) sum += th;
                    if (dist_to_multiple_of_two_pi(sum) > tol) ++anglesum_counts[w];
                }
            }
        }
    };
    const int workers = std::max(1, jobs);
    if (workers == 1) {
        run(0, 0, trials);
    } else {
        std::vector<std::thread> pool;
        const long long chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long long lo = std::min<long long>(trials, w * chunk);
            const long long hi = std::min<long long>(trials, lo + chunk);
            if (lo < hi) pool.emplace_back(run, w, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    for (int w = 0; w < workers; ++w) {
        report.violations += static_cast<long long>(violations[w].size());
        report.angle_sum_failures += anglesum_counts[w];
        for (long long t : violations[w])
            if (!report.first_violation || t < *report.first_violation)
                report.first_violation = t;
    }
    return report;
}

DualityReport check_duality(const FormSpec& spec, int n, long long samples, double bump,
                            std::uint64_t seed) {
    DualityReport report;
    report.spec = spec;
    report.n = n;
    report.samples = samples;
    report.min_perturbed_section = std::numeric_limits<double>::infinity();
    const auto sections = zero_sections(spec, n);
    if (sections.empty()) throw std::invalid_argument("check_duality: form zeroes no sections");
    for (long long t = 0; t < samples; ++t) {
        const OrthMatrix M = sample_form(spec, n, seed, static_cast<std::uint64_t>(t));
        for (const SectionEmission& s : sections) {
            const auto [sp, sm] = section_values(M, s.i, s.j);
            const double v = std::abs(s.sign == Sign::plus ? sp : sm);
            report.max_zero_section = std::max(report.max_zero_section, v);
        }
        // Bump one structured entry and confirm the matching section reacts.
        const SectionEmission& s = sections[static_cast<std::size_t>(t) % sections.size()];
        OrthMatrix Mp = M;
        Mp(2 * s.i - 2, 2 * s.j - 2) += bump;
        const auto [sp, sm] = section_values(Mp, s.i, s.j);
        const double v = std::abs(s.sign == Sign::plus ? sp : sm);
        report.min_perturbed_section = std::min(report.min_perturbed_section, v);
    }
    return report;
}

double kappa_residual(int n, long long pairs, std::uint64_t seed) {
    double worst = 0;
    for (long long t = 0; t < pairs; ++t) {
        CounterRng rng(seed, static_cast<std::uint64_t>(t) | (1ULL << 62));
        const Eigen::MatrixXcd U = random_unitary(n, rng);
        const Eigen::MatrixXcd V = random_unitary(n, rng);
        const double r = (kappa(U * V) - kappa(U) * kappa(V)).cwiseAbs().maxCoeff();
        worst = std::max(worst, r);
    }
    return worst;
}

}  // namespace soq
