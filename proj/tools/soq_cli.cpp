// soq: normal forms, decomposition certificates, theorem verification,
// good-monomial enumeration, lemma suites, and holonomy stress tests.
//
// Exit codes: 0 success, 2 a verification check failed (a report is still
// printed), 1 usage / input error.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "soq/blocks.hpp"
#include "soq/decompose.hpp"
#include "soq/diag.hpp"
#include "soq/good.hpp"
#include "soq/holonomy.hpp"
#include "soq/oracle.hpp"
#include "soq/poly.hpp"
#include "soq/serialize.hpp"

namespace {

using namespace soq;

constexpr int kExitVerifyFailed = 2;

Mask full_mask(int n) {
    Mask X = 0;
    for (int i = 1; i <= n; ++i) X |= Mask(1) << i;
    return X;
}

int default_degree(int n, int g) { return 2 * g * n * n + (n - 1) * (n - 2) / 2; }

double env_double(const char* name, double fallback) {
    if (const char* v = std::getenv(name)) return std::atof(v);
    return fallback;
}

int env_int(const char* name, int fallback) {
    if (const char* v = std::getenv(name)) return std::atoi(v);
    return fallback;
}

// "depth=3,blocks=2" in either order; either key may be omitted.
EnumCaps parse_caps(const std::string& text, EnumCaps caps) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--caps", "expected key=value");
        std::string key = item.substr(0, eq);
        int value = std::stoi(item.substr(eq + 1));
        if (key == "depth")
            caps.max_split_depth = value;
        else if (key == "blocks")
            caps.max_blocks_per_slot = value;
        else
            throw CLI::ValidationError("--caps", "unknown key '" + key + "'");
    }
    return caps;
}

EnumCaps default_caps() {
    EnumCaps caps;
    caps.max_split_depth = env_int("SOQ_CAP_DEPTH", 2);
    caps.max_blocks_per_slot = env_int("SOQ_CAP_BLOCKS", 2);
    return caps;
}

void emit(const Json& report, bool json) {
    if (json) {
        Json out = report;
        out["schema"] = 1;
        std::cout << out.dump(2) << "\n";
    }
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

int cmd_normal_form(int n, const std::string& poly_text, bool json) {
    Polynomial p = parse_polynomial(poly_text);
    Mask X = full_mask(n);
    for (const Monomial& m : p.monomials())
        for (const auto& [v, e] : m.exps)
            if (!mask_has(X, v.i) || !mask_has(X, v.j))
                throw std::runtime_error("variable index out of range for n=" + std::to_string(n));
    DiagonalPolynomial nf = normal_form(p);
    if (json)
        emit(Json{{"n", n}, {"input", p.str()}, {"normal_form", to_json(nf)}}, true);
    else
        std::cout << nf.str() << "\n";
    return 0;
}

int cmd_decompose(int n, int g, const std::string& mono_text, bool trace, bool so5, bool json) {
    Monomial p = parse_monomial(mono_text);
    Mask X = full_mask(n);
    Timer timer;

    if (so5) {
        if (n != 2) throw std::runtime_error("--so5 requires n=2");
        auto terms = so5_decompose(p, g);
        // Re-verify: sum multiplier * basis == p in R.
        Polynomial recon;
        for (const auto& t : terms) {
            Monomial prod = t.multiplier;
            for (const auto& [v, e] : t.basis.monomial().exps) prod.mul_var(v.sign, v.i, v.j, e);
            prod.coeff = prod.coeff * t.basis.monomial().coeff;
            recon.add_term(prod);
        }
        bool ok = equal_in_R(recon, p.as_poly());
        std::cerr << "so5 basis terms: " << terms.size() << " verified in " << timer.ms()
                  << " ms\n";
        Json jterms = Json::array();
        for (const auto& t : terms)
            jterms.push_back({{"multiplier", t.multiplier.str()}, {"basis", t.basis.name()}});
        if (json)
            emit(Json{{"n", n}, {"g", g}, {"monomial", p.str()}, {"basis_terms", jterms},
                      {"verified", ok}},
                 true);
        else
            for (const auto& t : terms)
                std::cout << t.basis.name() << " * (" << t.multiplier.str() << ")\n";
        return ok ? 0 : kExitVerifyFailed;
    }

    Decomposition dec = decompose_full(p, X, g);
    bool ok = verify_decomposition(dec, p, X, g);
    std::cerr << "decomposition terms: " << dec.terms.size() << " verified in " << timer.ms()
              << " ms\n";
    Json report = {{"n", n},         {"g", g},     {"monomial", p.str()},
                   {"certificate", to_json(dec)},  {"verified", ok}};
    if (!trace) report["certificate"].erase("trace");
    if (json)
        emit(report, true);
    else {
        for (const auto& t : dec.terms)
            std::cout << "(" << t.theta.str() << ") * [" << t.good.mono.str() << "]\n";
        if (trace)
            for (const auto& s : dec.trace) std::cout << "# " << s.rule << ": " << s.detail << "\n";
        std::cout << (ok ? "verified" : "VERIFICATION FAILED") << "\n";
    }
    return ok ? 0 : kExitVerifyFailed;
}

int cmd_verify_theorem(int n, int g, int degree, const EnumCaps& caps, int jobs, bool json) {
    if (degree < 0) degree = default_degree(n, g);
    std::cerr << "verifying all degree-" << degree << " monomials, n=" << n << " g=" << g
              << " (depth<=" << caps.max_split_depth << ", blocks<=" << caps.max_blocks_per_slot
              << ", jobs=" << jobs << ")\n";
    Timer timer;
    TheoremReport report = verify_theorem(n, g, degree, caps, jobs);
    std::cerr << report.monomials.size() << " monomials, " << report.goods_used << " goods, "
              << timer.ms() << " ms\n";
    if (json)
        emit(to_json(report), true);
    else {
        for (const auto& st : report.monomials)
            if (!st.certified) {
                std::string s;
                for (const auto& [i, k] : st.mono) s += "d" + std::to_string(i) + "^" +
                                                        std::to_string(k) + " ";
                std::cout << s << ": not certified under caps\n";
            }
        std::cout << (report.all_certified()
                          ? "all " + std::to_string(report.monomials.size()) + " certified"
                          : std::to_string(report.not_certified_count()) +
                                " not certified under caps")
                  << "\n";
    }
    return report.all_certified() ? 0 : kExitVerifyFailed;
}

int cmd_enumerate_good(int n, int g, const EnumCaps& caps, bool json) {
    auto goods = enumerate_good(n, g, caps);
    if (json) {
        Json arr = Json::array();
        for (const auto& gm : goods) arr.push_back(to_json(gm));
        emit(Json{{"n", n}, {"g", g}, {"count", goods.size()}, {"goods", arr}}, true);
    } else {
        for (const auto& gm : goods) std::cout << gm.mono.str() << "\n";
        std::cerr << goods.size() << " good monomials\n";
    }
    return 0;
}

int suite_exit(const SuiteReport& report, bool json) {
    if (json)
        emit(to_json(report), true);
    else
        for (const auto& e : report.entries)
            std::cout << e.name << " [" << e.params << "]: " << e.cases << " cases ("
                      << e.vacuous << " vacuous) " << (e.holds ? "ok" : "FAILED") << "\n";
    return report.all_hold() ? 0 : kExitVerifyFailed;
}

int cmd_holonomy(int n, int g, const std::string& form, const std::string& block_v,
                 long long trials, long long duality_samples, std::uint64_t seed, double tol,
                 int jobs, bool json) {
    std::vector<FormSpec> specs;
    if (form == "plusmat" || form == "all") specs.push_back(FormSpec{FormSpec::Kind::plusmat});
    if (form == "minusmat" || form == "all") {
        if (!block_v.empty()) {
            std::vector<int> vs;
            std::stringstream ss(block_v);
            std::string item;
            while (std::getline(ss, item, ',')) vs.push_back(std::stoi(item));
            Block B{indices_to_mask(vs), full_mask(n)};
            if (!B.valid()) throw std::runtime_error("--block does not define a proper bipartition");
            specs.push_back(FormSpec{FormSpec::Kind::minusmat, B});
        } else {
            for (const Block& B : enumerate_blocks(full_mask(n)))
                specs.push_back(FormSpec{FormSpec::Kind::minusmat, B});
        }
    }
    if (specs.empty()) throw std::runtime_error("unknown --form '" + form + "'");

    bool all_ok = true;
    Json jspecs = Json::array();
    for (const FormSpec& spec : specs) {
        std::cerr << "stress " << spec.name() << " n=" << n << " g=" << g << " trials=" << trials
                  << "\n";
        StressReport stress = stress_lemma(spec, n, g, trials, tol, seed, jobs);
        DualityReport duality = check_duality(spec, n, duality_samples, 1e-3, seed);
        bool ok = stress.violations == 0 && stress.angle_sum_failures == 0 &&
                  duality.max_zero_section <= 1e-12 && duality.min_perturbed_section > tol;
        all_ok = all_ok && ok;
        if (json)
            jspecs.push_back({{"stress", to_json(stress)}, {"duality", to_json(duality)},
                              {"ok", ok}});
        else
            std::cout << spec.name() << ": violations=" << stress.violations
                      << " angle_sum_failures=" << stress.angle_sum_failures
                      << " max_zero_section=" << duality.max_zero_section
                      << " min_perturbed_section=" << duality.min_perturbed_section << " "
                      << (ok ? "ok" : "FAILED") << "\n";
    }
    double residual = kappa_residual(n, 1000, seed);
    bool kappa_ok = residual < tol;
    all_ok = all_ok && kappa_ok;
    if (json)
        emit(Json{{"n", n}, {"g", g}, {"trials", trials}, {"tol", tol}, {"seed", seed},
                  {"forms", jspecs}, {"kappa_residual", residual}, {"ok", all_ok}},
             true);
    else
        std::cout << "kappa residual: " << residual << (kappa_ok ? " ok" : " FAILED") << "\n";
    return all_ok ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact quotient-ring calculus, decomposition certificates, and holonomy tests"};
    app.require_subcommand(1);

    int n = 1, g = 1, degree = -1, jobs = 1, max_size = 6, m_max = 8, g_max = 3;
    std::string poly_text, mono_text, caps_text, form = "all", block_v;
    bool json = false, trace = false, so5 = false;
    long long trials = 10000, duality_samples = 1000;
    std::uint64_t seed = 42;
    double tol = env_double("SOQ_TOL", 1e-9);
    EnumCaps caps = default_caps();

    auto add_common = [&](CLI::App* sub, bool with_g = true) {
        sub->add_option("--n", n, "number of indices")->check(CLI::Range(1, 8));
        if (with_g) sub->add_option("--g", g, "genus parameter")->check(CLI::PositiveNumber);
        sub->add_flag("--json", json, "machine-readable report on stdout");
    };

    auto* nf = app.add_subcommand("normal-form", "reduce a polynomial to diagonal normal form");
    add_common(nf, false);
    nf->add_option("--poly", poly_text, "polynomial, e.g. \"y+12^2 + 3/4*y-12*y+11\"")
        ->required();

    auto* dec = app.add_subcommand("decompose",
                                   "write a monomial over the good monomials, with certificate");
    add_common(dec);
    dec->add_option("--monomial", mono_text, "monomial, e.g. \"y+11^8\"")->required();
    dec->add_flag("--trace", trace, "include the rewrite trace");
    dec->add_flag("--so5", so5, "use the explicit n=2 basis decomposition instead");

    auto* vt = app.add_subcommand("verify-theorem",
                                  "certify every diagonal monomial at the degree bound");
    add_common(vt);
    vt->add_option("--degree", degree, "target degree (default: 2gn^2 + (n-1)(n-2)/2)");
    vt->add_option("--caps", caps_text, "enumeration caps, e.g. depth=3,blocks=2");
    vt->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* eg = app.add_subcommand("enumerate-good", "list good monomials with provenance");
    add_common(eg);
    eg->add_option("--caps", caps_text, "enumeration caps, e.g. depth=3,blocks=2");
    eg->add_option("--max-depth", caps.max_split_depth, "split depth cap");
    eg->add_option("--max-blocks", caps.max_blocks_per_slot, "blocks per slot cap");

    auto* cb = app.add_subcommand("check-blocks", "exhaustive block-calculus lemma suite");
    cb->add_option("--max-size", max_size, "largest ambient set")->check(CLI::Range(2, 10));
    cb->add_flag("--json", json, "machine-readable report on stdout");

    auto* cp = app.add_subcommand("check-pigeonhole", "exhaustive degree-split lemma suite");
    cp->add_option("--max-m", m_max, "largest index-set size")->check(CLI::PositiveNumber);
    cp->add_option("--max-g", g_max, "largest genus")->check(CLI::PositiveNumber);
    cp->add_flag("--json", json, "machine-readable report on stdout");

    auto* ht = app.add_subcommand("holonomy-test",
                                  "numeric stress tests of the no-common-zeros lemmas");
    add_common(ht);
    ht->add_option("--form", form, "plusmat, minusmat, or all");
    ht->add_option("--block", block_v, "V side of the minusmat block, e.g. 1,3");
    ht->add_option("--trials", trials, "commutator samples per form");
    ht->add_option("--duality-samples", duality_samples, "form/section duality samples");
    ht->add_option("--seed", seed, "RNG seed");
    ht->add_option("--tol", tol, "torus-proximity tolerance");
    ht->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!caps_text.empty()) caps = parse_caps(caps_text, caps);
        if (nf->parsed()) return cmd_normal_form(n, poly_text, json);
        if (dec->parsed()) return cmd_decompose(n, g, mono_text, trace, so5, json);
        if (vt->parsed()) return cmd_verify_theorem(n, g, degree, caps, jobs, json);
        if (eg->parsed()) return cmd_enumerate_good(n, g, caps, json);
        if (cb->parsed()) return suite_exit(check_block_lemmas(max_size), json);
        if (cp->parsed()) return suite_exit(check_pigeonhole_lemmas(m_max, g_max), json);
        if (ht->parsed())
            return cmd_holonomy(n, g, form, block_v, trials, duality_samples, seed, tol, jobs,
                                json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
