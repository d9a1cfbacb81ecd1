#include "soq/serialize.hpp"

namespace soq {

namespace {

Json indices_json(Mask m) {
    Json out = Json::array();
    for (int i : mask_to_indices(m)) out.push_back(i);
    return out;
}

Json vars_json(const ExpMap& exps) {
    Json vars = Json::array();
    for (const auto& [v, e] : exps)
        vars.push_back({{"sign", std::string(1, sign_char(v.sign))},
                        {"i", v.i},
                        {"j", v.j},
                        {"exp", e}});
    return vars;
}

}  // namespace

Json to_json(const Monomial& m) {
    return {{"coeff", to_string(m.coeff)}, {"vars", vars_json(m.exps)}};
}

Json to_json(const Polynomial& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms)
        terms.push_back({{"coeff", to_string(c)}, {"vars", vars_json(e)}});
    return {{"terms", terms}};
}

Json to_json(const DiagonalPolynomial& q) {
    Json terms = Json::array();
    for (const auto& [e, c] : q.terms) {
        Json vars = Json::array();
        for (const auto& [i, k] : e) vars.push_back({{"i", i}, {"exp", k}});
        terms.push_back({{"coeff", to_string(c)}, {"vars", vars}});
    }
    return {{"terms", terms}, {"text", q.str()}};
}

Json to_json(const Block& b) {
    return {{"V", indices_json(b.V)}, {"X", indices_json(b.X)}};
}

Json to_json(const GoodNode& node) {
    if (node.kind == GoodNode::Kind::base) {
        Json D = Json::array();
        for (const BlockUnion& u : node.D) {
            Json slot = Json::array();
            for (const Block& b : u) slot.push_back(to_json(b));
            D.push_back(slot);
        }
        return {{"kind", "base"},
                {"X", indices_json(node.X)},
                {"B", node.B ? to_json(*node.B) : Json(nullptr)},
                {"D", D}};
    }
    return {{"kind", "split"},
            {"X", indices_json(node.X)},
            {"inner", indices_json(node.inner)},
            {"outer", indices_json(node.outer)},
            {"child", node.child ? to_json(*node.child) : Json(nullptr)}};
}

Json to_json(const GoodMonomial& gm) {
    return {{"monomial", gm.mono.str()},
            {"g", gm.coll.g},
            {"provenance", gm.coll.provenance ? to_json(*gm.coll.provenance) : Json(nullptr)}};
}

Json to_json(const Decomposition& dec) {
    Json terms = Json::array();
    for (const DecompTerm& t : dec.terms)
        terms.push_back({{"theta", t.theta.str()},
                         {"good", to_json(t.good)}});
    Json trace = Json::array();
    for (const LemmaStep& s : dec.trace) trace.push_back({{"rule", s.rule}, {"detail", s.detail}});
    return {{"terms", terms}, {"trace", trace}};
}

Json to_json(const MembershipCertificate& cert) {
    Json comb = Json::array();
    for (const auto& [gi, cof] : cert.combination)
        comb.push_back({{"good", gi}, {"cofactor", cof.str()}});
    return {{"target", cert.target.str()}, {"combination", comb}};
}

Json to_json(const TheoremReport& report) {
    Json monos = Json::array();
    for (const auto& st : report.monomials) {
        Json e = Json::array();
        for (const auto& [i, k] : st.mono) e.push_back({{"i", i}, {"exp", k}});
        monos.push_back({{"monomial", e},
                         {"status", st.certified ? "certified" : "not certified under caps"},
                         {"certificate_terms", st.certificate_terms}});
    }
    return {{"n", report.n},
            {"g", report.g},
            {"degree", report.d},
            {"caps",
             {{"max_blocks_per_slot", report.caps.max_blocks_per_slot},
              {"max_split_depth", report.caps.max_split_depth}}},
            {"goods_used", report.goods_used},
            {"all_certified", report.all_certified()},
            {"not_certified", report.not_certified_count()},
            {"monomials", monos}};
}

Json to_json(const SuiteReport& report) {
    Json entries = Json::array();
    for (const SuiteEntry& e : report.entries)
        entries.push_back({{"name", e.name},
                           {"params", e.params},
                           {"cases", e.cases},
                           {"vacuous", e.vacuous},
                           {"holds", e.holds}});
    return {{"all_hold", report.all_hold()}, {"total_cases", report.total_cases()},
            {"entries", entries}};
}

Json to_json(const StressReport& report) {
    Json out = {{"form", report.spec.name()},
                {"n", report.n},
                {"g", report.g},
                {"trials", report.trials},
                {"tol", report.tol},
                {"seed", report.seed},
                {"violations", report.violations},
                {"angle_sum_failures", report.angle_sum_failures}};
    if (report.spec.B) out["block"] = to_json(*report.spec.B);
    if (report.first_violation) out["first_violation"] = *report.first_violation;
    return out;
}

Json to_json(const DualityReport& report) {
    Json out = {{"form", report.spec.name()},
                {"n", report.n},
                {"samples", report.samples},
                {"max_zero_section", report.max_zero_section},
                {"min_perturbed_section", report.min_perturbed_section}};
    if (report.spec.B) out["block"] = to_json(*report.spec.B);
    return out;
}

}  // namespace soq
