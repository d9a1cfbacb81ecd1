#pragma once

// JSON views of the library's value types. Schemas are versioned by the
// top-level "schema": 1 field added at every CLI emission point; the
// functions here produce the payload objects.

#include "soq/decompose.hpp"
#include "soq/good.hpp"
#include "soq/holonomy.hpp"
#include "soq/oracle.hpp"

#include <json.hpp>

namespace soq {

using Json = nlohmann::json;

Json to_json(const Monomial& m);
Json to_json(const Polynomial& p);
Json to_json(const DiagonalPolynomial& q);
Json to_json(const Block& b);
Json to_json(const GoodNode& node);
Json to_json(const GoodMonomial& gm);
Json to_json(const Decomposition& dec);
Json to_json(const MembershipCertificate& cert);
Json to_json(const TheoremReport& report);
Json to_json(const SuiteReport& report);
Json to_json(const StressReport& report);
Json to_json(const DualityReport& report);

}  // namespace soq
