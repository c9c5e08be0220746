#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "momtail/constructions.hpp"
#include "momtail/filters.hpp"
#include "momtail/games.hpp"
#include "momtail/measures.hpp"
#include "momtail/tailorder.hpp"

namespace momtail {

using Json = nlohmann::ordered_json;

// Rationals travel as "p/q" strings; parsing also accepts JSON integers and
// decimal strings.
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);
Json to_json(const std::vector<Rational>& v);
std::vector<Rational> rationals_from_json(const Json& j);
Json to_json(const Polynomial& p);

/// {"kind": "discrete" | "rule" | "density", ...}
Json to_json(const Measure& mu);
Json to_json(const PiecewisePolyDensity& d);
Measure measure_from_json(const Json& j);

Json to_json(const MomentValue& m);
/// Header "k,value,error_radius,exact"; one row per order.
std::string moment_table_csv(const std::vector<MomentValue>& table);

Json to_json(const TailVerdict& v);
Json to_json(const CertifyResult& r);
Json to_json(const PositivityCertificate& c);

Json to_json(const VanishingKernel& k);
Json to_json(const StagedKernel& k);
Json to_json(const MatchedPair& m);
Json to_json(const AlternatingPair& p);
Json to_json(const RunReport& r);
Json to_json(const UnimodalPair& u);
Json to_json(const MixedDemo& m);
Json to_json(const DiscretePair& p);
Json to_json(const AcPair& p);
Json to_json(const SmoothKernelReport& r);

Json to_json(const ThetaResult& t);
Json to_json(const MszVerdict& v);
Json to_json(const FipResult& f);

/// {"payoff": [[["3/10", "1/5", "1/2"], ...], ...]}
DistGame game_from_json(const Json& j);
Json to_json(const DistGame& g);
MixedProfile profile_from_json(const Json& j);
Json to_json(const MixedProfile& v);
Json to_json(const Matrix& m);
Json to_json(const ZeroSumSolution& s);
Json to_json(const FaceChain& c);
Json to_json(const LexCheck& c);
Json to_json(const EquilibriumReport& r);

}  // namespace momtail
