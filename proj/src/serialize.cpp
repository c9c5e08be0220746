#include "momtail/serialize.hpp"

#include <sstream>

#include "momtail/errors.hpp"

namespace momtail {

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return Rational(std::to_string(j.get<unsigned long long>()));
  throw InputError("expected a rational as a string such as \"3/10\" or an integer");
}

Json to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

Json to_json(const Polynomial& p) { return to_json(p.coefficients()); }

namespace {

Json atoms_json(const std::vector<Atom>& atoms) {
  Json out = Json::array();
  for (const auto& a : atoms) out.push_back({{"location", to_json(a.location)}, {"mass", to_json(a.mass)}});
  return out;
}

std::vector<Atom> atoms_from_json(const Json& j) {
  std::vector<Atom> out;
  for (const auto& a : j) out.push_back({rational_from_json(a.at("location")), rational_from_json(a.at("mass"))});
  return out;
}

Json location_json(const LocationRule& r) {
  return {{"form", r.form == LocationRule::Form::Reciprocal ? "reciprocal" : "reciprocal-midpoint"},
          {"p", to_json(r.p)},
          {"q", to_json(r.q)},
          {"r", to_json(r.r)}};
}

LocationRule location_from_json(const Json& j) {
  LocationRule r;
  const std::string form = j.at("form").get<std::string>();
  if (form == "reciprocal")
    r.form = LocationRule::Form::Reciprocal;
  else if (form == "reciprocal-midpoint")
    r.form = LocationRule::Form::ReciprocalMidpoint;
  else
    throw InputError("unknown location rule form '" + form + "'");
  r.p = rational_from_json(j.at("p"));
  r.q = rational_from_json(j.at("q"));
  r.r = rational_from_json(j.at("r"));
  return r;
}

Json mass_json(const MassRule& m) {
  Json out = {{"form", m.form == MassRule::Form::Geometric ? "geometric" : "damped-geometric"},
              {"scale", to_json(m.scale)},
              {"ratio", to_json(m.ratio)}};
  if (m.form == MassRule::Form::DampedGeometric) out["damping"] = location_json(m.damping);
  return out;
}

MassRule mass_from_json(const Json& j) {
  MassRule m;
  const std::string form = j.at("form").get<std::string>();
  if (form == "geometric")
    m.form = MassRule::Form::Geometric;
  else if (form == "damped-geometric")
    m.form = MassRule::Form::DampedGeometric;
  else
    throw InputError("unknown mass rule form '" + form + "'");
  m.scale = rational_from_json(j.at("scale"));
  m.ratio = rational_from_json(j.at("ratio"));
  if (m.form == MassRule::Form::DampedGeometric) m.damping = location_from_json(j.at("damping"));
  return m;
}

Json signs_json(const std::vector<std::pair<unsigned long, int>>& v) {
  Json out = Json::array();
  for (const auto& [k, s] : v) out.push_back({{"k", k}, {"sign", s}});
  return out;
}

Json certificate_json(const Certificate& c) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CdfDominance>) return {{"type", "cdf-dominance"}, {"x0", to_json(x.x0)}};
        if constexpr (std::is_same_v<T, DensityDominance>)
          return {{"type", "density-dominance"}, {"x0", to_json(x.x0)}};
        if constexpr (std::is_same_v<T, RightmostDifference>)
          return {{"type", "rightmost-difference"}, {"lo", to_json(x.lo)}, {"hi", to_json(x.hi)}, {"sign", x.sign}};
        if constexpr (std::is_same_v<T, MomentPrefix>)
          return {{"type", "moment-prefix"}, {"n0", x.n0}, {"checked_to", x.checked_to}};
      },
      c);
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, Rational>)
    return to_json(*v);
  else
    return *v;
}

Json base_pair_json(const AlternatingPair& p) {
  Json bumps = Json::array();
  for (const auto& b : p.bumps) bumps.push_back(to_json(b));
  return {{"indices", p.indices},
          {"padded", p.padded},
          {"degree", p.degree},
          {"c", to_json(p.c)},
          {"d", to_json(p.d)},
          {"d_prime", to_json(p.d_prime)},
          {"D", to_json(p.D)},
          {"grid", to_json(p.grid)},
          {"bump_masses", to_json(p.bump_masses)},
          {"bumps", bumps},
          {"f", to_json(p.f)},
          {"g", to_json(p.g)}};
}

}  // namespace

Json to_json(const PiecewisePolyDensity& d) {
  Json pieces = Json::array();
  for (const auto& p : d.pieces) pieces.push_back(to_json(p));
  return {{"kind", "density"}, {"breakpoints", to_json(d.breakpoints)}, {"pieces", pieces}, {"signed", d.is_signed}};
}

Json to_json(const Measure& mu) {
  return std::visit(
      [](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DiscreteFinite>) return {{"kind", "discrete"}, {"atoms", atoms_json(m.atoms)}};
        if constexpr (std::is_same_v<T, DiscreteRule>)
          return {{"kind", "rule"},
                  {"head", atoms_json(m.head)},
                  {"location", location_json(m.location)},
                  {"mass", mass_json(m.mass)},
                  {"truncation", m.truncation},
                  {"support_upper_bound", to_json(m.support_upper_bound)}};
        if constexpr (std::is_same_v<T, PiecewisePolyDensity>) return to_json(m);
      },
      mu);
}

Measure measure_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    Measure mu;
    if (kind == "discrete") {
      mu = DiscreteFinite{atoms_from_json(j.at("atoms"))};
    } else if (kind == "rule") {
      DiscreteRule r;
      if (j.contains("head")) r.head = atoms_from_json(j.at("head"));
      r.location = location_from_json(j.at("location"));
      r.mass = mass_from_json(j.at("mass"));
      r.truncation = j.at("truncation").get<unsigned long>();
      r.support_upper_bound = rational_from_json(j.at("support_upper_bound"));
      mu = r;
    } else if (kind == "density") {
      std::vector<Polynomial> pieces;
      for (const auto& p : j.at("pieces")) pieces.emplace_back(rationals_from_json(p));
      mu = make_density(rationals_from_json(j.at("breakpoints")), std::move(pieces), j.value("signed", false));
    } else {
      throw InputError("unknown measure kind '" + kind + "'");
    }
    validate(mu);
    return mu;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed measure JSON: ") + e.what());
  }
}

Json to_json(const MomentValue& m) { return {{"value", to_json(m.value)}, {"error_radius", to_json(m.error_radius)}}; }

std::string moment_table_csv(const std::vector<MomentValue>& table) {
  std::ostringstream os;
  os << "k,value,error_radius,exact\n";
  for (std::size_t k = 0; k < table.size(); ++k)
    os << k << ',' << to_string(table[k].value) << ',' << to_string(table[k].error_radius) << ','
       << (table[k].exact() ? "true" : "false") << '\n';
  return os.str();
}

Json to_json(const TailVerdict& v) {
  Json out = std::visit(
      [](const auto& o) -> Json {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, StrictlyBelow>)
          return {{"outcome", "strictly-below"}, {"certificate", certificate_json(o.certificate)}};
        if constexpr (std::is_same_v<T, StrictlyAbove>)
          return {{"outcome", "strictly-above"}, {"certificate", certificate_json(o.certificate)}};
        if constexpr (std::is_same_v<T, EqualPrefix>) return {{"outcome", "equal-prefix"}, {"agree_from", o.agree_from}};
        if constexpr (std::is_same_v<T, AlternationWitness>)
          return {{"outcome", "alternation-witness"}, {"indices", signs_json(o.indices)}};
        if constexpr (std::is_same_v<T, Undetermined>) return {{"outcome", "undetermined"}, {"depth", o.depth}};
      },
      v.outcome);
  out["evidence"] = v.evidence == Evidence::Proved ? "proved" : "heuristic";
  out["detail"] = v.detail;
  return out;
}

Json to_json(const CertifyResult& r) {
  return {{"certified", r.certified},
          {"verdict", to_json(r.verdict)},
          {"witness", optional_json(r.witness)},
          {"detail", r.detail}};
}

Json to_json(const PositivityCertificate& c) {
  return {{"certified", c.certified},
          {"n0", optional_json(c.n0)},
          {"witness", optional_json(c.witness)},
          {"detail", c.detail}};
}

Json to_json(const VanishingKernel& k) {
  Json supports = Json::array();
  for (const auto& [lo, hi] : k.supports) supports.push_back({to_json(lo), to_json(hi)});
  return {{"vanished_orders", k.vanished_orders},
          {"x0", to_json(k.x0)},
          {"coefficients", to_json(k.coefficients)},
          {"supports", supports},
          {"perturbed", k.perturbed},
          {"density", to_json(k.density)}};
}

Json to_json(const StagedKernel& k) {
  Json stages = Json::array();
  for (const auto& s : k.stages)
    stages.push_back({{"exponent", s.exponent},
                      {"scale", to_json(s.scale)},
                      {"ratio", to_json(s.ratio)},
                      {"searched", s.searched},
                      {"kernel_orders", s.kernel_orders}});
  return {{"exponents", k.exponents},
          {"grid", to_json(k.grid)},
          {"sup_norm", to_json(k.sup_norm)},
          {"stages", stages},
          {"density", to_json(k.density)}};
}

Json to_json(const MatchedPair& m) {
  return {{"agreement", m.agreement},
          {"epsilon", to_json(m.epsilon)},
          {"c", to_json(m.c)},
          {"d", to_json(m.d)},
          {"kernel_scale", to_json(m.kernel_scale)},
          {"kernel", to_json(m.kernel)},
          {"f1", to_json(m.f1)},
          {"f2", to_json(m.f2)}};
}

Json to_json(const AlternatingPair& p) { return base_pair_json(p); }

Json to_json(const RunReport& r) {
  Json runs = Json::array();
  for (const auto& run : r.runs)
    runs.push_back({{"start", run.start},
                    {"end", run.end},
                    {"sign", run.sign},
                    {"harmonic", to_json(run.harmonic)},
                    {"holds", run.holds},
                    {"first_failure", optional_json(run.first_failure)}});
  return {{"depth", r.depth}, {"all_hold", r.all_hold}, {"runs", runs}, {"M1", r.M1}, {"M2", r.M2}};
}

Json to_json(const UnimodalPair& u) {
  return {{"indices", u.indices},
          {"c", to_json(u.c)},
          {"d", to_json(u.d)},
          {"K", to_json(u.K)},
          {"L", to_json(u.L)},
          {"alpha", to_json(u.alpha)},
          {"f_derivative_sign_changes", u.f_derivative_sign_changes},
          {"g_derivative_sign_changes", u.g_derivative_sign_changes},
          {"scaling_identity_holds", u.scaling_identity_holds},
          {"base", to_json(u.base)},
          {"f", to_json(u.f)},
          {"g", to_json(u.g)},
          {"inner", base_pair_json(u.inner)}};
}

Json to_json(const MixedDemo& m) {
  return {{"gamma1", to_json(m.gamma1)},
          {"gamma2", to_json(m.gamma2)},
          {"x0", to_json(m.x0)},
          {"g_minus_f1", to_json(m.below)},
          {"f2_minus_g", to_json(m.above)},
          {"mixture_is_f", m.mixture_is_f},
          {"mixture_signs", signs_json(m.mixture_signs)},
          {"mixture_alternates", m.mixture_alternates},
          {"f1", to_json(m.f1)},
          {"f2", to_json(m.f2)},
          {"g", to_json(m.g)},
          {"mixture", to_json(m.mixture)}};
}

Json to_json(const DiscretePair& p) {
  const auto& r = p.report;
  Json cdf_rows = Json::array();
  for (const auto& row : r.cdf_rows)
    cdf_rows.push_back({{"k", row.k},
                        {"x", to_json(row.x)},
                        {"y", to_json(row.y)},
                        {"F_x", to_json(row.F_x)},
                        {"G_x", to_json(row.G_x)},
                        {"F_y", to_json(row.F_y)},
                        {"G_y", to_json(row.G_y)},
                        {"G_below_at_x", row.G_below_at_x},
                        {"G_above_at_y", row.G_above_at_y}});
  Json moment_rows = Json::array();
  for (const auto& row : r.moment_rows)
    moment_rows.push_back({{"n", row.n},
                           {"claimed", to_json(row.claimed)},
                           {"lower_bound", to_json(row.lower_bound)},
                           {"terms_nonnegative", row.terms_nonnegative},
                           {"holds", row.holds}});
  return {{"a", to_json(r.a)},
          {"y0", to_json(r.y0)},
          {"g_y0", to_json(r.g_y0)},
          {"truncation", r.truncation},
          {"tail_from", r.tail_from},
          {"c", to_json(r.c)},
          {"cdf_alternates", r.cdf_alternates},
          {"moments_dominate", r.moments_dominate},
          {"cdf_rows", cdf_rows},
          {"moment_rows", moment_rows},
          {"mu_f", to_json(Measure(p.mu_f))},
          {"mu_g", to_json(Measure(p.mu_g))}};
}

Json to_json(const AcPair& p) {
  Json rows = Json::array();
  for (const auto& row : p.rows)
    rows.push_back({{"k", row.k},
                    {"x", to_json(row.x)},
                    {"z_next", to_json(row.z_next)},
                    {"F_x", to_json(row.F_x)},
                    {"G_x", to_json(row.G_x)},
                    {"F_z", to_json(row.F_z)},
                    {"G_z", to_json(row.G_z)},
                    {"ok", row.ok}});
  return {{"alternates", p.alternates},
          {"missing_f", to_json(p.missing_f)},
          {"missing_g", to_json(p.missing_g)},
          {"rows", rows},
          {"empirical", to_json(p.empirical)},
          {"f", to_json(p.f)},
          {"g", to_json(p.g)}};
}

Json to_json(const SmoothKernelReport& r) {
  return {{"coefficients", r.coefficients}, {"moments", r.moments}, {"max_abs_vanished", r.max_abs_vanished}};
}

Json to_json(const ThetaResult& t) {
  if (t.diverges)
    return {{"diverges", true}, {"residue", t.residue}, {"modulus", t.modulus}, {"from", t.from}};
  return {{"diverges", false}, {"value", to_json(t.value)}};
}

Json to_json(const MszVerdict& v) {
  const char* kind = v.kind == MszVerdict::Kind::Certified ? "certified"
                     : v.kind == MszVerdict::Kind::NotMSz  ? "not-msz"
                                                           : "undecided-prefix";
  return {{"verdict", kind}, {"partial_sum", to_json(v.partial_sum)}, {"runs", v.runs}, {"detail", v.detail}};
}

Json to_json(const FipResult& f) {
  return {{"holds", f.holds}, {"fast_path", f.fast_path}, {"witness", f.witness}};
}

DistGame game_from_json(const Json& j) {
  try {
    std::vector<std::vector<ProbVector>> payoff;
    for (const auto& row : j.at("payoff")) {
      std::vector<ProbVector> r;
      for (const auto& cell : row) r.push_back(rationals_from_json(cell));
      payoff.push_back(std::move(r));
    }
    return DistGame(std::move(payoff));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed game JSON: ") + e.what());
  }
}

Json to_json(const DistGame& g) {
  Json rows = Json::array();
  for (const auto& row : g.payoff()) {
    Json r = Json::array();
    for (const auto& cell : row) r.push_back(to_json(cell));
    rows.push_back(r);
  }
  return {{"payoff", rows}};
}

MixedProfile profile_from_json(const Json& j) {
  try {
    return {rationals_from_json(j.at("sigma1")), rationals_from_json(j.at("sigma2"))};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed profile JSON: ") + e.what());
  }
}

Json to_json(const MixedProfile& v) { return {{"sigma1", to_json(v.sigma1)}, {"sigma2", to_json(v.sigma2)}}; }

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(to_json(row));
  return out;
}

Json to_json(const ZeroSumSolution& s) {
  Json eq = Json::array();
  for (const auto& e : s.equilibria()) eq.push_back(to_json(e));
  return {{"value", to_json(s.value)}, {"continuum", s.continuum}, {"equilibria", eq}};
}

Json to_json(const FaceChain& c) { return c.faces; }

namespace {

Json deviation_json(const Deviation& d) {
  return {{"player", d.player},
          {"strategy", to_json(d.strategy)},
          {"current", to_json(d.current)},
          {"deviating", to_json(d.deviating)},
          {"decisive_coordinate", d.decisive}};
}

}  // namespace

Json to_json(const LexCheck& c) {
  if (c.equilibrium) return {{"equilibrium", true}};
  return {{"equilibrium", false}, {"deviation", deviation_json(*c.deviation)}};
}

Json to_json(const EquilibriumReport& r) {
  if (const auto* f = std::get_if<EquilibriumFound>(&r))
    return {{"verdict", "equilibrium"},
            {"profile", to_json(f->profile)},
            {"row_best_response", to_json(f->row_chain)},
            {"col_best_response", to_json(f->col_chain)}};
  if (const auto* n = std::get_if<NoEquilibrium>(&r)) {
    Json cands = Json::array();
    for (const auto& c : n->candidates) {
      Json entry = {{"candidate", to_json(c.candidate)}};
      if (c.level) {
        Json eq = Json::array();
        for (const auto& e : c.level->equilibria) eq.push_back(to_json(e));
        entry["level"] = {{"coordinate", c.level->coordinate},
                          {"equilibria", eq},
                          {"continuum", c.level->continuum},
                          {"candidate_survives", c.level->candidate_survives}};
      }
      entry["deviation"] = deviation_json(c.deviation);
      cands.push_back(entry);
    }
    return {{"verdict", "no-equilibrium"}, {"top", n->top}, {"top_value", to_json(n->top_value)}, {"candidates", cands}};
  }
  const auto& i = std::get<Inconclusive>(r);
  return {{"verdict", "inconclusive"},
          {"reason", i.reason == Inconclusive::Reason::SizeBound ? "size-bound" : "equilibrium-continuum"},
          {"detail", i.detail}};
}

}  // namespace momtail
