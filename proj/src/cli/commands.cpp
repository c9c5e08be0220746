#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "momtail/cdf.hpp"
#include "momtail/cli/app.hpp"

namespace momtail::cli {

namespace {

unsigned long get_ul(const Json& cmd, const char* key, unsigned long fallback) {
  if (!cmd.contains(key)) return fallback;
  const Json& v = cmd.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw InputError(std::string("parameter '") + key + "' must be a nonnegative integer");
  return v.get<unsigned long>();
}

Rational get_rational(const Json& cmd, const char* key, const Rational& fallback) {
  return cmd.contains(key) ? rational_from_json(cmd.at(key)) : fallback;
}

std::string get_string(const Json& cmd, const char* key, const std::string& fallback = "") {
  if (!cmd.contains(key)) return fallback;
  if (!cmd.at(key).is_string()) throw InputError(std::string("parameter '") + key + "' must be a string");
  return cmd.at(key).get<std::string>();
}

const Json& require(const Json& cmd, const char* key) {
  if (!cmd.contains(key)) throw InputError(std::string("missing parameter '") + key + "'");
  return cmd.at(key);
}

BumpSpec bump_spec(const Json& cmd) {
  BumpSpec spec;
  spec.degree = static_cast<unsigned>(get_ul(cmd, "degree", spec.degree));
  if (spec.degree < 1) throw InputError("bump degree must be at least 1");
  const std::string mode = get_string(cmd, "mode", "exact");
  if (mode == "smooth")
    spec.mode = BumpSpec::Mode::SmoothQuadrature;
  else if (mode != "exact")
    throw InputError("mode must be 'exact' or 'smooth'");
  return spec;
}

// Plot data: floats are fine here and nowhere else.
std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string sample_densities(const std::vector<std::pair<std::string, const PiecewisePolyDensity*>>& cols,
                             unsigned samples = 400) {
  Rational lo = cols.front().second->lower(), hi = cols.front().second->upper();
  for (const auto& [name, d] : cols) {
    lo = std::min(lo, d->lower());
    hi = std::max(hi, d->upper());
  }
  std::ostringstream os;
  os << "x";
  for (const auto& [name, d] : cols) os << ',' << name;
  os << '\n';
  for (unsigned i = 0; i <= samples; ++i) {
    Rational x = lo + (hi - lo) * ratio(i, samples);
    os << fmt(to_double(x));
    for (const auto& [name, d] : cols) {
      Rational v = (x < d->lower() || x > d->upper()) ? Rational(0) : d->value_at(x);
      os << ',' << fmt(to_double(v));
    }
    os << '\n';
  }
  return os.str();
}

Json zero_checks(const PiecewisePolyDensity& d, const std::vector<unsigned long>& orders, const PrecisionBudget& b) {
  Json rows = Json::array();
  for (unsigned long k : orders)
    rows.push_back({{"k", k},
                    {"moment_zero", moment(d, k, b).value == 0},
                    {"next_moment_nonzero", moment(d, k + 1, b).value != 0}});
  return rows;
}

bool all_true(const Json& rows, const char* key) {
  for (const auto& r : rows)
    if (!r.at(key).get<bool>()) return false;
  return true;
}

// ---------------------------------------------------------------------------

Result cmd_moments(const Json& cmd, const Config& config) {
  Measure mu = measure_from_json(require(cmd, "measure"));
  const unsigned long k_max = get_ul(cmd, "k_max", 20);
  std::vector<MomentValue> table;

  // Memoized tables live under MOMTAIL_CACHE_DIR, keyed by content.
  const char* cache_dir = std::getenv("MOMTAIL_CACHE_DIR");
  std::filesystem::path cache_file;
  if (cache_dir && *cache_dir) {
    Json key = {{"measure", to_json(mu)}, {"k_max", k_max}, {"precision_bits", config.precision_bits}};
    cache_file = std::filesystem::path(cache_dir) / ("moments-" + content_hash(key.dump()) + ".json");
    std::ifstream in(cache_file);
    if (in) {
      try {
        Json cached = Json::parse(in);
        if (cached.at("key") == key)
          for (const auto& row : cached.at("table"))
            table.push_back({rational_from_json(row.at("value")), rational_from_json(row.at("error_radius"))});
      } catch (const std::exception&) {
        table.clear();  // unreadable entry: recompute and overwrite
      }
    }
    if (table.empty()) {
      table = moment_table(mu, k_max, config.budget());
      Json rows = Json::array();
      for (const auto& m : table) rows.push_back(to_json(m));
      std::error_code ec;
      std::filesystem::create_directories(cache_dir, ec);
      write_text_file(cache_file, Json{{"key", key}, {"table", rows}}.dump());
    }
  } else {
    table = moment_table(mu, k_max, config.budget());
  }

  Result r;
  r.kind = "moment-table";
  Json rows = Json::array();
  bool exact = true;
  for (std::size_t k = 0; k < table.size(); ++k) {
    Json row = to_json(table[k]);
    row["k"] = k;
    rows.push_back(row);
    exact = exact && table[k].exact();
  }
  r.payload = {{"measure", to_json(mu)}, {"k_max", k_max}, {"moments", rows}};
  r.verification = {{"all_exact", exact}, {"rows", table.size()}};
  r.csv = moment_table_csv(table);
  return r;
}

Result cmd_compare(const Json& cmd, const Config& config) {
  Measure m1 = measure_from_json(require(cmd, "m1"));
  Measure m2 = measure_from_json(require(cmd, "m2"));
  CompareOptions opts;
  opts.depth = get_ul(cmd, "depth", config.compare_depth);
  if (cmd.contains("focus")) opts.focus = cmd.at("focus").get<std::vector<unsigned long>>();
  const std::string certify = get_string(cmd, "certify");

  Result r;
  r.kind = "comparison";
  TailVerdict empirical = compare_empirical(m1, m2, opts, config.budget());
  r.payload = {{"empirical", to_json(empirical)}};
  if (certify.empty()) {
    r.verification = {{"proved", false}};
    return r;
  }
  auto density = [](const Measure& m) -> const PiecewisePolyDensity& {
    if (const auto* d = std::get_if<PiecewisePolyDensity>(&m)) return *d;
    throw InputError("this certificate needs two piecewise-polynomial densities");
  };
  if (certify == "piecewise") {
    TailVerdict v = decide_piecewise(density(m1), density(m2));
    r.payload["decided"] = to_json(v);
    r.verification = {{"proved", v.evidence == Evidence::Proved}};
  } else if (certify.rfind("cdf:", 0) == 0) {
    CertifyResult c = certify_cdf_dominance(m1, m2, parse_rational(certify.substr(4)));
    r.payload["certificate"] = to_json(c);
    r.verification = {{"proved", c.certified}};
  } else if (certify.rfind("density:", 0) == 0) {
    CertifyResult c = certify_density_dominance(density(m1), density(m2), parse_rational(certify.substr(8)),
                                                config.eventual_positive_cap);
    r.payload["certificate"] = to_json(c);
    r.verification = {{"proved", c.certified}};
  } else {
    throw InputError("certify must be 'piecewise', 'cdf:<x0>' or 'density:<x0>'");
  }
  return r;
}

Result construct_kernel(const Json& cmd, const Config& config) {
  const BumpSpec spec = bump_spec(cmd);
  const unsigned long n = get_ul(cmd, "n", 12);
  Result r;
  if (spec.mode == BumpSpec::Mode::SmoothQuadrature) {
    SmoothKernelReport rep =
        smooth_vanishing_kernel(to_double(get_rational(cmd, "a", 1)), to_double(get_rational(cmd, "b", 2)), n, spec);
    r.kind = "smooth-kernel";
    r.payload = to_json(rep);
    r.verification = {{"within_tolerance", rep.max_abs_vanished <= spec.tolerance},
                      {"tolerance", spec.tolerance},
                      {"exact", false}};
    return r;
  }
  const Rational a = get_rational(cmd, "a", 1), b = get_rational(cmd, "b", 2);
  VanishingKernel k = vanishing_moment_kernel(a, b, n, spec, config.budget());
  r.kind = "kernel";
  r.payload = to_json(k);
  Json zeros = Json::array();
  for (unsigned long i = 0; i <= n; ++i) zeros.push_back(moment(k.density, i, config.budget()).value == 0);
  Rational sup = 0;
  for (const auto& c : k.coefficients) sup = std::max(sup, abs_value(c));
  PositivityCertificate pos = certify_eventual_positive(k.density, k.x0, config.eventual_positive_cap);
  bool all_zero = std::all_of(zeros.begin(), zeros.end(), [](const Json& z) { return z.get<bool>(); });
  r.verification = {{"moments_zero", all_zero},
                    {"next_moment_nonzero", moment(k.density, n + 1, config.budget()).value != 0},
                    {"values_in_unit_interval", sup <= 1},
                    {"eventual_positive", to_json(pos)}};
  r.plot = sample_densities({{"kernel", &k.density}});
  return r;
}

Result construct_staged(const Json& cmd, const Config& config) {
  const BumpSpec spec = bump_spec(cmd);
  StagedOptions opts;
  opts.ell_search_cap = config.ell_search_cap;
  StagedKernel k = staged_vanishing_kernel(get_rational(cmd, "a", 1), get_rational(cmd, "b", 2),
                                           get_ul(cmd, "stages", 6), spec, opts, config.budget());
  Result r;
  r.kind = "staged-kernel";
  r.payload = to_json(k);
  std::vector<unsigned long> ks(k.exponents.begin() + 1, k.exponents.end());
  Json rows = zero_checks(k.density, ks, config.budget());
  bool ratios = true;
  for (const auto& s : k.stages) ratios = ratios && abs_value(s.ratio) < 1;
  bool increasing = std::is_sorted(k.exponents.begin(), k.exponents.end()) &&
                    std::adjacent_find(k.exponents.begin(), k.exponents.end()) == k.exponents.end();
  r.verification = {{"exponents_increasing", increasing},
                    {"moments_zero", all_true(rows, "moment_zero")},
                    {"next_moments_nonzero", all_true(rows, "next_moment_nonzero")},
                    {"ratios_below_one", ratios},
                    {"integral_zero", moment(k.density, 0, config.budget()).value == 0},
                    {"rows", rows}};
  r.plot = sample_densities({{"h", &k.density}});
  return r;
}

Result construct_matched(const Json& cmd, const Config& config) {
  const BumpSpec spec = bump_spec(cmd);
  StagedOptions opts;
  opts.ell_search_cap = config.ell_search_cap;
  MatchedPair m = matched_moment_pair(get_rational(cmd, "a", 1), get_rational(cmd, "b", 2), get_ul(cmd, "stages", 6),
                                      spec, opts, config.budget());
  Result r;
  r.kind = "matched-pair";
  r.payload = to_json(m);
  bool agree = true;
  for (unsigned long k : m.agreement)
    agree = agree && moment(m.f1, k, config.budget()).value == moment(m.f2, k, config.budget()).value;
  r.verification = {{"mass_f1_is_1", moment(m.f1, 0).value == 1},
                    {"mass_f2_is_1", moment(m.f2, 0).value == 1},
                    {"f1_nonnegative", !find_negative_value(m.f1).has_value()},
                    {"f2_nonnegative", !find_negative_value(m.f2).has_value()},
                    {"distinct", !same_density(m.f1, m.f2)},
                    {"agreement_exact", agree},
                    {"agreement_count", m.agreement.size()}};
  r.plot = sample_densities({{"f1", &m.f1}, {"f2", &m.f2}});
  return r;
}

AlternatingOptions alternating_options(const Json& cmd, const Config& config) {
  AlternatingOptions o;
  o.padded = cmd.value("padded", false);
  o.ell_search_cap = config.alternating_search_cap;
  return o;
}

Json signs_at(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g, const std::vector<unsigned long>& idx) {
  Json rows = Json::array();
  for (unsigned long l : idx)
    rows.push_back({{"l", l}, {"sign_f_minus_g", sign(moment(f, l).value - moment(g, l).value)}});
  return rows;
}

bool strictly_alternates(const Json& rows) {
  int want = 1;
  for (const auto& r : rows) {
    if (r.at("sign_f_minus_g").get<int>() != want) return false;
    want = -want;
  }
  return true;
}

Result construct_alternating(const Json& cmd, const Config& config) {
  const BumpSpec spec = bump_spec(cmd);
  AlternatingPair p = alternating_pair(get_rational(cmd, "a", 1), get_rational(cmd, "b", 2), get_ul(cmd, "N", 5),
                                       spec, alternating_options(cmd, config), config.budget());
  Result r;
  r.kind = "alternating-pair";
  r.payload = to_json(p);
  Json signs = signs_at(p.f, p.g, p.indices);
  CompareOptions opts;
  // A padded pair's last run ends at 2l.
  opts.depth = p.padded ? 2 * p.indices.back() : p.indices.back();
  opts.focus = p.indices;
  TailVerdict v = compare_empirical(p.f, p.g, opts, config.budget());
  r.verification = {{"mass_f_is_1", moment(p.f, 0).value == 1},
                    {"mass_g_is_1", moment(p.g, 0).value == 1},
                    {"signs", signs},
                    {"strict_alternation", strictly_alternates(signs)},
                    {"empirical", to_json(v)},
                    {"alternation_witness", v.is<AlternationWitness>()}};
  if (p.padded) {
    RunReport runs = run_padded_alternating(p);
    r.payload["runs"] = to_json(runs);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> r1, r2;
    for (const auto& run : runs.runs) (run.sign > 0 ? r1 : r2).emplace_back(run.start, run.end);
    MszVerdict m1 = is_msz_sequence(std::vector<std::uint64_t>(runs.M1.begin(), runs.M1.end()), r1);
    MszVerdict m2 = is_msz_sequence(std::vector<std::uint64_t>(runs.M2.begin(), runs.M2.end()), r2);
    r.verification["runs_hold"] = runs.all_hold;
    r.verification["M1"] = to_json(m1);
    r.verification["M2"] = to_json(m2);
  }
  r.plot = sample_densities({{"f", &p.f}, {"g", &p.g}});
  return r;
}

Result construct_unimodal(const Json& cmd, const Config& config) {
  const BumpSpec spec = bump_spec(cmd);
  UnimodalPair u = unimodal_alternating_pair(get_rational(cmd, "a", 1), get_rational(cmd, "b", 2),
                                             get_ul(cmd, "N", 5), spec, alternating_options(cmd, config),
                                             config.budget());
  Result r;
  r.kind = "unimodal-pair";
  r.payload = to_json(u);
  Json signs = signs_at(u.f, u.g, u.indices);
  bool scaling = true;
  for (unsigned long l : u.indices)
    scaling = scaling && moment(u.f, l).value - moment(u.g, l).value ==
                             u.alpha * (moment(u.inner.f, l).value - moment(u.inner.g, l).value);
  r.verification = {{"mass_f_is_1", moment(u.f, 0).value == 1},
                    {"mass_g_is_1", moment(u.g, 0).value == 1},
                    {"signs", signs},
                    {"strict_alternation", strictly_alternates(signs)},
                    {"f_derivative_one_sign_change", derivative_sign_changes(u.f) == 1},
                    {"g_derivative_one_sign_change", derivative_sign_changes(u.g) == 1},
                    {"scaling_identity", scaling}};
  r.plot = sample_densities({{"f", &u.f}, {"g", &u.g}});
  return r;
}

Result construct_mixed(const Json& cmd, const Config& config) {
  const BumpSpec spec = bump_spec(cmd);
  AlternatingPair p = alternating_pair(get_rational(cmd, "a", 1), get_rational(cmd, "b", 2), get_ul(cmd, "N", 5),
                                       spec, alternating_options(cmd, config), config.budget());
  MixedDemo m = mixed_incomparable_demo(p);
  Result r;
  r.kind = "mixed-demo";
  r.payload = to_json(m);
  r.verification = {{"g_above_f1", m.below.certified},
                    {"f2_above_g", m.above.certified},
                    {"mixture_is_f", m.mixture_is_f},
                    {"mixture_alternates", m.mixture_alternates}};
  r.plot = sample_densities({{"f1", &m.f1}, {"f2", &m.f2}, {"g", &m.g}});
  return r;
}

// max{x_1 / y_1, 1 - 1/2} with x_k = 2 - 1/(k+1), evaluated by hand.
Rational c1_closed_form() {
  const Rational x1(3, 2), x2(5, 3), y1 = (x1 + x2) / 2;
  return std::max(Rational(x1 / y1), Rational(1, 2));
}

Result construct_discrete(const Json& cmd, const Config&) {
  const Rational a = get_rational(cmd, "a", Rational(7, 5));
  DiscretePair p = discrete_alternating_cdf_pair(a, get_ul(cmd, "truncation", 40), get_ul(cmd, "kmax", 20),
                                                 get_ul(cmd, "depth", 100));
  const auto& rep = p.report;
  Result r;
  r.kind = "discrete-cdf-pair";
  r.payload = to_json(p);
  r.verification = {{"cdf_alternates", rep.cdf_alternates},
                    {"moments_dominate", rep.moments_dominate},
                    {"y0_formula", rep.y0 == (1 + a) / 2},
                    {"c1", to_json(rep.c.at(0))},
                    {"c1_formula", rep.c.at(0) == c1_closed_form()},
                    {"g_y1", to_json(p.mu_g.mass.at(1))},
                    {"g_y1_formula", p.mu_g.mass.at(1) == c1_closed_form() / 2}};
  // Plot data: both CDFs on a fine grid of [1, 2] (interval midpoints).
  std::ostringstream os;
  os << "x,F,G\n";
  Measure f = p.mu_f, g = p.mu_g;
  for (unsigned i = 0; i <= 400; ++i) {
    Rational x = 1 + ratio(i, 400);
    os << fmt(to_double(x)) << ',' << fmt(to_double(cdf(f, x).value)) << ',' << fmt(to_double(cdf(g, x).value))
       << '\n';
  }
  r.plot = os.str();
  return r;
}

Result construct_ac(const Json& cmd, const Config&) {
  const BumpSpec spec = bump_spec(cmd);
  AcPair p = ac_alternating_cdf_pair(get_rational(cmd, "a", Rational(7, 5)), get_ul(cmd, "truncation", 14),
                                     get_ul(cmd, "kmax", 10), spec, get_ul(cmd, "depth", 200));
  Result r;
  r.kind = "ac-cdf-pair";
  r.payload = to_json(p);
  r.verification = {{"cdf_alternates", p.alternates}};
  PiecewiseCdf F = exact_cdf(p.f), G = exact_cdf(p.g);
  std::ostringstream os;
  os << "x,F,G\n";
  for (unsigned i = 0; i <= 400; ++i) {
    Rational x = p.f.lower() + (p.f.upper() - p.f.lower()) * ratio(i, 400);
    os << fmt(to_double(x)) << ',' << fmt(to_double(F(x))) << ',' << fmt(to_double(G(x))) << '\n';
  }
  r.plot = os.str();
  return r;
}

Result cmd_construct(const Json& cmd, const Config& config) {
  const std::string kind = get_string(cmd, "kind");
  if (kind == "kernel") return construct_kernel(cmd, config);
  if (kind == "staged") return construct_staged(cmd, config);
  if (kind == "matched") return construct_matched(cmd, config);
  if (kind == "alternating") return construct_alternating(cmd, config);
  if (kind == "unimodal") return construct_unimodal(cmd, config);
  if (kind == "mixed-demo") return construct_mixed(cmd, config);
  if (kind == "discrete-cdf") return construct_discrete(cmd, config);
  if (kind == "ac-cdf") return construct_ac(cmd, config);
  throw InputError("unknown construction kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

Result cmd_filters(const Json& cmd, const Config& config) {
  const std::string query = get_string(cmd, "query", "theta");
  Result r;
  r.kind = "filter-query";
  if (query == "msz-seq") {
    auto prefix = require(cmd, "prefix").get<std::vector<std::uint64_t>>();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;
    if (cmd.contains("runs"))
      for (const auto& run : cmd.at("runs")) runs.emplace_back(run.at(0).get<std::uint64_t>(), run.at(1).get<std::uint64_t>());
    MszVerdict v = is_msz_sequence(prefix, runs);
    r.payload = {{"query", query}, {"result", to_json(v)}};
    r.verification = {{"certified", v.kind == MszVerdict::Kind::Certified}};
    return r;
  }
  if (query == "fip") {
    std::vector<StructuredSet> family;
    Json described = Json::array();
    for (const auto& e : require(cmd, "family")) {
      family.push_back(parse_set_expression(e.get<std::string>()));
      described.push_back(family.back().describe());
    }
    FipResult f = has_fip(family, config.fip_bound);
    r.payload = {{"query", query}, {"family", described}, {"result", to_json(f)}};
    bool witness_ok = true;
    if (!f.holds) {
      StructuredSet inter = StructuredSet::naturals();
      for (std::size_t i : f.witness) inter = inter & family.at(i);
      witness_ok = inter.is_empty();
    }
    r.verification = {{"witness_checked", witness_ok}};
    return r;
  }
  StructuredSet s = parse_set_expression(get_string(cmd, "expr"));
  r.payload = {{"query", query}, {"set", s.describe()}};
  if (query == "theta") {
    ThetaResult t = theta(s);
    r.payload["result"] = to_json(t);
  } else if (query == "frechet") {
    r.payload["result"] = {{"in_frechet", in_frechet(s)}};
  } else if (query == "msz") {
    r.payload["result"] = {{"in_msz_filter", in_msz_filter(s)}};
  } else if (query == "msz-set") {
    r.payload["result"] = to_json(is_msz_sequence(s));
  } else if (query == "elements") {
    r.payload["result"] = {{"elements", s.elements_below(get_ul(cmd, "limit", 100))}};
  } else {
    throw InputError("unknown filter query '" + query + "'");
  }
  r.verification = {{"exact", true}};
  return r;
}

Result cmd_game(const Json& cmd, const Config& config) {
  DistGame g = game_from_json(require(cmd, "game"));
  const std::string action = get_string(cmd, "action", "analyze");
  Result r;
  r.kind = "game-" + action;
  if (action == "analyze") {
    EquilibriumReport rep = analyze_existence(g, config.game_size_bound);
    r.payload = {{"game", to_json(g)}, {"report", to_json(rep)}};
    r.verification = {{"report_verified", verify_report(g, rep, config.game_size_bound)}};
  } else if (action == "check") {
    MixedProfile v = profile_from_json(require(cmd, "profile"));
    LexCheck c = check_lex_equilibrium(g, v);
    r.payload = {{"game", to_json(g)}, {"profile", to_json(v)}, {"result", to_json(c)}};
    bool ok = c.equilibrium;
    if (!c.equilibrium) {
      const auto& d = *c.deviation;
      ok = lex_compare(d.deviating, d.current) == (d.player == 1 ? LexOrder::Greater : LexOrder::Less);
    }
    r.verification = {{"deviation_checked", ok}};
  } else if (action == "project") {
    Json mats = Json::array();
    const unsigned long only = get_ul(cmd, "i", 0);
    for (std::size_t i = 1; i <= g.support(); ++i) {
      if (only != 0 && i != only) continue;
      Matrix m = project(g, i);
      mats.push_back({{"coordinate", i}, {"matrix", to_json(m)}, {"solution", to_json(solve_zero_sum(m, config.game_size_bound))}});
    }
    if (mats.empty()) throw InputError("projection coordinate out of range");
    r.payload = {{"game", to_json(g)}, {"projections", mats}};
    r.verification = {{"exact", true}};
  } else {
    throw InputError("game action must be analyze, check or project");
  }
  return r;
}

}  // namespace

Result execute(const Json& command, const Config& config) {
  if (!command.is_object()) throw InputError("command must be a JSON object");
  const std::string name = get_string(command, "name");
  if (name == "moments") return cmd_moments(command, config);
  if (name == "compare") return cmd_compare(command, config);
  if (name == "construct") return cmd_construct(command, config);
  if (name == "filters") return cmd_filters(command, config);
  if (name == "game") return cmd_game(command, config);
  throw InputError("unknown command '" + name + "'");
}

}  // namespace momtail::cli
