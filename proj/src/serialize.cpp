#include "sumrule/serialize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sr::io {

using nlohmann::json;

std::string fmt(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {
// json has no infinity; encode as strings in value slots that may carry it
json num_or_inf(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? json("inf") : json("-inf");
}
}  // namespace

std::string config_hash(const json& config) {
  const std::string s = config.dump();  // nlohmann dumps objects with sorted keys
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FileHeader make_header(const json& config, std::uint64_t seed) {
  FileHeader h;
  h.config_hash = config_hash(config);
  h.seed = seed;
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  h.generated_at = buf;
  return h;
}

json to_json(const FileHeader& h) {
  return json{{"tool_version", h.version},
              {"config_hash", h.config_hash},
              {"seed", h.seed},
              {"generated_at", h.generated_at}};
}

std::string csv_header_line(const FileHeader& h) {
  std::ostringstream os;
  os << "# sumrule " << h.version << " config=" << h.config_hash << " seed=" << h.seed
     << " generated_at=" << h.generated_at << "\n";
  return os.str();
}

json to_json(const jacobi::JacobiCoefficients& j) {
  return json{{"a", j.a}, {"b", j.b}};
}

jacobi::JacobiCoefficients coefficients_from_json(const json& js) {
  jacobi::JacobiCoefficients j;
  j.a = js.at("a").get<std::vector<double>>();
  j.b = js.at("b").get<std::vector<double>>();
  if (j.b.empty() || j.a.size() + 1 != j.b.size())
    throw std::invalid_argument("coefficients_from_json: need len(a) = len(b) - 1");
  return j;
}

std::string to_csv(const jacobi::JacobiCoefficients& j) {
  std::ostringstream os;
  os << "k,a_k,b_k\n";
  for (std::size_t k = 0; k < j.b.size(); ++k) {
    os << (k + 1) << "," << (k < j.a.size() ? fmt(j.a[k]) : "") << "," << fmt(j.b[k])
       << "\n";
  }
  return os.str();
}

json measure_descriptor(const MeasureS1& mu, const json& params) {
  json atoms_p = json::array(), atoms_m = json::array();
  for (const Atom& a : mu.atoms_plus) atoms_p.push_back(json::array({a.pos, a.mass}));
  for (const Atom& a : mu.atoms_minus) atoms_m.push_back(json::array({a.pos, a.mass}));
  return json{{"kind", mu.tag},
              {"params", params},
              {"atoms_plus", atoms_p},
              {"atoms_minus", atoms_m},
              {"ac_mass", mu.ac_mass}};
}

MeasureS1 measure_from_json(const json& js) {
  const std::string kind = js.at("kind").get<std::string>();
  const json params = js.value("params", json::object());
  MeasureS1 mu;
  if (kind == "semicircle") {
    mu = equilibrium_measure(ReferenceLaw::semicircle());
  } else if (kind == "marchenko_pastur") {
    mu = equilibrium_measure(ReferenceLaw::marchenko_pastur(params.at("tau").get<double>()));
  } else if (kind == "kesten_mckay") {
    mu = equilibrium_measure(ReferenceLaw::kesten_mckay(params.at("kappa1").get<double>(),
                                                        params.at("kappa2").get<double>()));
  } else if (kind == "arcsine01") {
    mu = equilibrium_measure(ReferenceLaw::arcsine01());
  } else if (kind == "rank_one") {
    mu = hermite_rank_one(params.at("c").get<double>());
  } else if (kind == "atom_at_zero") {
    mu = laguerre_atom_at_zero(params.at("tau").get<double>());
  } else if (kind == "bernstein_szego") {
    mu = bernstein_szego01(params.at("r").get<double>());
  } else {
    throw std::invalid_argument("measure_from_json: unknown kind '" + kind + "'");
  }
  return mu;
}

json to_json(const SumRuleReport& rep) {
  json terms = json::array();
  for (double t : rep.sum.terms) terms.push_back(num_or_inf(t));
  json per_atom_p = json::array(), per_atom_m = json::array();
  for (double f : rep.spectral.per_atom_plus) per_atom_p.push_back(num_or_inf(f));
  for (double f : rep.spectral.per_atom_minus) per_atom_m.push_back(num_or_inf(f));
  const char* verdict = rep.verdict == SumRuleReport::Verdict::Pass ? "PASS"
                        : rep.verdict == SumRuleReport::Verdict::PassInf ? "PASS-INF"
                                                                         : "FAIL";
  return json{
      {"ensemble", rep.ensemble.name()},
      {"params",
       {{"tau", rep.ensemble.tau}, {"kappa1", rep.ensemble.kappa1},
        {"kappa2", rep.ensemble.kappa2}}},
      {"sum_side",
       {{"value", num_or_inf(rep.sum.value)},
        {"partial_sum", rep.sum.partial_sum},
        {"terms", terms},
        {"tail_average", rep.sum.tail_average},
        {"divergent", rep.sum.divergent}}},
      {"spectral_side",
       {{"value", num_or_inf(rep.spectral.value)},
        {"kl", num_or_inf(rep.spectral.kl)},
        {"sum_f_plus", num_or_inf(rep.spectral.sum_f_plus)},
        {"sum_f_minus", num_or_inf(rep.spectral.sum_f_minus)},
        {"per_atom_plus", per_atom_p},
        {"per_atom_minus", per_atom_m},
        {"kl_cap_triggered", rep.spectral.kl_cap_triggered},
        {"s1_violation", rep.spectral.s1_violation}}},
      {"abs_gap", num_or_inf(rep.abs_gap)},
      {"both_infinite", rep.both_infinite},
      {"truncation_depth", rep.truncation_depth},
      {"verdict", verdict}};
}

std::string to_csv_row(const SumRuleReport& rep) {
  std::ostringstream os;
  os << "ensemble,tau,kappa1,kappa2,depth,sum_side,spectral_side,kl,sum_f_plus,"
        "sum_f_minus,abs_gap,verdict\n";
  const char* verdict = rep.verdict == SumRuleReport::Verdict::Pass ? "PASS"
                        : rep.verdict == SumRuleReport::Verdict::PassInf ? "PASS-INF"
                                                                         : "FAIL";
  os << rep.ensemble.name() << "," << fmt(rep.ensemble.tau) << ","
     << fmt(rep.ensemble.kappa1) << "," << fmt(rep.ensemble.kappa2) << ","
     << rep.truncation_depth << "," << fmt(rep.sum.value) << ","
     << fmt(rep.spectral.value) << "," << fmt(rep.spectral.kl) << ","
     << fmt(rep.spectral.sum_f_plus) << "," << fmt(rep.spectral.sum_f_minus) << ","
     << fmt(rep.abs_gap) << "," << verdict << "\n";
  return os.str();
}

json to_json(const ensembles::SampledSpectralData& data) {
  return json{{"seed", data.seed},
              {"eigenvalues", data.eigenvalues},
              {"weights", data.weights},
              {"coefficients", to_json(data.coefficients)}};
}

std::string to_csv(const ensembles::SampledSpectralData& data, const FileHeader& h) {
  std::ostringstream os;
  os << csv_header_line(h);
  os << "index,eigenvalue,weight\n";
  for (std::size_t i = 0; i < data.eigenvalues.size(); ++i)
    os << i << "," << fmt(data.eigenvalues[i]) << "," << fmt(data.weights[i]) << "\n";
  return os.str();
}

json to_json(const ldp::RateProbeReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back(json{{"n", r.n},
                        {"hits", r.hits},
                        {"draws", r.draws},
                        {"p_hat", r.p_hat},
                        {"ci_lo", r.ci_lo},
                        {"ci_hi", r.ci_hi},
                        {"rate_estimate", r.rate_estimate}});
  return json{{"x", rep.x},
              {"side", rep.side == Side::plus ? "plus" : "minus"},
              {"draws", rep.draws},
              {"seed", rep.seed},
              {"target_rate", num_or_inf(rep.target_rate)},
              {"rows", rows},
              {"fractions_monotone", rep.fractions_monotone},
              {"rates_consistent", rep.rates_consistent}};
}

std::string to_csv(const ldp::RateProbeReport& rep, const FileHeader& h) {
  std::ostringstream os;
  os << csv_header_line(h);
  os << "n,p_hat,ci_lo,ci_hi,rate_estimate,target\n";
  for (const auto& r : rep.rows)
    os << r.n << "," << fmt(r.p_hat) << "," << fmt(r.ci_lo) << "," << fmt(r.ci_hi)
       << "," << fmt(r.rate_estimate) << "," << fmt(rep.target_rate) << "\n";
  return os.str();
}

std::string to_csv(const std::vector<ldp::RateCurveRow>& rows, const FileHeader& h) {
  std::ostringstream os;
  os << csv_header_line(h);
  os << "x,f_direct,f_effpot,discrepancy\n";
  for (const auto& r : rows)
    os << fmt(r.x) << "," << fmt(r.f_direct) << "," << fmt(r.f_effpot) << ","
       << fmt(r.discrepancy) << "\n";
  return os.str();
}

json to_json(const std::vector<ldp::RateCurveRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back(json{{"x", r.x},
                       {"f_direct", num_or_inf(r.f_direct)},
                       {"f_effpot", num_or_inf(r.f_effpot)},
                       {"discrepancy", num_or_inf(r.discrepancy)}});
  return out;
}

}  // namespace sr::io
