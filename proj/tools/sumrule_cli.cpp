// Batch front-end: sum-rule verification, ensemble sampling, rate tables and
// tail probes. Emits JSON or CSV with a reproducibility header.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumrule/ensembles.hpp"
#include "sumrule/jacobi.hpp"
#include "sumrule/ldp.hpp"
#include "sumrule/measures.hpp"
#include "sumrule/serialize.hpp"
#include "sumrule/sumrules.hpp"

using nlohmann::json;

namespace {

struct CliError {
  std::string field;
  std::string message;
};

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw CliError{field, message};
}

// ---- config schema validation (mirrors docs/config.schema.json) -----------

void check_type(const json& cfg, const std::string& key, json::value_t t,
                const char* tname) {
  if (!cfg.contains(key)) return;
  const json& v = cfg.at(key);
  bool ok = v.type() == t;
  if (t == json::value_t::number_float && v.is_number()) ok = true;
  if (t == json::value_t::number_unsigned && v.is_number_integer() &&
      v.get<long long>() >= 0)
    ok = true;
  if (!ok) fail(key, std::string("expected ") + tname);
}

void validate_config(const json& cfg) {
  if (!cfg.is_object()) fail("$", "config must be a JSON object");
  static const char* known[] = {"command", "ensemble", "measure",  "depth",
                                "panels",  "tol",      "seed",     "n",
                                "beta",    "weighted", "grid",     "x",
                                "side",    "nladder",  "draws",    "format",
                                "output"};
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    bool found = false;
    for (const char* k : known) found = found || it.key() == k;
    if (!found) fail(it.key(), "unknown config key");
  }
  check_type(cfg, "command", json::value_t::string, "string");
  check_type(cfg, "measure", json::value_t::string, "string");
  check_type(cfg, "side", json::value_t::string, "string");
  check_type(cfg, "grid", json::value_t::string, "string");
  check_type(cfg, "format", json::value_t::string, "string");
  check_type(cfg, "output", json::value_t::string, "string");
  check_type(cfg, "depth", json::value_t::number_unsigned, "nonnegative integer");
  check_type(cfg, "panels", json::value_t::number_unsigned, "nonnegative integer");
  check_type(cfg, "n", json::value_t::number_unsigned, "nonnegative integer");
  check_type(cfg, "draws", json::value_t::number_unsigned, "nonnegative integer");
  check_type(cfg, "seed", json::value_t::number_unsigned, "nonnegative integer");
  check_type(cfg, "tol", json::value_t::number_float, "number");
  check_type(cfg, "beta", json::value_t::number_float, "number");
  check_type(cfg, "x", json::value_t::number_float, "number");
  check_type(cfg, "weighted", json::value_t::boolean, "boolean");
  if (cfg.contains("nladder") && !cfg.at("nladder").is_array())
    fail("nladder", "expected array of integers");
  if (cfg.contains("ensemble")) {
    const json& e = cfg.at("ensemble");
    if (!e.is_object()) fail("ensemble", "expected object");
    for (auto it = e.begin(); it != e.end(); ++it) {
      if (it.key() != "kind" && it.key() != "tau" && it.key() != "kappa1" &&
          it.key() != "kappa2")
        fail("ensemble." + it.key(), "unknown ensemble key");
    }
  }
}

// ---- shared option bag -----------------------------------------------------

struct Options {
  std::string command;
  std::string ensemble = "hermite";
  double tau = 0.5;
  double kappa1 = 0.0, kappa2 = 0.0;
  std::string measure = "sc";
  int depth = 200;
  int panels = 512;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int n = 100;
  double beta = 2.0;
  bool weighted = false;
  std::string grid;
  double x = 0.0;
  std::string side = "plus";
  std::vector<int> nladder = {50, 100, 200};
  long draws = 5000;
  std::string format = "json";
  std::string output;

  json effective_config() const {
    json e{{"kind", ensemble}};
    if (ensemble == "laguerre") e["tau"] = tau;
    if (ensemble == "jacobi" || ensemble == "jacobi-kn") {
      e["kappa1"] = kappa1;
      e["kappa2"] = kappa2;
    }
    json cfg{{"command", command}, {"ensemble", e}, {"depth", depth},
             {"panels", panels},   {"tol", tol},    {"seed", seed},
             {"format", format}};
    if (command == "verify") cfg["measure"] = measure;
    if (command == "sample") {
      cfg["n"] = n;
      cfg["beta"] = beta;
      cfg["weighted"] = weighted;
    }
    if (command == "rates") {
      cfg["grid"] = grid;
      cfg["side"] = side;
    }
    if (command == "probe") {
      cfg["x"] = x;
      cfg["side"] = side;
      cfg["nladder"] = nladder;
      cfg["draws"] = draws;
      cfg["beta"] = beta;
    }
    return cfg;
  }
};

void apply_config_file(Options& o, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config", "cannot open '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    fail("config", std::string("JSON parse error: ") + e.what());
  }
  validate_config(cfg);
  if (cfg.contains("command")) o.command = cfg["command"].get<std::string>();
  if (cfg.contains("ensemble")) {
    const json& e = cfg["ensemble"];
    if (e.contains("kind")) o.ensemble = e["kind"].get<std::string>();
    if (e.contains("tau")) o.tau = e["tau"].get<double>();
    if (e.contains("kappa1")) o.kappa1 = e["kappa1"].get<double>();
    if (e.contains("kappa2")) o.kappa2 = e["kappa2"].get<double>();
  }
  if (cfg.contains("measure")) o.measure = cfg["measure"].get<std::string>();
  if (cfg.contains("depth")) o.depth = cfg["depth"].get<int>();
  if (cfg.contains("panels")) o.panels = cfg["panels"].get<int>();
  if (cfg.contains("tol")) o.tol = cfg["tol"].get<double>();
  if (cfg.contains("seed")) o.seed = cfg["seed"].get<std::uint64_t>();
  if (cfg.contains("n")) o.n = cfg["n"].get<int>();
  if (cfg.contains("beta")) o.beta = cfg["beta"].get<double>();
  if (cfg.contains("weighted")) o.weighted = cfg["weighted"].get<bool>();
  if (cfg.contains("grid")) o.grid = cfg["grid"].get<std::string>();
  if (cfg.contains("x")) o.x = cfg["x"].get<double>();
  if (cfg.contains("side")) o.side = cfg["side"].get<std::string>();
  if (cfg.contains("nladder")) o.nladder = cfg["nladder"].get<std::vector<int>>();
  if (cfg.contains("draws")) o.draws = cfg["draws"].get<long>();
  if (cfg.contains("format")) o.format = cfg["format"].get<std::string>();
  if (cfg.contains("output")) o.output = cfg["output"].get<std::string>();
}

void write_output(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::string path = o.output;
  const char* dir = std::getenv("SUMRULE_OUTPUT_DIR");
  if (dir != nullptr && !path.empty() && path.front() != '/')
    path = std::string(dir) + "/" + path;
  std::ofstream out(path);
  if (!out) fail("output", "cannot write '" + path + "'");
  out << text;
}

sr::EnsembleId parse_ensemble(const Options& o) {
  if (o.ensemble == "hermite") return sr::EnsembleId::hermite();
  if (o.ensemble == "laguerre") return sr::EnsembleId::laguerre(o.tau);
  if (o.ensemble == "jacobi" || o.ensemble == "jacobi-kn")
    return sr::EnsembleId::jacobi(o.kappa1, o.kappa2);
  fail("ensemble", "unknown ensemble '" + o.ensemble + "'");
}

double parse_param(const std::string& spec, const std::string& key) {
  const auto pos = spec.find(key + "=");
  if (pos == std::string::npos) fail("measure", "missing parameter '" + key + "'");
  return std::stod(spec.substr(pos + key.size() + 1));
}

// builds the matched measure/coefficient pair for a named family
struct VerifySetup {
  sr::MeasureS1 mu;
  sr::SumSideInput input;
  json params = json::object();
};

VerifySetup build_verify(const Options& o, const sr::EnsembleId& ens) {
  VerifySetup s;
  const std::string& m = o.measure;
  const int depth = std::max(o.depth, 2);
  using Kind = sr::EnsembleId::Kind;
  if (m == "sc" || m == "semicircle") {
    if (ens.kind != Kind::Hermite) fail("measure", "'sc' pairs with --ensemble hermite");
    s.mu = sr::equilibrium_measure(sr::ReferenceLaw::semicircle());
    s.input = sr::jacobi::reference_coefficients(sr::ReferenceLaw::semicircle(), depth);
  } else if (m == "mp" || m == "marchenko-pastur") {
    if (ens.kind != Kind::Laguerre) fail("measure", "'mp' pairs with --ensemble laguerre");
    s.mu = sr::equilibrium_measure(ens.law());
    s.input = sr::jacobi::z_decompose(sr::jacobi::reference_coefficients(ens.law(), depth));
    s.params["tau"] = ens.tau;
  } else if (m == "kmk" || m == "arcsine") {
    if (ens.kind != Kind::Jacobi) fail("measure", "'kmk' pairs with --ensemble jacobi");
    s.mu = sr::equilibrium_measure(ens.law());
    s.input = sr::jacobi::kmk_verblunsky(ens.kappa1, ens.kappa2, 2 * depth);
    s.params["kappa1"] = ens.kappa1;
    s.params["kappa2"] = ens.kappa2;
  } else if (m.rfind("rank-one", 0) == 0) {
    if (ens.kind != Kind::Hermite)
      fail("measure", "'rank-one' pairs with --ensemble hermite");
    const double c = parse_param(m, "c");
    s.mu = sr::hermite_rank_one(c);
    sr::jacobi::JacobiCoefficients j;
    j.b.assign(depth, 0.0);
    j.b[0] = c;
    j.a.assign(depth - 1, 1.0);
    s.input = std::move(j);
    s.params["c"] = c;
  } else if (m == "atom-at-zero") {
    if (ens.kind != Kind::Laguerre)
      fail("measure", "'atom-at-zero' pairs with --ensemble laguerre");
    if (!(ens.tau < 1.0)) fail("measure", "'atom-at-zero' needs tau < 1");
    s.mu = sr::laguerre_atom_at_zero(ens.tau);
    sr::jacobi::ZChain z;
    z.z.resize(2 * depth - 1);
    for (std::size_t i = 0; i < z.z.size(); ++i) z.z[i] = (i % 2 == 0) ? ens.tau : 1.0;
    s.input = std::move(z);
    s.params["tau"] = ens.tau;
  } else if (m.rfind("bernstein-szego", 0) == 0) {
    if (ens.kind != Kind::Jacobi)
      fail("measure", "'bernstein-szego' pairs with --ensemble jacobi");
    const double r = parse_param(m, "r");
    s.mu = sr::bernstein_szego01(r);
    sr::jacobi::VerblunskySeq v;
    v.alpha.assign(2 * depth, 0.0);
    v.alpha[0] = r;
    s.input = std::move(v);
    s.params["r"] = r;
  } else {
    fail("measure", "unknown measure family '" + m + "'");
  }
  return s;
}

std::vector<double> parse_grid(const std::string& spec) {
  // "a:b:step" or comma-separated list
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a, b, h;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> h) || c1 != ':' || c2 != ':' || h <= 0)
      fail("grid", "expected a:b:step");
    for (double x = a; x <= b + 1e-12; x += h) out.push_back(x);
    return out;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) fail("grid", "empty grid");
  return out;
}

int run_verify(const Options& o) {
  const sr::EnsembleId ens = parse_ensemble(o);
  VerifySetup setup = build_verify(o, ens);
  sr::KlOptions kl;
  kl.panels = o.panels;
  const sr::SumRuleReport rep =
      sr::verify_sum_rule(ens, setup.input, setup.mu, o.depth, o.tol, kl);

  const sr::io::FileHeader hdr = sr::io::make_header(o.effective_config(), o.seed);
  if (o.format == "csv") {
    write_output(o, sr::io::csv_header_line(hdr) + sr::io::to_csv_row(rep));
  } else {
    json out{{"meta", sr::io::to_json(hdr)},
             {"report", sr::io::to_json(rep)},
             {"measure", sr::io::measure_descriptor(setup.mu, setup.params)}};
    write_output(o, out.dump(2) + "\n");
  }
  return rep.verdict == sr::SumRuleReport::Verdict::Fail ? 2 : 0;
}

int run_sample(const Options& o) {
  sr::ensembles::EnsembleSpec spec;
  spec.n = o.n;
  spec.beta = o.beta;
  spec.seed = o.seed;
  spec.tau = o.tau;
  spec.kappa1 = o.kappa1;
  spec.kappa2 = o.kappa2;
  sr::ensembles::SampledSpectralData data;
  if (o.ensemble == "hermite") {
    spec.kind = sr::ensembles::EnsembleSpec::Kind::Hermite;
    data = sr::ensembles::sample_hermite(spec);
  } else if (o.ensemble == "laguerre") {
    spec.kind = sr::ensembles::EnsembleSpec::Kind::Laguerre;
    data = sr::ensembles::sample_laguerre(spec);
  } else if (o.ensemble == "jacobi-kn" || o.ensemble == "jacobi") {
    spec.kind = sr::ensembles::EnsembleSpec::Kind::JacobiKN;
    data = sr::ensembles::sample_jacobi_kn(spec);
  } else {
    fail("ensemble", "unknown ensemble '" + o.ensemble + "'");
  }
  if (!o.weighted) {
    const auto uniform = sr::ensembles::empirical_measure(data, false);
    data.weights = uniform.weights;
  }
  const sr::io::FileHeader hdr = sr::io::make_header(o.effective_config(), o.seed);
  if (o.format == "csv") {
    write_output(o, sr::io::to_csv(data, hdr));
  } else {
    json out{{"meta", sr::io::to_json(hdr)}, {"sample", sr::io::to_json(data)}};
    write_output(o, out.dump(2) + "\n");
  }
  return 0;
}

int run_rates(const Options& o) {
  const sr::EnsembleId ens = parse_ensemble(o);
  const sr::Side side = o.side == "minus" ? sr::Side::minus : sr::Side::plus;
  const std::vector<double> grid = parse_grid(o.grid);
  std::vector<sr::ldp::RateCurveRow> rows;
  try {
    rows = sr::ldp::rate_curve(ens, side, grid);
  } catch (const std::invalid_argument& e) {
    fail("grid", e.what());
  }
  const sr::io::FileHeader hdr = sr::io::make_header(o.effective_config(), o.seed);
  if (o.format == "csv") {
    write_output(o, sr::io::to_csv(rows, hdr));
  } else {
    json out{{"meta", sr::io::to_json(hdr)}, {"rows", sr::io::to_json(rows)}};
    write_output(o, out.dump(2) + "\n");
  }
  return 0;
}

int run_probe(const Options& o) {
  sr::ensembles::EnsembleSpec spec;
  spec.n = o.nladder.empty() ? o.n : o.nladder.front();
  spec.beta = o.beta;
  spec.seed = o.seed;
  spec.tau = o.tau;
  spec.kappa1 = o.kappa1;
  spec.kappa2 = o.kappa2;
  if (o.ensemble == "hermite")
    spec.kind = sr::ensembles::EnsembleSpec::Kind::Hermite;
  else if (o.ensemble == "laguerre")
    spec.kind = sr::ensembles::EnsembleSpec::Kind::Laguerre;
  else if (o.ensemble == "jacobi-kn" || o.ensemble == "jacobi")
    spec.kind = sr::ensembles::EnsembleSpec::Kind::JacobiKN;
  else
    fail("ensemble", "unknown ensemble '" + o.ensemble + "'");
  const sr::Side side = o.side == "minus" ? sr::Side::minus : sr::Side::plus;
  sr::ldp::RateProbeReport rep;
  try {
    rep = sr::ldp::probe_extreme_rate(spec, o.nladder, o.x, side, o.draws);
  } catch (const std::invalid_argument& e) {
    fail("x", e.what());
  }
  const sr::io::FileHeader hdr = sr::io::make_header(o.effective_config(), o.seed);
  if (o.format == "csv") {
    write_output(o, sr::io::to_csv(rep, hdr));
  } else {
    json out{{"meta", sr::io::to_json(hdr)}, {"probe", sr::io::to_json(rep)}};
    write_output(o, out.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sum-rule toolkit for the classical tridiagonal ensembles"};
  app.require_subcommand(1);

  Options o;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "JSON config file (schema: docs/config.schema.json)");
    sub->add_option("--format", o.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", o.output, "output path (default stdout)");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--depth", o.depth, "coefficient truncation depth");
    sub->add_option("--panels", o.panels, "quadrature panel count");
    sub->add_option("--tol", o.tol, "verification tolerance");
    sub->add_option("--ensemble", o.ensemble, "hermite|laguerre|jacobi|jacobi-kn");
    sub->add_option("--tau", o.tau, "Laguerre parameter in (0,1]");
    sub->add_option("--kappa1", o.kappa1, "Jacobi parameter >= 0");
    sub->add_option("--kappa2", o.kappa2, "Jacobi parameter >= 0");
  };

  CLI::App* verify = app.add_subcommand("verify", "evaluate both sides of a sum rule");
  add_common(verify);
  verify->add_option("--measure", o.measure,
                     "sc | mp | kmk | rank-one:c=V | atom-at-zero | bernstein-szego:r=V");

  CLI::App* sample = app.add_subcommand("sample", "draw one tridiagonal ensemble sample");
  add_common(sample);
  sample->add_option("--n", o.n, "matrix size");
  sample->add_option("--beta", o.beta, "inverse temperature");
  sample->add_flag("--weighted", o.weighted, "spectral weights instead of uniform");

  CLI::App* rates = app.add_subcommand("rates", "tabulate outlier rate functions");
  add_common(rates);
  rates->add_option("--grid", o.grid, "a:b:step or comma list")->required();
  rates->add_option("--side", o.side, "plus|minus")
      ->check(CLI::IsMember({"plus", "minus"}));

  CLI::App* probe = app.add_subcommand("probe", "Monte Carlo tail probe over an n ladder");
  add_common(probe);
  probe->add_option("--x", o.x, "probe point (outside the support)")->required();
  probe->add_option("--side", o.side, "plus|minus")
      ->check(CLI::IsMember({"plus", "minus"}));
  probe->add_option("--nladder", o.nladder, "ladder of matrix sizes")->delimiter(',');
  probe->add_option("--draws", o.draws, "draws per ladder size");
  probe->add_option("--beta", o.beta, "inverse temperature");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      // config supplies defaults; explicitly passed flags win
      Options from_file = o;
      apply_config_file(from_file, config_path);
      CLI::App* sub = app.get_subcommands().front();
      auto keep = [&](const std::string& flag, auto member) {
        if (sub->count(flag) > 0) from_file.*member = o.*member;
      };
      keep("--format", &Options::format);
      keep("--output", &Options::output);
      keep("--seed", &Options::seed);
      keep("--depth", &Options::depth);
      keep("--panels", &Options::panels);
      keep("--tol", &Options::tol);
      keep("--ensemble", &Options::ensemble);
      keep("--tau", &Options::tau);
      keep("--kappa1", &Options::kappa1);
      keep("--kappa2", &Options::kappa2);
      o = from_file;
    }
    if (app.got_subcommand("verify")) {
      o.command = "verify";
      return run_verify(o);
    }
    if (app.got_subcommand("sample")) {
      o.command = "sample";
      return run_sample(o);
    }
    if (app.got_subcommand("rates")) {
      o.command = "rates";
      return run_rates(o);
    }
    if (app.got_subcommand("probe")) {
      o.command = "probe";
      return run_probe(o);
    }
  } catch (const CliError& e) {
    std::cerr << json{{"error", e.message}, {"field", e.field}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 1;
}
