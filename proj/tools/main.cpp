#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twosticks/atlas.hpp"
#include "twosticks/errors.hpp"
#include "twosticks/moduli.hpp"
#include "twosticks/random.hpp"
#include "twosticks/report_io.hpp"
#include "twosticks/sharpness.hpp"
#include "twosticks/sticks.hpp"

using namespace twosticks;

namespace {

enum Exit { kOk = 0, kConfig = 1, kDegenerate = 2, kViolation = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, double> kDefaultTolerances{
    {"bound", 1e-9}, {"monotone", 1e-12}, {"interp", 1e-12}, {"lipschitz", 1e-9}, {"limit", 1e-2}};

const std::map<std::string, std::map<std::string, double>> kDefaultParams{
    {"certify", {{"radius", 1.0}}},
    {"sticks", {{"sites", 6}, {"queries", 60}, {"length", 1.0}, {"box", 3.0}, {"t", 0.5}}},
    {"strip", {{"configs", 1000}, {"rho", 0.3}, {"delta", 0.0}, {"target", 0.5}, {"lambda", 0.0}, {"k", 0.0}, {"big_r", 1.0}}},
    {"sharpness", {{"per_decade", 4}}},
    {"atlas", {{"sites", 8}, {"queries", 100}, {"length", 1.0}, {"box", 3.0}, {"t", 0.5}}},
    {"onev", {{"points", 100000}, {"zmin", 1e-6}, {"zmax", 1e6}}},
};

struct Config {
  std::string command;
  std::string norm;
  int dim = 2;
  std::uint64_t seed = 1;
  int samples = 10000;
  double r = 0.25;
  std::map<std::string, double> tolerances = kDefaultTolerances;
  std::string out;
  std::map<std::string, double> params;

  double param(const std::string& k) const { return params.at(k); }
  std::size_t count(const std::string& k) const {
    const double v = params.at(k);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) throw ConfigError(k + " must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  double tol(const std::string& k) const { return tolerances.at(k); }

  Json to_json() const {
    return Json{{"command", command}, {"norm", norm},       {"dim", dim}, {"seed", seed}, {"samples", samples},
                {"r", r},             {"tolerances", tolerances}, {"out", out}, {"params", params}};
  }
};

void apply_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") {
        if (v.get<std::string>() != cfg.command) throw ConfigError("config file is for command " + v.get<std::string>());
      } else if (key == "norm") {
        cfg.norm = v.get<std::string>();
      } else if (key == "dim") {
        cfg.dim = v.get<int>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "samples") {
        cfg.samples = v.get<int>();
      } else if (key == "r") {
        cfg.r = v.get<double>();
      } else if (key == "out") {
        cfg.out = v.get<std::string>();
      } else if (key == "tolerances") {
        for (const auto& [k, t] : v.items()) cfg.tolerances[k] = t.get<double>();
      } else if (key == "params") {
        for (const auto& [k, t] : v.items()) {
          if (!cfg.params.count(k)) throw ConfigError("unknown parameter '" + k + "' for " + cfg.command);
          cfg.params[k] = t.get<double>();
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError("bad config value: " + std::string(e.what()));
  }
}

void validate(const Config& cfg) {
  if (cfg.norm.empty()) throw ConfigError("--norm is required");
  if (cfg.dim < 1) throw ConfigError("--dim must be >= 1");
  if (cfg.samples < 1) throw ConfigError("--samples must be >= 1");
  if (!(cfg.r > 0.0) || !std::isfinite(cfg.r)) throw ConfigError("--r must be positive");
  for (const auto& [k, v] : cfg.tolerances) {
    if (!kDefaultTolerances.count(k)) throw ConfigError("unknown tolerance '" + k + "'");
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tolerance '" + k + "' must be positive");
  }
  for (const auto& [k, v] : cfg.params) {
    if (!std::isfinite(v)) throw ConfigError("parameter '" + k + "' must be finite");
  }
}

Json envelope(const Config& cfg, const Norm& norm) {
  return Json{{"command", cfg.command}, {"config", cfg.to_json()}, {"norm", norm.describe()}, {"timestamp", iso8601_now()}};
}

void emit_json(const Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

// CSV to --out (or stdout); the JSON summary goes next to it as <out>.json.
void emit_csv(const Config& cfg, const std::string& csv, const Json& summary) {
  if (cfg.out.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + cfg.out);
  f << csv;
  emit_json(summary, cfg.out + ".json");
}

double norm_exponent(const Norm& n) { return n.kind() == NormKind::euclidean ? 2.0 : *n.exponent(); }

int cmd_certify(const Config& cfg, const Norm& norm) {
  const double radius = cfg.param("radius");
  if (!(radius > 0.0)) throw ConfigError("radius must be positive");
  Json j = envelope(cfg, norm);
  const ConstantsReport full = estimate_lambda(norm, cfg.r, SamplingMode::full, cfg.samples, cfg.seed);
  ConstantsReport tangent = estimate_lambda(norm, cfg.r, SamplingMode::tangent, cfg.samples, cfg.seed + 1);
  tangent.merge(estimate_doubling(norm, cfg.r, SamplingMode::tangent, cfg.samples, cfg.seed + 2));
  tangent.merge(estimate_balanced(norm, radius, SamplingMode::tangent, cfg.samples, cfg.seed + 3));
  j["results"] = Json{{"full", to_json(full)}, {"tangent", to_json(tangent)}};
  if (*full.lambda_hat > 2.0) {
    const ExtendedConstants ext = extend_to_radius(cfg.r, *full.lambda_hat, radius);
    j["results"]["extended"] = Json{{"r", ext.r}, {"lambda", ext.lambda}, {"doublings", ext.doublings}};
  }
  emit_json(j, cfg.out);
  return kOk;
}

int cmd_sticks(const Config& cfg, const Norm& norm) {
  const double box = cfg.param("box"), length = cfg.param("length"), t_holder = cfg.param("t");
  if (!(box > 0.0 && length > 0.0)) throw ConfigError("box and length must be positive");
  if (!(t_holder > 0.0 && t_holder <= 1.0)) throw ConfigError("t must lie in (0, 1]");
  Rng rng = sample_stream(cfg.seed, 0);
  SiteSet set{norm, {}};
  for (std::size_t k = 0; k < cfg.count("sites"); ++k) set.sites.push_back(gaussian_vector(rng, norm.dim()) * box);
  const RayFamily fam = build_ray_family(set, halton_queries(norm.dim(), cfg.count("queries"), -box, box, cfg.seed), length);

  const bool euclid = norm.kind() == NormKind::euclidean;
  const double pe = norm_exponent(norm);
  const double hp = std::max(pe, 2.0), hq = std::min(pe, 2.0);
  std::ostringstream out;
  CsvWriter csv(out);
  if (euclid) {
    csv.header({"i", "j", "s", "t", "two_sticks", "flip_chain", "monotonicity", "interp_residual", "lipschitz_ratio", "violation"});
  } else {
    csv.header({"i", "j", "s", "t", "two_sticks", "flip_chain", "holder_t", "holder_ratio", "violation"});
  }
  std::size_t pairs = 0, violations = 0;
  double worst_lip = 0.0, worst_mono = 0.0, worst_interp = -std::numeric_limits<double>::infinity(), holder_sup = 0.0;
  for (std::size_t i = 0; i < fam.sticks.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.sticks.size(); ++j, ++pairs) {
      const Stick& l = fam.sticks[i];
      const Stick& m = fam.sticks[j];
      Rng pr = sample_stream(cfg.seed + 1, pairs);
      const double s = uniform(pr, 1e-3, 1.0);
      const double t = uniform(pr, 1e-3, s);
      const bool ts = two_sticks_check(norm, l, m);
      const bool flip = flip_chain_verify(norm, l, m, s, t).ok();
      bool bad = !ts || !flip;
      csv.cell(i).cell(j).cell(s).cell(t).cell(ts).cell(flip);
      if (euclid) {
        const double mono = euclid_monotonicity(l, m);
        double interp = -std::numeric_limits<double>::infinity();
        for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) interp = std::max(interp, euclid_interp_bound_residual(l, m, u));
        const double lip = euclid_lipschitz_ratio(l, m, s, t);
        bad = bad || mono < -cfg.tol("monotone") || interp > cfg.tol("interp") || lip > 1.0 + cfg.tol("lipschitz");
        worst_mono = std::min(worst_mono, mono);
        worst_interp = std::max(worst_interp, interp);
        worst_lip = std::max(worst_lip, lip);
        csv.cell(mono).cell(interp).cell(lip);
      } else {
        const double h = holder_ratio(norm, l, m, t_holder, hq, hp, std::numeric_limits<double>::max());
        holder_sup = std::max(holder_sup, h);
        csv.cell(t_holder).cell(h);
      }
      csv.cell(bad);
      csv.end_row();
      violations += bad;
    }
  }
  Json j = envelope(cfg, norm);
  j["results"] = Json{{"sticks", fam.sticks.size()}, {"pairs", pairs}, {"violations", violations}, {"notes", fam.notes}};
  if (euclid) {
    j["results"]["worst_monotonicity"] = worst_mono;
    j["results"]["worst_interp_residual"] = worst_interp;
    j["results"]["worst_lipschitz_ratio"] = worst_lip;
  } else {
    j["results"]["holder_q"] = hq;
    j["results"]["holder_p"] = hp;
    j["results"]["holder_sup"] = holder_sup;
  }
  emit_csv(cfg, out.str(), j);
  return violations ? kViolation : kOk;
}

int cmd_strip(const Config& cfg, const Norm& norm) {
  const double rho = cfg.param("rho"), big_r = cfg.param("big_r");
  double lambda = cfg.param("lambda"), k = cfg.param("k"), delta = cfg.param("delta");
  Json constants = Json::object();
  if (lambda == 0.0) {
    const ConstantsReport full = estimate_lambda(norm, cfg.r, SamplingMode::full, cfg.samples, cfg.seed);
    if (!(*full.lambda_hat > 2.0)) throw DegenerateEstimate("estimated convexity constant is not above 2");
    const ExtendedConstants ext = extend_to_radius(cfg.r, *full.lambda_hat, big_r);
    lambda = ext.lambda;
    constants["lambda_estimate"] = to_json(full);
    constants["extension"] = Json{{"r", ext.r}, {"lambda", ext.lambda}, {"doublings", ext.doublings}};
  }
  if (k == 0.0) {
    const ConstantsReport bal = estimate_balanced(norm, big_r, SamplingMode::tangent, cfg.samples, cfg.seed + 1);
    k = std::max(1.0, *bal.k_hat);
    constants["k_estimate"] = to_json(bal);
  }
  if (!(lambda > 2.0)) throw PreconditionError("lambda", "the convexity constant must exceed 2");
  if (!(k >= 1.0)) throw PreconditionError("k_const", "the balanced constant must be at least 1");
  if (delta == 0.0) delta = strip_delta_for_bound(lambda, k, rho, cfg.param("target"));
  constants["lambda"] = lambda;
  constants["k"] = k;
  constants["delta"] = delta;

  StripSamplerOptions so;
  so.delta = delta;
  so.rho = rho;
  StripOptions opts;
  opts.tol = cfg.tol("bound");
  const double radius = 4.0 / (rho - 3.0 * delta) * delta;

  const std::size_t n = cfg.count("configs");
  std::size_t passed = 0, failed = 0, unsampled = 0;
  std::map<std::string, std::size_t> rejected;
  double worst_strip = 0.0, worst_promise = 0.0;
  Json rows = Json::array();
  std::size_t draws = 0;
  for (; passed + failed < n && draws < 5 * n; ++draws) {
    const std::size_t i = draws;
    Rng rng = sample_stream(cfg.seed + 2, i);
    const auto c = sample_strip_configuration(norm, so, rng);
    if (!c) {
      ++unsampled;
      continue;
    }
    Stick l = c->l, m = c->m;
    if (modulus(norm, l.direction(), radius).sigma > modulus(norm, m.direction(), radius).sigma) std::swap(l, m);
    StripReport rep;
    try {
      rep = strip_experiment(norm, l, m, c->x0, delta, rho, lambda, k, big_r, opts);
    } catch (const PreconditionError& e) {
      const std::string h = e.hypothesis();
      if (h == "lambda" || h == "k_const" || h == "delta" || h == "rho" || h == "eta" || h == "kappa") throw;
      ++rejected[h];
      continue;
    }
    rep.passed ? ++passed : ++failed;
    worst_strip = std::max(worst_strip, std::abs(rep.projection) / rep.bound);
    worst_promise = std::max(worst_promise, rep.promise_lhs / rep.promise_rhs);
    rows.push_back(Json{{"index", i},
                        {"passed", rep.passed},
                        {"projection", rep.projection},
                        {"bound", rep.bound},
                        {"promise_lhs", rep.promise_lhs},
                        {"promise_rhs", rep.promise_rhs},
                        {"axya", rep.axya},
                        {"star_ok", rep.star_ok}});
  }
  Json j = envelope(cfg, norm);
  j["results"] = Json{{"constants", constants},       {"checked", passed + failed},   {"passed", passed},
                      {"failed", failed},             {"draws", draws},           {"unsampled", unsampled},       {"rejected", rejected},
                      {"worst_strip_ratio", worst_strip}, {"worst_promise_ratio", worst_promise}, {"configs", rows}};
  emit_json(j, cfg.out);
  return failed ? kViolation : kOk;
}

int cmd_sharpness(const Config& cfg, const Norm& norm) {
  const double p = norm_exponent(norm);
  const int per = static_cast<int>(cfg.count("per_decade"));
  const SharpnessCurve curve = sharpness_curve(p, default_sharpness_grid(p, per));
  std::ostringstream out;
  write_sharpness_csv(out, curve);
  Json j = envelope(cfg, norm);
  j["results"] = to_json(curve);
  emit_csv(cfg, out.str(), j);
  return kOk;
}

int cmd_atlas(const Config& cfg, const Norm& norm) {
  const double box = cfg.param("box"), length = cfg.param("length"), t = cfg.param("t");
  if (!(box > 0.0 && length > 0.0)) throw ConfigError("box and length must be positive");
  Rng rng = sample_stream(cfg.seed, 0);
  SiteSet set{norm, {}};
  for (std::size_t k = 0; k < cfg.count("sites"); ++k) set.sites.push_back(gaussian_vector(rng, norm.dim()) * box);
  const RayFamily fam = build_ray_family(set, halton_queries(norm.dim(), cfg.count("queries"), -box, box, cfg.seed), length);
  const std::size_t fails = count_two_sticks_failures(norm, fam);
  std::vector<double> grid;
  for (int e = -5; e <= 0; ++e) grid.push_back(std::pow(10.0, e));
  Json table = Json::array();
  bool lip_violation = false;
  if (!fam.sticks.empty()) {
    for (const auto& row : endpoint_map_modulus(norm, fam, t, grid)) {
      table.push_back(Json{{"delta0", row.delta0}, {"epsilon", row.epsilon}, {"pairs", row.pairs}});
      if (norm.kind() == NormKind::euclidean) {
        lip_violation = lip_violation || row.epsilon > 2.0 / t * row.delta0 * (1.0 + cfg.tol("lipschitz"));
      }
    }
  }
  std::ostringstream out;
  write_family_csv(out, fam);
  Json j = envelope(cfg, norm);
  j["results"] = Json{{"sites", to_json(set)},
                      {"sticks", fam.sticks.size()},
                      {"notes", fam.notes},
                      {"two_sticks_failures", fails},
                      {"endpoint_modulus", table}};
  emit_csv(cfg, out.str(), j);
  return fails || lip_violation ? kViolation : kOk;
}

int cmd_onev(const Config& cfg, const Norm& norm) {
  const double p = norm_exponent(norm);
  const double zmin = cfg.param("zmin"), zmax = cfg.param("zmax");
  if (!(zmin > 0.0 && zmax > zmin)) throw ConfigError("need 0 < zmin < zmax");
  const OnevScan s = onev_scan(p, onev_grid(cfg.count("points"), zmin, zmax));
  const double lim = cfg.tol("limit");
  auto near = [lim](double v, double ref) { return std::abs(v / ref - 1.0) <= lim; };
  Json j = envelope(cfg, norm);
  j["results"] = to_json(s);
  j["results"]["inf_above_two"] = s.inf_double_ratio > 2.0;
  j["results"]["zero_limit_ok"] = near(s.near_zero_ratio_pos, 4.0) && near(s.near_zero_ratio_neg, 4.0);
  j["results"]["infinity_limit_ok"] =
      near(s.near_infinity_ratio_pos, std::pow(2.0, p)) && near(s.near_infinity_ratio_neg, std::pow(2.0, p));
  emit_json(j, cfg.out);
  return s.inf_double_ratio > 2.0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two sticks experiments: convexity moduli, stick families, strip and sharpness checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  std::vector<std::string> tolerance_args;
  std::string config_path;
  app.add_option("--norm", cfg.norm, "euclidean or p:<value>");
  app.add_option("--dim", cfg.dim, "dimension")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo samples per estimate")->capture_default_str();
  app.add_option("--r", cfg.r, "convexity radius")->capture_default_str();
  app.add_option("--tolerance", tolerance_args, "name=value, repeatable");
  app.add_option("--out", cfg.out, "output path (stdout when omitted)");
  app.add_option("--config", config_path, "JSON file whose keys override the flags");

  std::map<std::string, std::map<std::string, double>> params = kDefaultParams;
  const std::map<std::string, std::string> about{
      {"certify", "estimate convexity, doubling and balanced constants"},
      {"sticks", "pairwise bound checks on a distance-function stick family (CSV)"},
      {"strip", "strip confinement experiment on sampled configurations"},
      {"sharpness", "Hölder exponent sharpness curve (CSV)"},
      {"atlas", "distance-function ray family and endpoint modulus (CSV)"},
      {"onev", "one-variable power remainder scan"},
  };
  std::map<std::string, CLI::App*> subs;
  for (auto& [name, block] : params) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    for (auto& [key, value] : block) sub->add_option("--" + key, value)->capture_default_str();
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) {
      cfg.command = name;
      cfg.params = params.at(name);
    }
  }

  try {
    for (const std::string& arg : tolerance_args) {
      const auto eq = arg.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--tolerance expects name=value, got '" + arg + "'");
      std::size_t used = 0;
      const std::string v = arg.substr(eq + 1);
      double x = 0.0;
      try {
        x = std::stod(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != v.size()) throw ConfigError("bad tolerance value '" + v + "'");
      cfg.tolerances[arg.substr(0, eq)] = x;
    }
    if (!config_path.empty()) apply_file(cfg, config_path);
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kConfig;
  }

  try {
    const Norm norm = norm_from_descriptor(cfg.norm, cfg.dim);
    if (cfg.command == "certify") return cmd_certify(cfg, norm);
    if (cfg.command == "sticks") return cmd_sticks(cfg, norm);
    if (cfg.command == "strip") return cmd_strip(cfg, norm);
    if (cfg.command == "sharpness") return cmd_sharpness(cfg, norm);
    if (cfg.command == "atlas") return cmd_atlas(cfg, norm);
    if (cfg.command == "onev") return cmd_onev(cfg, norm);
  } catch (const DegenerateEstimate& e) {
    std::cerr << "degenerate estimate: " << e.what() << "\n";
    return kDegenerate;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
