#include "twosticks/report_io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include <fmt/format.h>

#include "twosticks/errors.hpp"

namespace twosticks {

namespace {

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string iso8601_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (double c : v) j.push_back(c);
  return j;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("vector must be a JSON array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput("vector entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json to_json(const Stick& s) { return Json{{"start", to_json(s.start)}, {"end", to_json(s.end)}}; }

Stick stick_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("start") || !j.contains("end")) throw InvalidInput("stick needs start and end");
  Stick s{vector_from_json(j.at("start")), vector_from_json(j.at("end"))};
  if (s.start.size() != s.end.size()) throw InvalidInput("stick endpoints differ in dimension");
  return s;
}

Json to_json(const Witness& w) {
  return Json{{"quantity", w.quantity}, {"x", to_json(w.x)}, {"y", to_json(w.y)}, {"ratio", w.ratio}};
}

Json to_json(const ConstantsReport& r) {
  Json w = Json::array();
  for (const auto& x : r.worst_witnesses) w.push_back(to_json(x));
  return Json{{"norm", r.norm},
              {"mode", to_string(r.mode)},
              {"lambda_hat", opt(r.lambda_hat)},
              {"r", opt(r.r)},
              {"t_hat", opt(r.t_hat)},
              {"doubling_radius", opt(r.doubling_radius)},
              {"k_hat", opt(r.k_hat)},
              {"balanced_radius", opt(r.balanced_radius)},
              {"a_hat", opt(r.a_hat)},
              {"p", opt(r.p)},
              {"b_hat", opt(r.b_hat)},
              {"q", opt(r.q)},
              {"samples", r.samples},
              {"informative", r.informative},
              {"seed", r.seed},
              {"worst_witnesses", w}};
}

Json to_json(const ModulusResult& r) {
  return Json{{"sigma", r.sigma},
              {"t", r.t},
              {"maximizer_y", to_json(r.maximizer_y)},
              {"normal_at_y", to_json(r.normal_at_y)},
              {"kkt_residual", r.kkt_residual},
              {"kkt_alpha", r.kkt_alpha},
              {"converged", r.converged},
              {"grid_refined", r.grid_refined},
              {"best_effort", r.best_effort},
              {"best_start", r.best_start}};
}

Json to_json(const TransferReport& r) {
  Json w = Json::array();
  for (const auto& x : r.violation_witnesses) w.push_back(to_json(x));
  return Json{{"kappa", r.kappa},
              {"lipschitz", r.lipschitz},
              {"convexity_radius", r.convexity_radius},
              {"alpha_window", r.alpha_window},
              {"full_lambda_bound", r.full_lambda_bound},
              {"convexity_checked", r.convexity_checked},
              {"doubling_checked", r.doubling_checked},
              {"balanced_checked", r.balanced_checked},
              {"violations", r.violations},
              {"violation_witnesses", w},
              {"worst_convexity_margin", r.worst_convexity_margin},
              {"worst_doubling_margin", r.worst_doubling_margin},
              {"worst_balanced_margin", r.worst_balanced_margin}};
}

Json to_json(const OnevScan& s) {
  return Json{{"p", s.p},
              {"points", s.points},
              {"inf_double_ratio", s.inf_double_ratio},
              {"z_at_inf", s.z_at_inf},
              {"sup_double_ratio", s.sup_double_ratio},
              {"z_at_sup", s.z_at_sup},
              {"sup_balance_ratio", s.sup_balance_ratio},
              {"z_at_balance", s.z_at_balance},
              {"near_zero_ratio_neg", s.near_zero_ratio_neg},
              {"near_zero_ratio_pos", s.near_zero_ratio_pos},
              {"near_infinity_ratio_neg", s.near_infinity_ratio_neg},
              {"near_infinity_ratio_pos", s.near_infinity_ratio_pos}};
}

Json to_json(const StripReport& r) {
  return Json{{"delta", r.delta},
              {"rho", r.rho},
              {"kappa", r.kappa},
              {"lambda", r.lambda},
              {"k_const", r.k_const},
              {"bound", r.bound},
              {"scale", r.scale},
              {"ybar", to_json(r.ybar)},
              {"normal_ybar", to_json(r.normal_ybar)},
              {"projection", r.projection},
              {"promise_lhs", r.promise_lhs},
              {"promise_rhs", r.promise_rhs},
              {"axya", r.axya},
              {"sigma_e", r.sigma_e},
              {"sigma_ebar", r.sigma_ebar},
              {"lstar", to_json(r.lstar)},
              {"lambdastar", to_json(r.lambdastar)},
              {"tstar", r.tstar},
              {"star_gap", r.star_gap},
              {"star_clearance", r.star_clearance},
              {"strip_ok", r.strip_ok},
              {"promise_ok", r.promise_ok},
              {"axya_ok", r.axya_ok},
              {"star_ok", r.star_ok},
              {"passed", r.passed}};
}

Json to_json(const SharpnessCurve& c) {
  Json rows = Json::array();
  for (const auto& r : c.rows) {
    rows.push_back(Json{{"parameter", r.parameter}, {"gap_norm", r.gap_norm}, {"m_norm", r.m_norm}, {"ratio", r.ratio}});
  }
  return Json{{"p", c.p}, {"exponent", c.exponent}, {"band_low", c.band_low}, {"band_high", c.band_high},
              {"rows", rows}};
}

Json to_json(const SiteSet& s) {
  Json sites = Json::array();
  for (const auto& v : s.sites) sites.push_back(to_json(v));
  return Json{{"norm", s.norm.describe()}, {"dim", s.norm.dim()}, {"sites", sites}};
}

Json to_json(const RayFamily& f) {
  Json sticks = Json::array();
  for (const auto& s : f.sticks) sticks.push_back(to_json(s));
  return Json{{"length", f.length}, {"sticks", sticks}, {"site_index", f.site_index}, {"notes", f.notes}};
}

Json to_json(const NormValidationReport& r) {
  return Json{{"samples", r.samples},
              {"seed", r.seed},
              {"homogeneity", r.homogeneity},
              {"symmetry", r.symmetry},
              {"triangle_excess", r.triangle_excess},
              {"euler", r.euler},
              {"support_excess", r.support_excess},
              {"normal_homogeneity", r.normal_homogeneity},
              {"normal_oddness", r.normal_oddness}};
}

Norm norm_from_descriptor(const std::string& d, int dim) {
  if (d == "euclidean") return Norm::euclidean(dim);
  if (d.rfind("p:", 0) == 0) {
    const std::string v = d.substr(2);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(v, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad p-norm exponent '" + v + "'");
    }
    if (used != v.size()) throw InvalidInput("bad p-norm exponent '" + v + "'");
    return Norm::p_norm(p, dim);
  }
  throw InvalidInput("unknown norm '" + d + "' (expected euclidean or p:<value>)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

void CsvWriter::sep() {
  if (!first_) out_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::header(const std::vector<std::string>& names) {
  for (const auto& n : names) text(n);
  end_row();
  return *this;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ << format_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(const Vector& v) {
  sep();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out_ << ';';
    out_ << format_number(v[i]);
  }
  return *this;
}

CsvWriter& CsvWriter::text(const std::string& s) {
  sep();
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out_ << s;
  } else {
    out_ << '"';
    for (char c : s) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

void write_family_csv(std::ostream& out, const RayFamily& family) {
  CsvWriter csv(out);
  csv.header({"stick", "site_index", "start", "end", "length"});
  for (std::size_t k = 0; k < family.sticks.size(); ++k) {
    csv.cell(k).cell(family.site_index[k]).cell(family.sticks[k].start).cell(family.sticks[k].end).cell(family.length);
    csv.end_row();
  }
}

void write_sharpness_csv(std::ostream& out, const SharpnessCurve& curve) {
  CsvWriter csv(out);
  csv.header({"parameter", "gap_norm", "m_norm", "ratio"});
  for (const auto& r : curve.rows) {
    csv.cell(r.parameter).cell(r.gap_norm).cell(r.m_norm).cell(r.ratio);
    csv.end_row();
  }
}

}  // namespace twosticks
