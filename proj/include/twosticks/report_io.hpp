#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twosticks/atlas.hpp"
#include "twosticks/moduli.hpp"
#include "twosticks/norm.hpp"
#include "twosticks/sharpness.hpp"
#include "twosticks/sticks.hpp"

namespace twosticks {

using Json = nlohmann::json;

/// Current UTC time, e.g. 2024-05-01T12:00:00Z.
std::string iso8601_now();

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const Stick& s);
Stick stick_from_json(const Json& j);

Json to_json(const Witness& w);
Json to_json(const ConstantsReport& r);
Json to_json(const ModulusResult& r);
Json to_json(const TransferReport& r);
Json to_json(const OnevScan& s);
Json to_json(const StripReport& r);
Json to_json(const SharpnessCurve& c);
Json to_json(const SiteSet& s);
Json to_json(const RayFamily& f);
Json to_json(const NormValidationReport& r);

/// Parses "euclidean" or "p:<value>".
Norm norm_from_descriptor(const std::string& descriptor, int dim);

/// Shortest text that reads back as the same double; "inf", "-inf", "nan"
/// for non-finite values. Independent of the locale.
std::string format_number(double v);

/// Comma-separated rows with '.' decimals.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& header(const std::vector<std::string>& names);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::int64_t v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<std::int64_t>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
  CsvWriter& cell(bool v) { return text(v ? "1" : "0"); }
  CsvWriter& cell(const Vector& v);  // coordinates separated by ';'
  CsvWriter& text(const std::string& s);
  void end_row();

 private:
  void sep();

  std::ostream& out_;
  bool first_ = true;
};

void write_family_csv(std::ostream& out, const RayFamily& family);
void write_sharpness_csv(std::ostream& out, const SharpnessCurve& curve);

}  // namespace twosticks
