#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwb/chartio/chart.hpp"
#include "json.hpp"

namespace cwb::report {

using chart::Chart;
using chart::EvalPoint;
using sym::RationalFn;

/// One output object; the "record" key names its kind and keys keep insertion order.
using Record = nlohmann::ordered_json;

enum class Format { Text, Jsonl };

/// Text: `kind key=value ...` per line. Jsonl: one JSON object per line.
std::string render(const std::vector<Record>& records, Format format);

struct RunConfig {
  Chart chart;
  std::vector<EvalPoint> points;
  int max_order = 4;
  std::optional<int> truncation;                // ambient K, default n/2 + 1
  std::string which;                            // tensor name or verify suite
  std::vector<std::vector<RationalFn>> fields;  // classify-e spanning fields
};

/// Nonzero components of christoffel|riemann|ricci|scalar|schouten|cotton|weyl|bach|obstruction,
/// symbolically or at each point. Throws std::invalid_argument on an unknown name.
std::vector<Record> tensor_report(const RunConfig& cfg);

/// Per point: infinitesimal holonomy dimensions, E basis and genericity flags.
std::vector<Record> holonomy_report(const RunConfig& cfg);

/// Per point: jet orders solved pointwise, the obstruction in even dimension and the
/// tractor-ambient identification.
std::vector<Record> ambient_report(const RunConfig& cfg);

/// Chart with metric factor^2 g.
Chart rescale(const Chart& chart, const std::string& factor);

struct VerifyOptions {
  bool corrupt_bach = false;  // negative control: adds g to the obstruction
};
struct VerifyResult {
  std::vector<Record> records;
  std::size_t checks = 0;
  std::size_t failed = 0;
  bool all_pass() const { return failed == 0; }
};
/// Suites: all | obstruction | einstein | identification. `obstruction` on an odd-dimensional
/// chart throws amb::UnsupportedDimension; `all` skips it there.
VerifyResult verify(const RunConfig& cfg, const VerifyOptions& opts = {});

/// Region classification with the given spanning fields, or the E basis at the first point
/// taken as constant fields when none are given.
std::vector<Record> classify_e_report(const RunConfig& cfg);

/// Deterministic small rational points where the metric is nondegenerate with the declared signature.
std::vector<EvalPoint> sample_points(const Chart& chart, std::size_t count, std::uint32_t seed = 1);

/// Reads a vector field written as comma-separated component expressions.
std::vector<RationalFn> parse_field(const Chart& chart, const std::string& text);

}  // namespace cwb::report
