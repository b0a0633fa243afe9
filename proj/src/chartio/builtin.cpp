#include <sstream>

#include "cwb/chartio/chart.hpp"

namespace cwb::chart {
namespace {

std::string coord_list(const char* stem, int n) {
  std::string s;
  for (int i = 1; i <= n; ++i) s += std::string(i > 1 ? " " : "") + stem + std::to_string(i);
  return s;
}

std::string flat_text(int p, int q) {
  const int n = p + q;
  std::ostringstream os;
  os << "chart flat_" << p << "_" << q << "\ndim " << n << "\nsignature (" << p << "," << q << ")\ncoords "
     << coord_list("x", n) << "\nmetric\n";
  for (int i = 1; i <= n; ++i) os << "g[" << i << "," << i << "] = " << (i <= p ? "-1" : "1") << "\n";
  return os.str();
}

std::string sphere_text(int n) {
  std::ostringstream os;
  os << "chart s" << n << "\ndim " << n << "\nsignature (0," << n << ")\ncoords " << coord_list("x", n)
     << "\nmetric\n";
  std::string r2 = "1";
  for (int i = 1; i <= n; ++i) r2 += " + x" + std::to_string(i) + "^2";
  for (int i = 1; i <= n; ++i) os << "g[" << i << "," << i << "] = 4/(" << r2 << ")^2\n";
  return os.str();
}

const char* kPpwave4 = R"(chart ppwave_poly
dim 4
signature (1,3)
coords u v x y
metric
g[1,1] = x^2*u + y^3
g[1,2] = 1
g[3,3] = 1
g[4,4] = 1
)";

const char* kPpwaveHarmonic = R"(chart ppwave_harmonic
dim 4
signature (1,3)
coords u v x y
metric
g[1,1] = x^2 - y^2
g[1,2] = 1
g[3,3] = 1
g[4,4] = 1
)";

const char* kPpwaveQuartic = R"(chart ppwave_quartic
dim 4
signature (1,3)
coords u v x y
metric
g[1,1] = x^4 + u*y^2
g[1,2] = 1
g[3,3] = 1
g[4,4] = 1
)";

const char* kPpwave5 = R"(chart ppwave5
dim 5
signature (1,4)
coords u v x y z
metric
g[1,1] = x^2*u + y^3 + x*z^2
g[1,2] = 1
g[3,3] = 1
g[4,4] = 1
g[5,5] = 1
)";

const char* kPpwave6 = R"(chart ppwave6
dim 6
signature (1,5)
coords u v x y z w
metric
g[1,1] = x^2*u + y^3 + z*w^2
g[1,2] = 1
g[3,3] = 1
g[4,4] = 1
g[5,5] = 1
g[6,6] = 1
)";

const char* kPpwave6Sextic = R"(chart ppwave6_sextic
dim 6
signature (1,5)
coords u v x y z w
metric
g[1,1] = x^6 + u*y^2 + z*w
g[1,2] = 1
g[3,3] = 1
g[4,4] = 1
g[5,5] = 1
g[6,6] = 1
)";

const char* kS2xS2 = R"(chart s2xs2
dim 4
signature (0,4)
coords a b c d
metric
g[1,1] = 4/(1 + a^2 + b^2)^2
g[2,2] = 4/(1 + a^2 + b^2)^2
g[3,3] = 4/(1 + c^2 + d^2)^2
g[4,4] = 4/(1 + c^2 + d^2)^2
)";

const char* kWarped = R"(chart warped_poly
dim 4
signature (0,4)
coords x1 x2 x3 x4
metric
g[1,1] = 1 + x2^2
g[2,2] = 1 + x3^2
g[3,3] = 1
g[4,4] = 1
)";

const char* kDim3 = R"(chart dim3_random
dim 3
signature (0,3)
coords x y z
metric
g[1,1] = 1 + x^2
g[1,2] = y/2
g[1,3] = x*z/3
g[2,2] = 2 + z^2
g[3,3] = 1/(1 + y^2)
)";

std::string text_for(const std::string& name) {
  if (name == "flat_1_3") return flat_text(1, 3);
  if (name == "flat_2_2") return flat_text(2, 2);
  if (name == "flat_0_4") return flat_text(0, 4);
  if (name == "flat_3_3") return flat_text(3, 3);
  if (name == "flat_0_3") return flat_text(0, 3);
  if (name == "flat_2_3") return flat_text(2, 3);
  if (name == "s4") return sphere_text(4);
  if (name == "s6") return sphere_text(6);
  if (name == "ppwave_poly") return kPpwave4;
  if (name == "ppwave_harmonic") return kPpwaveHarmonic;
  if (name == "ppwave_quartic") return kPpwaveQuartic;
  if (name == "ppwave5") return kPpwave5;
  if (name == "ppwave6") return kPpwave6;
  if (name == "ppwave6_sextic") return kPpwave6Sextic;
  if (name == "s2xs2") return kS2xS2;
  if (name == "warped_poly") return kWarped;
  if (name == "dim3_random") return kDim3;
  throw UnknownChart("unknown built-in chart '" + name + "'");
}

}  // namespace

std::vector<std::string> builtin_chart_names() {
  return {"flat_1_3", "flat_2_2", "flat_0_4",    "flat_3_3",    "flat_0_3",   "flat_2_3",
          "s4",       "s6",       "ppwave_poly", "ppwave_harmonic", "ppwave_quartic", "ppwave5", "ppwave6", "ppwave6_sextic",
          "s2xs2",    "warped_poly", "dim3_random"};
}

Chart builtin_chart(const std::string& name) { return parse_chart(text_for(name)); }

std::vector<Chart> builtin_charts() {
  std::vector<Chart> out;
  for (const auto& n : builtin_chart_names()) out.push_back(builtin_chart(n));
  return out;
}

}  // namespace cwb::chart
