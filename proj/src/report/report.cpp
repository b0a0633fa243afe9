#include "cwb/report/report.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cwb/ambient/ambient.hpp"
#include "cwb/holonomy/holonomy.hpp"
#include "cwb/symexpr/linear.hpp"

namespace cwb::report {

using curv::Curvature;
using curv::Pos;
using curv::TensorField;
using sym::FnMatrix;
using sym::QMatrix;
using sym::Rational;
using tractor::TractorConnection;

namespace {

std::string str(const Rational& r) { return r.get_str(); }

nlohmann::ordered_json vec_json(const std::vector<Rational>& v) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& x : v) a.push_back(str(x));
  return a;
}

nlohmann::ordered_json matrix_json(const QMatrix& m) {
  auto a = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Rational> row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(vec_json(row));
  }
  return a;
}

std::string render_value(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) s += ",";
      s += render_value(v[k]);
    }
    return s + "]";
  }
  return v.dump();
}

std::string slot_string(const std::vector<Pos>& slots) {
  std::string s;
  for (Pos p : slots) s += p == Pos::Up ? 'u' : 'd';
  return s;
}

std::string index_label(const Chart& chart, const std::vector<std::size_t>& idx) {
  std::string s;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ",";
    s += chart.coords[idx[k]];
  }
  return s;
}

std::string point_label(const Chart& chart, const EvalPoint& x) { return chart::print_point(chart, x); }

TensorField scalar_field(const Curvature& curv) {
  TensorField t(curv.n(), {});
  t[0] = curv.scalar();
  return t;
}

TensorField named_tensor(const Curvature& curv, const std::string& which) {
  if (which == "christoffel") return curv.christoffel();
  if (which == "riemann") return curv.riemann();
  if (which == "ricci") return curv.ricci();
  if (which == "scalar") return scalar_field(curv);
  if (which == "schouten") return curv.schouten();
  if (which == "cotton") return curv.cotton();
  if (which == "weyl") return curv.weyl();
  if (which == "bach") return curv.bach();
  if (which == "obstruction") return amb::obstruction(curv);
  throw std::invalid_argument("unknown tensor '" + which + "'");
}

std::vector<EvalPoint> points_or_sample(const RunConfig& cfg) {
  return cfg.points.empty() ? sample_points(cfg.chart, 3) : cfg.points;
}

/// O(d_i)^# for each i.
std::vector<std::vector<Rational>> raised_rows(const QMatrix& O, const QMatrix& ginv) {
  const std::size_t n = O.rows();
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) out[i][a] += ginv(a, b) * O(i, b);
  return out;
}

bool is_einstein(const Curvature& curv) {
  const std::size_t n = curv.n();
  RationalFn s = curv.scalar() / RationalFn(Rational(static_cast<long>(n)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!(curv.ricci().at({a, b}) - s * curv.g()(a, b)).is_zero()) return false;
  return true;
}

class Checks {
 public:
  explicit Checks(VerifyResult& out) : out_(out) {}
  void add(const std::string& name, const std::string& point, bool pass, const std::string& detail = "") {
    Record r{{"record", "check"}, {"name", name}, {"point", point}, {"result", pass ? "pass" : "fail"}};
    if (!detail.empty()) r["detail"] = detail;
    out_.records.push_back(std::move(r));
    ++out_.checks;
    if (!pass) ++out_.failed;
  }
  void skip(const std::string& name, const std::string& point, const std::string& reason) {
    out_.records.push_back(
        Record{{"record", "check"}, {"name", name}, {"point", point}, {"result", "skip"}, {"detail", reason}});
  }

 private:
  VerifyResult& out_;
};

}  // namespace

std::string render(const std::vector<Record>& records, Format format) {
  std::ostringstream os;
  for (const auto& r : records) {
    if (format == Format::Jsonl) {
      os << r.dump() << '\n';
      continue;
    }
    bool first = true;
    for (const auto& [key, value] : r.items()) {
      if (key == "record") {
        os << render_value(value);
      } else {
        std::string v = render_value(value);
        if (v.find(' ') != std::string::npos) v = '"' + v + '"';
        os << ' ' << key << '=' << v;
      }
      first = false;
    }
    if (!first) os << '\n';
  }
  return os.str();
}

std::vector<Record> tensor_report(const RunConfig& cfg) {
  Curvature curv(cfg.chart);
  const TensorField t = named_tensor(curv, cfg.which);
  std::vector<Record> out;
  auto emit = [&](const std::string& point, const std::vector<std::string>& values) {
    std::size_t nonzero = 0;
    for (const auto& v : values) nonzero += v != "0";
    out.push_back(Record{{"record", "tensor"},
                         {"which", cfg.which},
                         {"chart", cfg.chart.name},
                         {"point", point},
                         {"slots", slot_string(t.slots())},
                         {"nonzero", nonzero}});
    for (std::size_t f = 0; f < values.size(); ++f)
      if (values[f] != "0")
        out.push_back(Record{{"record", "component"},
                             {"which", cfg.which},
                             {"index", index_label(cfg.chart, t.unflatten(f))},
                             {"value", values[f]}});
  };
  if (cfg.points.empty()) {
    std::vector<std::string> values;
    for (std::size_t f = 0; f < t.size(); ++f) values.push_back(t[f].to_string());
    emit("symbolic", values);
  }
  for (const auto& x : cfg.points) {
    std::vector<std::string> values;
    for (const auto& v : t.evaluate(x.assignment)) values.push_back(str(v));
    emit(point_label(cfg.chart, x), values);
  }
  return out;
}

std::vector<Record> holonomy_report(const RunConfig& cfg) {
  if (cfg.points.empty()) throw std::invalid_argument("holonomy needs at least one point");
  Curvature curv(cfg.chart);
  TractorConnection conn(curv);
  std::vector<Record> out;
  for (const auto& x : cfg.points) {
    auto res = hol::infinitesimal_holonomy(conn, x, cfg.max_order);
    QMatrix gx = sym::evaluate(curv.g(), x.assignment);
    auto gen = hol::genericity_report(res.algebra, gx);
    auto E = hol::holonomy_distribution(res.algebra, gx);
    auto basis = nlohmann::ordered_json::array();
    for (const auto& v : E.basis) basis.push_back(vec_json(v));
    auto dims = nlohmann::ordered_json::array();
    for (auto d : res.dims_by_order) dims.push_back(d);
    out.push_back(Record{
        {"record", "holonomy"},
        {"chart", cfg.chart.name},
        {"point", point_label(cfg.chart, x)},
        {"max_order", res.max_order},
        {"dims_by_order", dims},
        {"dim", gen.dim},
        {"full_dim", gen.full_dim},
        {"stabilized", res.stabilized},
        {"closed", res.algebra.closed},
        {"status", gen.generic ? std::string("generic")
                               : "not observed generic up to order " + std::to_string(res.max_order)},
        {"e_rank", E.rank()},
        {"e_basis", basis},
        {"open_orbit", gen.open_orbit},
        {"e_lightlike", gen.e_lightlike}});
  }
  return out;
}

std::vector<Record> ambient_report(const RunConfig& cfg) {
  Curvature curv(cfg.chart);
  const std::size_t n = curv.n();
  const int K = cfg.truncation.value_or(static_cast<int>(n / 2) + 1);
  if (K < 1) throw std::invalid_argument("truncation must be at least 1");
  const bool even = n % 2 == 0;
  const int top = even ? std::min(K, static_cast<int>(n / 2)) : K;
  std::vector<Record> out;
  out.push_back(Record{{"record", "ambient"},
                       {"chart", cfg.chart.name},
                       {"n", n},
                       {"truncation", K},
                       {"solved_orders", top},
                       {"obstruction_constant", even ? nlohmann::ordered_json(str(amb::obstruction_constant(n)))
                                                     : nlohmann::ordered_json()}});
  amb::AmbientJet jet = amb::solve_jet(curv, std::max(top, 2));
  TractorConnection conn(curv);
  for (const auto& x : cfg.points) {
    const std::string p = point_label(cfg.chart, x);
    for (int k = 1; k <= top; ++k) {
      auto sol = amb::solve_jet_order(jet, k, x);
      out.push_back(Record{{"record", "jet_order"},
                           {"point", p},
                           {"order", k},
                           {"unknowns", sol.unknowns},
                           {"rank", sol.rank},
                           {"unique", sol.unique},
                           {"free_dim", sol.free_dim},
                           {"forced_trace", sol.forced_trace ? nlohmann::ordered_json(str(*sol.forced_trace))
                                                             : nlohmann::ordered_json()},
                           {"value", matrix_json(sol.value)}});
    }
    if (even)
      out.push_back(Record{{"record", "obstruction"}, {"point", p}, {"value", matrix_json(amb::obstruction(curv, x))}});
    auto rep = amb::tractor_ambient_identification_check(jet, conn, x);
    auto mism = nlohmann::ordered_json::array();
    for (const auto& m : rep.mismatches) mism.push_back(m);
    out.push_back(Record{
        {"record", "identification"},
        {"point", p},
        {"tangential", rep.tangential_pass},
        {"t", rep.t_pass},
        {"rho", rep.rho_pass},
        {"rho_ratio", rep.rho_ratio ? nlohmann::ordered_json(str(*rep.rho_ratio)) : nlohmann::ordered_json()},
        {"mismatches", mism}});
  }
  return out;
}

Chart rescale(const Chart& chart, const std::string& factor) {
  sym::ParseOptions opts;
  opts.allowed_variables = chart.coords;
  return curv::conformal_rescale(chart, sym::parse_expression(factor, opts));
}

VerifyResult verify(const RunConfig& cfg, const VerifyOptions& opts) {
  const std::string suite = cfg.which.empty() ? "all" : cfg.which;
  if (suite != "all" && suite != "obstruction" && suite != "einstein" && suite != "identification")
    throw std::invalid_argument("unknown verify suite '" + suite + "'");
  Curvature curv(cfg.chart);
  TractorConnection conn(curv);
  const std::size_t n = curv.n();
  const bool even = n % 2 == 0;
  if (suite == "obstruction" && !even)
    throw amb::UnsupportedDimension("obstruction checks need even dimension, got " + std::to_string(n));
  const auto points = points_or_sample(cfg);

  VerifyResult res;
  Checks checks(res);
  std::vector<hol::HolonomyResult> hols;
  auto holonomy_at = [&](std::size_t k) -> const hol::HolonomyResult& {
    while (hols.size() <= k) hols.push_back(hol::infinitesimal_holonomy(conn, points[hols.size()], cfg.max_order));
    return hols[k];
  };

  std::optional<TensorField> O;
  const bool want_obstruction = even && (suite == "all" || suite == "obstruction" || suite == "einstein");
  if (want_obstruction) {
    O = amb::obstruction(curv);
    if (opts.corrupt_bach) *O = *O + TensorField::from_matrix(curv.g(), Pos::Down, Pos::Down);
  }

  if (even && (suite == "all" || suite == "obstruction")) {
    const FnMatrix Om = O->to_matrix();
    const FnMatrix& ginv = curv.ginv();
    if (n == 4) checks.add("obstruction_equals_bach", "symbolic", *O == curv.bach());
    checks.add("obstruction_symmetric", "symbolic", Om == Om.transpose());
    RationalFn tr;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) tr = tr + ginv(a, b) * Om(a, b);
    checks.add("obstruction_trace_free", "symbolic", tr.is_zero());
    const TensorField DO = curv.covariant_derivative(*O);
    bool div_free = true;
    for (std::size_t i = 0; i < n && div_free; ++i) {
      RationalFn d;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) d = d + ginv(j, k) * DO.at({i, j, k});
      div_free = d.is_zero();
    }
    checks.add("obstruction_divergence_free", "symbolic", div_free);

    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto& x = points[k];
      const std::string p = point_label(cfg.chart, x);
      const auto& h = holonomy_at(k);
      const QMatrix gx = sym::evaluate(curv.g(), x.assignment);
      const QMatrix gix = *sym::invert(gx).inverse;
      const auto images = raised_rows(sym::evaluate(Om, x.assignment), gix);
      bool member = true;
      for (const auto& v : images) member = member && hol::membership(tractor::s_minus_wedge(v, gx), h.algebra);
      checks.add("obstruction_membership", p, member, "order " + std::to_string(h.max_order));

      auto gen = hol::genericity_report(h.algebra, gx);
      if (gen.generic) {
        checks.skip("lightlike_image", p, "generic algebra");
        continue;
      }
      auto E = hol::holonomy_distribution(h.algebra, gx);
      sym::RowSpace span(n);
      for (const auto& v : E.basis) span.insert(v);
      bool contained = true;
      for (const auto& v : images) contained = contained && span.contains(v);
      checks.add("lightlike_image", p, gen.e_lightlike && contained, "e_rank " + std::to_string(E.rank()));
    }
  }

  if (suite == "all" || suite == "einstein") {
    if (!is_einstein(curv)) {
      checks.skip("einstein", "symbolic", "metric is not Einstein");
    } else {
      if (even)
        checks.add("einstein_obstruction_vanishes", "symbolic", O->is_zero());
      else
        checks.skip("einstein_obstruction_vanishes", "symbolic", "odd dimension");
      RationalFn J = curv.scalar() / RationalFn(Rational(2 * (static_cast<long>(n) - 1)));
      std::vector<RationalFn> t(n + 2);
      t.front() = -J / RationalFn(Rational(static_cast<long>(n)));
      t.back() = RationalFn(Rational(1));
      bool parallel = true;
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& c : conn.derivative(i, t)) parallel = parallel && c.is_zero();
      checks.add("parallel_tractor", "symbolic", parallel);
      for (std::size_t k = 0; k < points.size(); ++k) {
        std::vector<Rational> tx;
        for (const auto& c : t) tx.push_back(c.eval(points[k].assignment));
        checks.add("holonomy_annihilates_tractor", point_label(cfg.chart, points[k]),
                   hol::annihilates(holonomy_at(k).algebra, tx));
      }
    }
  }

  if (suite == "all" || suite == "identification") {
    const amb::AmbientJet jet = amb::solve_jet(curv, 2);
    for (const auto& x : points) {
      const std::string p = point_label(cfg.chart, x);
      auto rep = amb::tractor_ambient_identification_check(jet, conn, x);
      checks.add("identification_tangential", p, rep.tangential_pass);
      checks.add("identification_t", p, rep.t_pass);
      checks.add("identification_rho", p, rep.rho_pass,
                 rep.rho_ratio ? "ratio " + str(*rep.rho_ratio) + ", expected 3"
                               : (rep.rho_pass ? "" : "no uniform ratio"));
    }
  }

  res.records.push_back(Record{{"record", "verify"},
                               {"chart", cfg.chart.name},
                               {"suite", suite},
                               {"points", points.size()},
                               {"checks", res.checks},
                               {"failed", res.failed},
                               {"result", res.all_pass() ? "pass" : "fail"}});
  return res;
}

std::vector<Record> classify_e_report(const RunConfig& cfg) {
  Curvature curv(cfg.chart);
  TractorConnection conn(curv);
  const auto points = points_or_sample(cfg);
  auto fields = cfg.fields;
  std::string source = "given";
  if (fields.empty()) {
    source = "constant E basis at first point";
    auto h = hol::infinitesimal_holonomy(conn, points.front(), cfg.max_order);
    auto E = hol::holonomy_distribution(h.algebra, sym::evaluate(curv.g(), points.front().assignment));
    for (const auto& v : E.basis) {
      std::vector<RationalFn> f;
      for (const auto& c : v) f.emplace_back(c);
      fields.push_back(std::move(f));
    }
  }
  auto rep = hol::classify_E_region(conn, points, fields, cfg.max_order);
  std::vector<Record> out;
  for (const auto& e : rep.points)
    out.push_back(Record{{"record", "region_point"},
                         {"point", e.point},
                         {"e_rank", e.e_rank},
                         {"holonomy_dim", e.holonomy_dim},
                         {"field_rank", e.brackets.rank},
                         {"bracket_span", e.brackets.bracket_span},
                         {"integrable", e.brackets.integrable},
                         {"generic", e.brackets.generic}});
  const std::size_t rank = rep.points.empty() ? 0 : rep.points.front().e_rank;
  std::string cls = rank == 0           ? "trivial"
                    : rep.integrable    ? "integrable"
                    : rep.generic       ? "generic rank " + std::to_string(rank)
                                        : "neither integrable nor generic";
  out.push_back(Record{{"record", "region"},
                       {"chart", cfg.chart.name},
                       {"fields", source},
                       {"points", rep.points.size()},
                       {"max_order", cfg.max_order},
                       {"constant_rank", rep.constant_rank},
                       {"class", cls},
                       {"evidence", "sampled points"}});
  return out;
}

std::vector<EvalPoint> sample_points(const Chart& chart, std::size_t count, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<EvalPoint> out;
  for (int attempt = 0; attempt < 1000 && out.size() < count; ++attempt) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < chart.dim(); ++i) {
      const long num = static_cast<long>(rng() % 9) - 4;
      const long den = static_cast<long>(rng() % 3) + 1;
      v.push_back(sym::make_rational(num, den));
    }
    try {
      out.push_back(chart::make_point(chart, v));
    } catch (const std::exception&) {
    }
  }
  if (out.size() < count) throw chart::DegenerateMetricAtPoint("no admissible sample points for chart " + chart.name);
  return out;
}

std::vector<RationalFn> parse_field(const Chart& chart, const std::string& text) {
  sym::ParseOptions opts;
  opts.allowed_variables = chart.coords;
  std::vector<RationalFn> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    out.push_back(sym::parse_expression(text.substr(start, comma - start), opts));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != chart.dim())
    throw chart::DimensionMismatch("field has " + std::to_string(out.size()) + " components, chart dimension is " +
                                   std::to_string(chart.dim()));
  return out;
}

}  // namespace cwb::report
