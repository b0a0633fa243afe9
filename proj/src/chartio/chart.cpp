#include "cwb/chartio/chart.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace cwb::chart {
namespace {

struct Cursor {
  std::string_view line;
  int line_no;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, line_no, static_cast<int>(pos) + 1);
  }
  void skip_ws() {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= line.size();
  }
  std::string word() {
    skip_ws();
    std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (start == pos) fail("expected a word");
    return std::string(line.substr(start, pos - start));
  }
  std::string identifier() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= line.size() || !std::isalpha(static_cast<unsigned char>(line[pos]))) fail("expected identifier");
    while (pos < line.size() && (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '_')) ++pos;
    return std::string(line.substr(start, pos - start));
  }
  long integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
    if (start == pos || pos - start > 6) {
      pos = start;
      fail("expected integer");
    }
    return std::stol(std::string(line.substr(start, pos - start)));
  }
  void expect(char c) {
    skip_ws();
    if (pos >= line.size() || line[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
};

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

Chart make_chart(std::string name, Signature sig, std::vector<std::string> coords, FnMatrix metric) {
  const std::size_t n = coords.size();
  if (n < 3) throw DimensionMismatch("dimension must be at least 3");
  if (sig.p < 0 || sig.q < 0 || static_cast<std::size_t>(sig.p + sig.q) != n)
    throw DimensionMismatch("signature does not sum to the dimension");
  if (metric.rows() != n || metric.cols() != n) throw DimensionMismatch("metric shape does not match coordinates");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (metric(i, j) != metric(j, i)) throw SymmetryConflict("metric is not symmetric");
  Chart c;
  c.name = std::move(name);
  c.signature = sig;
  c.coords = std::move(coords);
  for (const auto& s : c.coords) c.vars.push_back(sym::Variables::intern(s));
  c.metric = std::move(metric);
  return c;
}

Chart parse_chart(std::string_view text) {
  std::optional<std::string> name;
  std::optional<long> dim;
  std::optional<Signature> sig;
  std::optional<std::vector<std::string>> coords;
  bool in_metric = false;
  struct Entry {
    std::size_t i, j;
    RationalFn value;
    int line;
  };
  std::vector<Entry> entries;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    Cursor cur{strip_comment(text.substr(start, end - start)), line_no};
    start = end + 1;
    if (cur.at_end()) continue;

    if (in_metric && (cur.skip_ws(), cur.line[cur.pos] == 'g') &&
        cur.pos + 1 < cur.line.size() && (cur.line[cur.pos + 1] == '[' || std::isspace(static_cast<unsigned char>(cur.line[cur.pos + 1])))) {
      ++cur.pos;
      cur.expect('[');
      long i = cur.integer();
      cur.expect(',');
      long j = cur.integer();
      cur.expect(']');
      cur.expect('=');
      if (cur.at_end()) cur.fail("expected expression");
      if (i < 1 || j < 1 || i > *dim || j > *dim)
        throw DimensionMismatch("metric index g[" + std::to_string(i) + "," + std::to_string(j) + "] out of range at line " +
                                std::to_string(line_no));
      sym::ParseOptions opts;
      opts.allowed_variables = *coords;
      opts.line = line_no;
      opts.column_offset = static_cast<int>(cur.pos);
      RationalFn value = sym::parse_expression(cur.line.substr(cur.pos), opts);
      entries.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), std::move(value), line_no});
      continue;
    }

    std::size_t kw_pos = (cur.skip_ws(), cur.pos);
    std::string kw = cur.word();
    if (kw == "chart") {
      if (name) cur.fail("duplicate chart declaration");
      name = cur.word();
    } else if (kw == "dim") {
      if (dim) cur.fail("duplicate dim declaration");
      dim = cur.integer();
    } else if (kw == "signature") {
      if (sig) cur.fail("duplicate signature declaration");
      cur.expect('(');
      long p = cur.integer();
      cur.expect(',');
      long q = cur.integer();
      cur.expect(')');
      sig = Signature{static_cast<int>(p), static_cast<int>(q)};
    } else if (kw == "coords") {
      if (coords) cur.fail("duplicate coords declaration");
      std::vector<std::string> cs;
      while (!cur.at_end()) {
        std::size_t at = cur.pos;
        std::string c = cur.word();
        if (!is_identifier(c)) {
          cur.pos = at;
          cur.fail("invalid coordinate name '" + c + "'");
        }
        if (std::find(cs.begin(), cs.end(), c) != cs.end()) {
          cur.pos = at;
          cur.fail("duplicate coordinate '" + c + "'");
        }
        cs.push_back(c);
      }
      coords = std::move(cs);
    } else if (kw == "metric") {
      if (!dim || !coords) {
        cur.pos = kw_pos;
        cur.fail("metric block requires dim and coords first");
      }
      if (static_cast<std::size_t>(*dim) != coords->size())
        throw DimensionMismatch("dim " + std::to_string(*dim) + " does not match " + std::to_string(coords->size()) +
                                " coordinates");
      in_metric = true;
    } else {
      cur.pos = kw_pos;
      cur.fail("unknown directive '" + kw + "'");
    }
    if (!cur.at_end()) cur.fail("unexpected trailing input");
  }

  if (!name || !dim || !sig || !coords || !in_metric) {
    throw SyntaxError("incomplete chart: requires chart, dim, signature, coords and metric", line_no, 1);
  }
  const auto n = static_cast<std::size_t>(*dim);
  if (n != coords->size()) throw DimensionMismatch("dim does not match coordinate count");
  FnMatrix g(n, n);
  std::vector<std::vector<int>> set_at(n, std::vector<int>(n, 0));
  for (const auto& e : entries) {
    for (auto [a, b] : {std::pair{e.i, e.j}, std::pair{e.j, e.i}}) {
      if (set_at[a][b] && g(a, b) != e.value) {
        throw SymmetryConflict("conflicting values for g[" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) +
                               "] at line " + std::to_string(e.line));
      }
      g(a, b) = e.value;
      set_at[a][b] = e.line;
    }
  }
  return make_chart(*name, *sig, *coords, std::move(g));
}

std::string print_chart(const Chart& chart) {
  std::ostringstream os;
  os << "chart " << chart.name << "\n";
  os << "dim " << chart.dim() << "\n";
  os << "signature (" << chart.signature.p << "," << chart.signature.q << ")\n";
  os << "coords";
  for (const auto& c : chart.coords) os << ' ' << c;
  os << "\nmetric\n";
  for (std::size_t i = 0; i < chart.dim(); ++i)
    for (std::size_t j = i; j < chart.dim(); ++j)
      if (!chart.metric(i, j).is_zero())
        os << "g[" << i + 1 << "," << j + 1 << "] = " << chart.metric(i, j).to_string() << "\n";
  return os.str();
}

EvalPoint make_point(const Chart& chart, const std::vector<Rational>& values) {
  if (values.size() != chart.dim()) throw MissingCoordinate("point does not assign every coordinate");
  EvalPoint x;
  x.values = values;
  for (std::size_t i = 0; i < chart.dim(); ++i) x.assignment[chart.vars[i]] = values[i];
  sym::QMatrix gx;
  try {
    gx = sym::evaluate(chart.metric, x.assignment);
  } catch (const sym::PoleAtPoint&) {
    throw DegenerateMetricAtPoint("metric has a pole at " + print_point(chart, x));
  }
  auto in = sym::inertia(gx);
  if (in.zero > 0) throw DegenerateMetricAtPoint("metric is degenerate at " + print_point(chart, x));
  if (static_cast<int>(in.negative) != chart.signature.p || static_cast<int>(in.positive) != chart.signature.q) {
    throw SignatureMismatch("metric inertia (" + std::to_string(in.negative) + "," + std::to_string(in.positive) +
                            ") differs from declared signature at " + print_point(chart, x));
  }
  return x;
}

EvalPoint parse_point(std::string_view text, const Chart& chart) {
  std::vector<std::optional<Rational>> vals(chart.dim());
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    Cursor cur{strip_comment(text.substr(start, end - start)), line_no};
    start = end + 1;
    while (!cur.at_end()) {
      std::size_t at = cur.pos;
      std::string name = cur.identifier();
      auto it = std::find(chart.coords.begin(), chart.coords.end(), name);
      if (it == chart.coords.end()) {
        cur.pos = at;
        cur.fail("unknown coordinate '" + name + "'");
      }
      cur.expect('=');
      cur.skip_ws();
      std::size_t vstart = cur.pos;
      std::size_t vend = vstart;
      if (vend < cur.line.size() && (cur.line[vend] == '-' || cur.line[vend] == '+')) ++vend;
      while (vend < cur.line.size() &&
             (std::isdigit(static_cast<unsigned char>(cur.line[vend])) || cur.line[vend] == '/'))
        ++vend;
      auto idx = static_cast<std::size_t>(it - chart.coords.begin());
      if (vals[idx]) {
        cur.pos = at;
        cur.fail("coordinate '" + name + "' assigned twice");
      }
      vals[idx] = sym::parse_rational(cur.line.substr(vstart, vend - vstart), line_no, static_cast<int>(vstart));
      cur.pos = vend;
    }
  }
  std::vector<Rational> values;
  for (std::size_t i = 0; i < chart.dim(); ++i) {
    if (!vals[i]) throw MissingCoordinate("coordinate '" + chart.coords[i] + "' is not assigned");
    values.push_back(*vals[i]);
  }
  return make_point(chart, values);
}

std::string print_point(const Chart& chart, const EvalPoint& x) {
  std::string s;
  for (std::size_t i = 0; i < chart.dim() && i < x.values.size(); ++i) {
    if (!s.empty()) s += ' ';
    s += chart.coords[i] + "=" + x.values[i].get_str();
  }
  return s;
}

DistributionData bryant_distribution(const std::string& f_expression) {
  DistributionData d;
  d.name = "bryant_theta";
  d.coords = {"x1", "x2", "x3", "y1", "y2", "y3"};
  for (const auto& c : d.coords) d.vars.push_back(sym::Variables::intern(c));
  sym::ParseOptions opts;
  opts.allowed_variables = d.coords;
  d.f = sym::parse_expression(f_expression, opts);
  auto x = [&](int i) { return RationalFn::var(d.vars[static_cast<std::size_t>(i - 1)]); };
  auto form = [&](std::initializer_list<std::pair<int, RationalFn>> parts) {
    std::vector<RationalFn> v(6);
    for (const auto& [k, c] : parts) v[static_cast<std::size_t>(k)] = c;
    return v;
  };
  // coordinate slots: x1 x2 x3 y1 y2 y3 -> 0..5
  d.one_forms = {form({{3, RationalFn(1)}, {2, x(2)}}), form({{4, RationalFn(1)}, {0, d.f}}),
                 form({{5, RationalFn(1)}, {1, x(1)}})};
  d.spanning_fields = {form({{0, RationalFn(1)}, {4, -d.f}}), form({{1, RationalFn(1)}, {5, -x(1)}}),
                       form({{2, RationalFn(1)}, {3, -x(2)}})};
  return d;
}

}  // namespace cwb::chart
