#include "cwb/symexpr/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace cwb::sym {

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(Var v, std::uint32_t exp) {
  Monomial m;
  if (exp == 0) return m;
  m.f_.push_back({v.id, exp});
  m.deg_ = exp;
  return m;
}

std::uint32_t Monomial::exponent(Var v) const {
  for (const auto& f : f_) {
    if (f.var == v.id) return f.exp;
    if (f.var > v.id) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  if (o.f_.empty()) return *this;
  if (f_.empty()) return o;
  Monomial r;
  r.f_.reserve(f_.size() + o.f_.size());
  std::size_t i = 0, j = 0;
  while (i < f_.size() && j < o.f_.size()) {
    if (f_[i].var == o.f_[j].var) {
      r.f_.push_back({f_[i].var, f_[i].exp + o.f_[j].exp});
      ++i, ++j;
    } else if (f_[i].var < o.f_[j].var) {
      r.f_.push_back(f_[i++]);
    } else {
      r.f_.push_back(o.f_[j++]);
    }
  }
  for (; i < f_.size(); ++i) r.f_.push_back(f_[i]);
  for (; j < o.f_.size(); ++j) r.f_.push_back(o.f_[j]);
  r.deg_ = deg_ + o.deg_;
  return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
  if (o.deg_ > deg_) return std::nullopt;
  Monomial r;
  std::size_t j = 0;
  for (const auto& f : f_) {
    if (j < o.f_.size() && o.f_[j].var < f.var) return std::nullopt;
    if (j < o.f_.size() && o.f_[j].var == f.var) {
      if (o.f_[j].exp > f.exp) return std::nullopt;
      if (f.exp > o.f_[j].exp) r.f_.push_back({f.var, f.exp - o.f_[j].exp});
      ++j;
    } else {
      r.f_.push_back(f);
    }
  }
  if (j != o.f_.size()) return std::nullopt;
  r.deg_ = deg_ - o.deg_;
  return r;
}

Monomial Monomial::without(Var v) const { return with_exponent(v, 0); }

Monomial Monomial::with_exponent(Var v, std::uint32_t e) const {
  Monomial r;
  bool placed = false;
  for (const auto& f : f_) {
    if (!placed && f.var >= v.id) {
      if (e > 0) r.f_.push_back({v.id, e});
      placed = true;
      if (f.var == v.id) continue;
    }
    r.f_.push_back(f);
  }
  if (!placed && e > 0) r.f_.push_back({v.id, e});
  r.deg_ = 0;
  for (const auto& f : r.f_) r.deg_ += f.exp;
  return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < a.f_.size() && j < b.f_.size()) {
    if (a.f_[i].var == b.f_[j].var) {
      auto e = std::min(a.f_[i].exp, b.f_[j].exp);
      r.f_.push_back({a.f_[i].var, e});
      r.deg_ += e;
      ++i, ++j;
    } else if (a.f_[i].var < b.f_[j].var) {
      ++i;
    } else {
      ++j;
    }
  }
  return r;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
  if (a.deg_ != b.deg_) return a.deg_ < b.deg_ ? -1 : 1;
  std::size_t i = 0, j = 0;
  while (i < a.f_.size() && j < b.f_.size()) {
    const auto& fa = a.f_[i];
    const auto& fb = b.f_[j];
    if (fa.var == fb.var) {
      if (fa.exp != fb.exp) return fa.exp < fb.exp ? -1 : 1;
      ++i, ++j;
    } else {
      return fa.var < fb.var ? 1 : -1;
    }
  }
  if (i < a.f_.size()) return 1;
  if (j < b.f_.size()) return -1;
  return 0;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& f : f_) {
    h ^= (static_cast<std::size_t>(f.var) << 20 | f.exp) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string Monomial::to_string() const {
  std::string s;
  for (const auto& f : f_) {
    if (!s.empty()) s += '*';
    s += Variables::name(Var{f.var});
    if (f.exp > 1) s += '^' + std::to_string(f.exp);
  }
  return s.empty() ? "1" : s;
}

// -------------------------------------------------------------------- Poly

namespace {

bool greater_mono(const Poly::Term& a, const Poly::Term& b) {
  return Monomial::compare(a.mono, b.mono) > 0;
}

Rational rational_pow(const Rational& base, unsigned e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;
}

}  // namespace

Poly::Poly(const Rational& c) {
  if (sgn(c) != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::var(Var v) { return monomial(Monomial::of(v), Rational(1)); }

Poly Poly::monomial(const Monomial& m, const Rational& c) {
  Poly p;
  if (sgn(c) != 0) p.terms_.push_back({m, c});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), greater_mono);
  Poly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      if (!p.terms_.empty() && sgn(p.terms_.back().coef) == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && sgn(p.terms_.back().coef) == 0) p.terms_.pop_back();
  return p;
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_[0].coef;
}

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

std::uint32_t Poly::degree(Var v) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
  return d;
}

std::vector<Var> Poly::variables() const {
  std::vector<std::uint32_t> ids;
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors()) ids.push_back(f.var);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Var> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(Var{id});
  return out;
}

bool Poly::contains(Var v) const {
  for (const auto& t : terms_)
    if (t.mono.exponent(v) > 0) return true;
  return false;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  Poly r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    int c = Monomial::compare(terms_[i].mono, o.terms_[j].mono);
    if (c > 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Rational s = terms_[i].coef + o.terms_[j].coef;
      if (sgn(s) != 0) r.terms_.push_back({terms_[i].mono, std::move(s)});
      ++i, ++j;
    }
  }
  for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
  for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::times_monomial(const Monomial& m, const Rational& c) const {
  if (sgn(c) == 0) return {};
  Poly r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
  return r;
}

Poly Poly::scaled(const Rational& c) const { return times_monomial(Monomial{}, c); }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return {};
  if (o.terms_.size() == 1) return times_monomial(o.terms_[0].mono, o.terms_[0].coef);
  if (terms_.size() == 1) return o.times_monomial(terms_[0].mono, terms_[0].coef);
  std::vector<Term> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) prod.push_back({a.mono * b.mono, a.coef * b.coef});
  return from_terms(std::move(prod));
}

Poly Poly::pow(unsigned e) const {
  Poly result(1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

Poly Poly::partial(Var v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    auto e = t.mono.exponent(v);
    if (e == 0) continue;
    out.push_back({t.mono.with_exponent(v, e - 1), t.coef * e});
  }
  return from_terms(std::move(out));
}

Poly Poly::diff(Var v) const {
  Poly result = partial(v);
  for (Var w : variables()) {
    if (w == v) continue;
    auto rule = Variables::derivative_of(w, v);
    if (rule.kind == Variables::DerivKind::Constant) continue;
    if (rule.kind == Variables::DerivKind::Opaque) {
      throw DependencyError("derivative of " + Variables::name(w) + " with respect to " + Variables::name(v) +
                            " is not available");
    }
    result += partial(w) * Poly::var(rule.derivative);
  }
  return result;
}

Rational Poly::eval(const Assignment& at) const {
  Rational sum(0);
  for (const auto& t : terms_) {
    Rational term = t.coef;
    for (const auto& f : t.mono.factors()) {
      auto it = at.find(Var{f.var});
      if (it == at.end()) throw UnknownVariable("no value for variable " + Variables::name(Var{f.var}));
      term *= rational_pow(it->second, f.exp);
    }
    sum += term;
  }
  return sum;
}

Poly Poly::partial_eval(const Assignment& at) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term nt{Monomial{}, t.coef};
    for (const auto& f : t.mono.factors()) {
      auto it = at.find(Var{f.var});
      if (it == at.end()) {
        nt.mono.f_.push_back(f);
        nt.mono.deg_ += f.exp;
      } else {
        nt.coef *= rational_pow(it->second, f.exp);
      }
    }
    if (sgn(nt.coef) != 0) out.push_back(std::move(nt));
  }
  return from_terms(std::move(out));
}

Poly Poly::substitute(const std::map<Var, Poly>& subs) const {
  Poly result;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Poly> powers;
  for (const auto& t : terms_) {
    Term rest{Monomial{}, t.coef};
    Poly factor(1);
    for (const auto& f : t.mono.factors()) {
      auto it = subs.find(Var{f.var});
      if (it == subs.end()) {
        rest.mono.f_.push_back(f);
        rest.mono.deg_ += f.exp;
        continue;
      }
      auto key = std::make_pair(f.var, f.exp);
      auto pit = powers.find(key);
      if (pit == powers.end()) pit = powers.emplace(key, it->second.pow(f.exp)).first;
      factor *= pit->second;
    }
    result += factor.times_monomial(rest.mono, rest.coef);
  }
  return result;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  if (is_zero()) return Poly{};
  if (d.terms_.size() == 1) {
    Poly q;
    q.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      auto m = t.mono.divide(d.terms_[0].mono);
      if (!m) return std::nullopt;
      q.terms_.push_back({*m, t.coef / d.terms_[0].coef});
    }
    return q;
  }
  const Term& ld = d.terms_.front();
  Poly r = *this;
  std::vector<Term> q;
  while (!r.is_zero()) {
    const Term& lr = r.terms_.front();
    if (lr.mono.degree() < ld.mono.degree()) return std::nullopt;
    auto m = lr.mono.divide(ld.mono);
    if (!m) return std::nullopt;
    Rational c = lr.coef / ld.coef;
    r -= d.times_monomial(*m, c);
    q.push_back({std::move(*m), std::move(c)});
  }
  Poly out;
  out.terms_ = std::move(q);  // produced in decreasing order
  return out;
}

std::vector<std::pair<Monomial, Poly>> Poly::collect(const std::vector<Var>& vars) const {
  std::vector<std::uint32_t> ids;
  for (Var v : vars) ids.push_back(v.id);
  std::sort(ids.begin(), ids.end());
  std::vector<std::pair<Monomial, std::vector<Term>>> groups;
  auto cmp = [](const auto& a, const Monomial& m) { return Monomial::compare(a.first, m) > 0; };
  for (const auto& t : terms_) {
    Monomial in, out;
    for (const auto& f : t.mono.factors()) {
      Monomial& tgt = std::binary_search(ids.begin(), ids.end(), f.var) ? in : out;
      tgt.f_.push_back(f);
      tgt.deg_ += f.exp;
    }
    auto it = std::lower_bound(groups.begin(), groups.end(), in, cmp);
    if (it == groups.end() || !(it->first == in)) it = groups.insert(it, {in, {}});
    it->second.push_back({std::move(out), t.coef});
  }
  std::vector<std::pair<Monomial, Poly>> result;
  result.reserve(groups.size());
  for (auto& g : groups) result.emplace_back(g.first, from_terms(std::move(g.second)));
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
  }
  return true;
}

std::size_t Poly::hash() const {
  std::size_t h = terms_.size();
  for (const auto& t : terms_) {
    h ^= t.mono.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= mpz_get_ui(t.coef.get_num_mpz_t()) + (h << 6) + (h >> 2);
  }
  return h;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    c = abs(c);
    first = false;
    if (t.mono.is_one()) {
      os << c.get_str();
    } else if (c == 1) {
      os << t.mono.to_string();
    } else {
      os << c.get_str() << '*' << t.mono.to_string();
    }
  }
  return os.str();
}

}  // namespace cwb::sym
