#include "cwb/symexpr/gcd.hpp"

#include <algorithm>
#include <mutex>

// Brown's dense modular gcd: integer inputs are reduced modulo word-size
// primes, the modular gcd is computed by evaluation/interpolation on the
// trailing variable, and images are combined by Chinese remaindering until
// the candidate divides both inputs.

namespace cwb::sym {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Key = unsigned __int128;

constexpr int kMaxVars = 16;
constexpr unsigned kMaxDeg = 255;

int shift_of(int i) { return 8 * (kMaxVars - 1 - i); }
unsigned deg_of(Key k, int i) { return static_cast<unsigned>(k >> shift_of(i)) & 0xFFu; }
Key mask_out(Key k, int i) { return k & ~(Key(0xFF) << shift_of(i)); }
Key with_deg(Key k, int i, unsigned e) { return mask_out(k, i) | (Key(e) << shift_of(i)); }

bool key_divides(Key d, Key m, int nv) {
  for (int i = 0; i < nv; ++i)
    if (deg_of(d, i) > deg_of(m, i)) return false;
  return true;
}

struct Mod {
  u64 p;
  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= p ? s - p : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
  u64 neg(u64 a) const { return a == 0 ? 0 : p - a; }
};

// ------------------------------------------------------ dense univariate Zp

using UPoly = std::vector<u64>;

void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

UPoly u_mul(const UPoly& a, const UPoly& b, const Mod& M) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = M.add(r[i + j], M.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

UPoly u_scale(UPoly a, u64 c, const Mod& M) {
  for (auto& x : a) x = M.mul(x, c);
  trim(a);
  return a;
}

UPoly u_add(const UPoly& a, const UPoly& b, const Mod& M) {
  UPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = M.add(r[i], b[i]);
  trim(r);
  return r;
}

u64 u_eval(const UPoly& a, u64 x, const Mod& M) {
  u64 r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = M.add(M.mul(r, x), a[i]);
  return r;
}

// Returns remainder; quotient written to *q when given.
UPoly u_divmod(UPoly a, const UPoly& b, const Mod& M, UPoly* q = nullptr) {
  u64 inv = M.inv(b.back());
  if (q) q->assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t shift = a.size() - b.size();
    u64 c = M.mul(a.back(), inv);
    if (q) (*q)[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = M.sub(a[shift + j], M.mul(c, b[j]));
    trim(a);
  }
  return a;
}

UPoly u_monic(UPoly a, const Mod& M) {
  if (a.empty()) return a;
  u64 inv = M.inv(a.back());
  return u_scale(std::move(a), inv, M);
}

UPoly u_gcd(UPoly a, UPoly b, const Mod& M) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = u_divmod(a, b, M);
    a = std::move(b);
    b = std::move(r);
  }
  return u_monic(std::move(a), M);
}

UPoly u_exact_div(const UPoly& a, const UPoly& b, const Mod& M) {
  UPoly q;
  u_divmod(a, b, M, &q);
  trim(q);
  return q;
}

// ------------------------------------------------- sparse multivariate Zp

using ZpTerm = std::pair<Key, u64>;
using ZpPoly = std::vector<ZpTerm>;  // strictly decreasing keys, nonzero coefficients

void zp_normalize(ZpPoly& t, const Mod& M) {
  std::sort(t.begin(), t.end(), [](const ZpTerm& a, const ZpTerm& b) { return a.first > b.first; });
  ZpPoly out;
  out.reserve(t.size());
  for (auto& x : t) {
    if (!out.empty() && out.back().first == x.first) {
      out.back().second = M.add(out.back().second, x.second);
    } else {
      if (!out.empty() && out.back().second == 0) out.pop_back();
      out.push_back(x);
    }
  }
  if (!out.empty() && out.back().second == 0) out.pop_back();
  t = std::move(out);
}

ZpPoly zp_scale(ZpPoly a, u64 c, const Mod& M) {
  for (auto& t : a) t.second = M.mul(t.second, c);
  return a;
}

ZpPoly zp_mul(const ZpPoly& a, const ZpPoly& b, const Mod& M) {
  ZpPoly r;
  r.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) r.push_back({x.first + y.first, M.mul(x.second, y.second)});
  zp_normalize(r, M);
  return r;
}

ZpPoly zp_sub_scaled_shift(const ZpPoly& r, const ZpPoly& d, Key shift, u64 c, const Mod& M) {
  ZpPoly out;
  out.reserve(r.size() + d.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < d.size()) {
    if (j == d.size() || (i < r.size() && r[i].first > d[j].first + shift)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || r[i].first < d[j].first + shift) {
      out.push_back({d[j].first + shift, M.neg(M.mul(c, d[j].second))});
      ++j;
    } else {
      u64 v = M.sub(r[i].second, M.mul(c, d[j].second));
      if (v) out.push_back({r[i].first, v});
      ++i, ++j;
    }
  }
  return out;
}

bool zp_divides(const ZpPoly& a, const ZpPoly& d, int nv, const Mod& M) {
  u64 inv = M.inv(d.front().second);
  ZpPoly r = a;
  while (!r.empty()) {
    if (!key_divides(d.front().first, r.front().first, nv)) return false;
    Key shift = r.front().first - d.front().first;
    u64 c = M.mul(r.front().second, inv);
    r = zp_sub_scaled_shift(r, d, shift, c, M);
  }
  return true;
}

// Substitutes x_v = alpha where v is the least significant active variable.
ZpPoly zp_eval_last(const ZpPoly& a, int v, u64 alpha, const Mod& M) {
  ZpPoly out;
  for (const auto& t : a) {
    Key k = mask_out(t.first, v);
    u64 c = M.mul(t.second, M.pow(alpha, deg_of(t.first, v)));
    if (!out.empty() && out.back().first == k) {
      out.back().second = M.add(out.back().second, c);
    } else {
      if (!out.empty() && out.back().second == 0) out.pop_back();
      out.push_back({k, c});
    }
  }
  if (!out.empty() && out.back().second == 0) out.pop_back();
  return out;
}

using Groups = std::vector<std::pair<Key, UPoly>>;  // decreasing masked keys

Groups split_last(const ZpPoly& a, int v) {
  Groups g;
  for (const auto& t : a) {
    Key k = mask_out(t.first, v);
    unsigned e = deg_of(t.first, v);
    if (g.empty() || g.back().first != k) g.push_back({k, {}});
    auto& u = g.back().second;
    if (u.size() <= e) u.resize(e + 1, 0);
    u[e] = t.second;
  }
  return g;
}

ZpPoly join_last(const Groups& g, int v) {
  ZpPoly out;
  for (const auto& [k, u] : g)
    for (std::size_t e = u.size(); e-- > 0;)
      if (u[e]) out.push_back({with_deg(k, v, static_cast<unsigned>(e)), u[e]});
  return out;
}

ZpPoly zp_monic(ZpPoly a, const Mod& M) {
  if (a.empty()) return a;
  u64 inv = M.inv(a.front().second);
  return zp_scale(std::move(a), inv, M);
}

UPoly groups_content(const Groups& g, const Mod& M) {
  UPoly c;
  for (const auto& [k, u] : g) {
    c = u_gcd(c, u, M);
    if (c.size() == 1) break;
  }
  return c;
}

ZpPoly pgcd(const ZpPoly& a, const ZpPoly& b, int nv, const Mod& M) {
  if (nv == 1) {
    UPoly ua, ub;
    for (const auto& t : a) {
      unsigned e = deg_of(t.first, 0);
      if (ua.size() <= e) ua.resize(e + 1, 0);
      ua[e] = t.second;
    }
    for (const auto& t : b) {
      unsigned e = deg_of(t.first, 0);
      if (ub.size() <= e) ub.resize(e + 1, 0);
      ub[e] = t.second;
    }
    UPoly g = u_gcd(ua, ub, M);
    ZpPoly out;
    for (std::size_t e = g.size(); e-- > 0;)
      if (g[e]) out.push_back({with_deg(0, 0, static_cast<unsigned>(e)), g[e]});
    return out;
  }
  const int lv = nv - 1;
  Groups A = split_last(a, lv), B = split_last(b, lv);
  UPoly ca = groups_content(A, M), cb = groups_content(B, M);
  UPoly c = u_gcd(ca, cb, M);
  for (auto& [k, u] : A) u = u_exact_div(u, ca, M);
  for (auto& [k, u] : B) u = u_exact_div(u, cb, M);
  auto content_poly = [&]() {
    Groups cg{{Key(0), c}};
    return zp_monic(join_last(cg, lv), M);
  };
  if (A.front().first == 0 || B.front().first == 0) return content_poly();

  ZpPoly ap = join_last(A, lv), bp = join_last(B, lv);
  const UPoly& lca = A.front().second;
  const UPoly& lcb = B.front().second;
  UPoly g = u_gcd(lca, lcb, M);
  std::size_t dega = 0, degb = 0;
  for (const auto& [k, u] : A) dega = std::max(dega, u.size() - 1);
  for (const auto& [k, u] : B) degb = std::max(degb, u.size() - 1);
  const std::size_t bound = (g.size() - 1) + std::min(dega, degb);

  Groups H;
  UPoly q{1};
  Key lmH = 0;
  bool have = false;
  for (u64 alpha = 1;; ++alpha) {
    if (u_eval(lca, alpha, M) == 0 || u_eval(lcb, alpha, M) == 0) continue;
    u64 galpha = u_eval(g, alpha, M);
    ZpPoly ca_img = pgcd(zp_eval_last(ap, lv, alpha, M), zp_eval_last(bp, lv, alpha, M), lv, M);
    if (ca_img.front().first == 0) return content_poly();
    ca_img = zp_scale(std::move(ca_img), galpha, M);
    Key lm = ca_img.front().first;
    bool changed = true;
    if (!have || lm < lmH) {
      H.clear();
      for (const auto& [k, v] : ca_img) H.push_back({k, UPoly{v}});
      q = UPoly{M.neg(alpha % M.p), 1};
      lmH = lm;
      have = true;
    } else if (lm > lmH) {
      continue;
    } else {
      u64 qinv = M.inv(u_eval(q, alpha, M));
      Groups merged;
      std::size_t i = 0, j = 0;
      changed = false;
      while (i < H.size() || j < ca_img.size()) {
        Key k;
        UPoly hk;
        u64 target = 0;
        if (j == ca_img.size() || (i < H.size() && H[i].first > ca_img[j].first)) {
          k = H[i].first;
          hk = H[i++].second;
        } else if (i == H.size() || H[i].first < ca_img[j].first) {
          k = ca_img[j].first;
          target = ca_img[j++].second;
        } else {
          k = H[i].first;
          hk = H[i++].second;
          target = ca_img[j++].second;
        }
        u64 diff = M.sub(target, u_eval(hk, alpha, M));
        if (diff) {
          changed = true;
          hk = u_add(hk, u_scale(q, M.mul(diff, qinv), M), M);
        }
        if (!hk.empty()) merged.push_back({k, std::move(hk)});
      }
      H = std::move(merged);
      q = u_mul(q, UPoly{M.neg(alpha % M.p), 1}, M);
    }
    if (!changed || q.size() - 1 > bound) {
      UPoly hc = groups_content(H, M);
      Groups P = H;
      for (auto& [k, u] : P) u = u_exact_div(u, hc, M);
      ZpPoly cand = zp_monic(join_last(P, lv), M);
      if (zp_divides(ap, cand, nv, M) && zp_divides(bp, cand, nv, M)) {
        Groups cg{{Key(0), c}};
        return zp_monic(zp_mul(cand, join_last(cg, lv), M), M);
      }
    }
  }
}

// ------------------------------------------------------------- integers

using ZTerm = std::pair<Key, Integer>;
using ZPoly = std::vector<ZTerm>;

static_assert(sizeof(unsigned long) == sizeof(u64));

u64 mod_of(const Integer& z, u64 p) { return mpz_fdiv_ui(z.get_mpz_t(), p); }

Integer to_integer(u64 x) { return Integer(static_cast<unsigned long>(x)); }

u64 prime_at(std::size_t i) {
  static std::mutex mu;
  static std::vector<u64> primes;
  std::lock_guard lock(mu);
  while (primes.size() <= i) {
    Integer p = primes.empty() ? Integer(1) << 62 : to_integer(primes.back());
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    primes.push_back(p.get_ui());
  }
  return primes[i];
}

ZpPoly reduce(const ZPoly& a, const Mod& M) {
  ZpPoly out;
  out.reserve(a.size());
  for (const auto& [k, c] : a) {
    u64 r = mod_of(c, M.p);
    if (r) out.push_back({k, r});
  }
  return out;
}

// Maps rational polynomial to a primitive integer polynomial on local keys.
ZPoly to_zpoly(const Poly& p, const std::vector<std::uint32_t>& vars) {
  Integer lcm_den(1);
  for (const auto& t : p.terms()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), t.coef.get_den_mpz_t());
  ZPoly out;
  Integer g(0);
  for (const auto& t : p.terms()) {
    Integer c = t.coef.get_num() * (lcm_den / t.coef.get_den());
    Key k = 0;
    for (const auto& f : t.mono.factors()) {
      auto it = std::lower_bound(vars.begin(), vars.end(), f.var);
      if (f.exp > kMaxDeg) throw std::length_error("gcd: degree exceeds packed limit");
      k = with_deg(k, static_cast<int>(it - vars.begin()), f.exp);
    }
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    out.push_back({k, std::move(c)});
  }
  for (auto& t : out) t.second /= g;
  std::sort(out.begin(), out.end(), [](const ZTerm& a, const ZTerm& b) { return a.first > b.first; });
  return out;
}

Poly from_zpoly(const ZPoly& a, const std::vector<std::uint32_t>& vars) {
  std::vector<Poly::Term> terms;
  for (const auto& [k, c] : a) {
    Monomial m;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      unsigned e = deg_of(k, static_cast<int>(i));
      if (e) m = m * Monomial::of(Var{vars[i]}, e);
    }
    terms.push_back({m, Rational(c)});
  }
  return Poly::from_terms(std::move(terms));
}

Poly modular_gcd(const Poly& a, const Poly& b, const std::vector<std::uint32_t>& vars) {
  const int nv = static_cast<int>(vars.size());
  ZPoly A = to_zpoly(a, vars), B = to_zpoly(b, vars);
  Integer gamma;
  mpz_gcd(gamma.get_mpz_t(), A.front().second.get_mpz_t(), B.front().second.get_mpz_t());

  ZPoly H;
  Integer modulus;
  Key lmH = 0;
  bool have = false;
  for (std::size_t pi = 0;; ++pi) {
    Mod M{prime_at(pi)};
    if (mod_of(A.front().second, M.p) == 0 || mod_of(B.front().second, M.p) == 0) continue;
    ZpPoly img = pgcd(reduce(A, M), reduce(B, M), nv, M);
    if (img.front().first == 0) return Poly(1);
    img = zp_scale(std::move(img), mod_of(gamma, M.p), M);
    Key lm = img.front().first;
    Integer P = to_integer(M.p);
    bool changed = true;
    if (!have || lm < lmH) {
      H.clear();
      for (const auto& [k, v] : img) {
        Integer c = to_integer(v);
        if (2 * c > P) c -= P;
        H.push_back({k, c});
      }
      modulus = P;
      lmH = lm;
      have = true;
    } else if (lm > lmH) {
      continue;
    } else {
      Integer minv;
      mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), P.get_mpz_t());
      Integer newmod = modulus * P;
      ZPoly merged;
      std::size_t i = 0, j = 0;
      changed = false;
      while (i < H.size() || j < img.size()) {
        Key k;
        Integer h(0);
        u64 r = 0;
        if (j == img.size() || (i < H.size() && H[i].first > img[j].first)) {
          k = H[i].first;
          h = H[i++].second;
        } else if (i == H.size() || H[i].first < img[j].first) {
          k = img[j].first;
          r = img[j++].second;
        } else {
          k = H[i].first;
          h = H[i++].second;
          r = img[j++].second;
        }
        Integer delta = to_integer(r) - h;
        mpz_fdiv_r(delta.get_mpz_t(), delta.get_mpz_t(), P.get_mpz_t());
        if (delta != 0) {
          changed = true;
          Integer t = delta * minv;
          mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), P.get_mpz_t());
          h += modulus * t;
          mpz_fdiv_r(h.get_mpz_t(), h.get_mpz_t(), newmod.get_mpz_t());
          if (2 * h > newmod) h -= newmod;
        }
        if (h != 0) merged.push_back({k, h});
      }
      H = std::move(merged);
      modulus = newmod;
    }
    if (!changed) {
      Poly cand = monic(from_zpoly(H, vars));
      if (a.divide_exact(cand) && b.divide_exact(cand)) return cand;
    }
  }
}

Monomial monomial_content(const Poly& p) {
  Monomial g = p.terms().front().mono;
  for (const auto& t : p.terms()) {
    g = Monomial::gcd(g, t.mono);
    if (g.is_one()) break;
  }
  return g;
}

}  // namespace

Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  const Rational& lc = p.leading().coef;
  if (lc == 1) return p;
  return p.scaled(1 / lc);
}

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a == b) return monic(a);
  if (a.size() == 1 || b.size() == 1) {
    Monomial g = Monomial::gcd(monomial_content(a), monomial_content(b));
    return Poly::monomial(g, Rational(1));
  }

  auto va = a.variables();
  auto vb = b.variables();
  std::vector<Var> only_a, only_b, shared;
  std::set_difference(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(only_a));
  std::set_difference(vb.begin(), vb.end(), va.begin(), va.end(), std::back_inserter(only_b));
  if (!only_a.empty() || !only_b.empty()) {
    Poly g = only_a.empty() ? a : b;
    const Poly& split = only_a.empty() ? b : a;
    const auto& split_vars = only_a.empty() ? only_b : only_a;
    for (const auto& [m, coef] : split.collect(split_vars)) {
      g = gcd(g, coef);
      if (g.is_constant()) return Poly(1);
    }
    return g;
  }

  Monomial ma = monomial_content(a), mb = monomial_content(b);
  if (!ma.is_one() || !mb.is_one()) {
    Poly ra = *a.divide_exact(Poly::monomial(ma, Rational(1)));
    Poly rb = *b.divide_exact(Poly::monomial(mb, Rational(1)));
    return monic(gcd(ra, rb) * Poly::monomial(Monomial::gcd(ma, mb), Rational(1)));
  }

  const Poly& small = a.size() <= b.size() ? a : b;
  const Poly& large = a.size() <= b.size() ? b : a;
  if (std::all_of(va.begin(), va.end(), [&](Var v) { return small.degree(v) <= large.degree(v); }) &&
      large.divide_exact(small))
    return monic(small);

  if (va.size() > static_cast<std::size_t>(kMaxVars)) throw std::length_error("gcd: too many variables");
  std::vector<std::uint32_t> ids;
  for (Var v : va) ids.push_back(v.id);
  return modular_gcd(a, b, ids);
}

Poly univariate_gcd_euclid(const Poly& a, const Poly& b, Var x) {
  Poly r0 = a, r1 = b;
  while (!r1.is_zero()) {
    Poly rem = r0;
    const auto d1 = r1.degree(x);
    const Rational lc1 = r1.leading().coef;
    while (!rem.is_zero() && rem.degree(x) >= d1) {
      auto dr = rem.degree(x);
      Rational c = rem.leading().coef / lc1;
      rem -= r1.times_monomial(Monomial::of(x, dr - d1), c);
    }
    r0 = std::move(r1);
    r1 = std::move(rem);
  }
  return monic(r0);
}

}  // namespace cwb::sym
