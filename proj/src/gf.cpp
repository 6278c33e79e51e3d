#include "sf/gf.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "sf/nt.hpp"

namespace sf {

namespace {

// Dense polynomial helpers over F_p used only during context construction.
using Poly = std::vector<uint32_t>;  // ascending coefficients

void ptrim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& f, uint32_t p) {
  // f monic of degree m; result reduced mod f.
  const size_t m = f.size() - 1;
  if (a.empty() || b.empty()) return {};
  std::vector<uint64_t> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<uint64_t>(a[i]) * b[j];
  }
  for (auto& c : acc) c %= p;
  for (size_t d = acc.size(); d-- > m;) {
    const uint64_t lead = acc[d];
    if (lead) {
      for (size_t i = 0; i < m; ++i) {
        acc[d - m + i] = (acc[d - m + i] + lead * ((p - f[i]) % p)) % p;
      }
    }
    acc[d] = 0;
  }
  Poly r(m, 0);
  for (size_t i = 0; i < m && i < acc.size(); ++i) r[i] = static_cast<uint32_t>(acc[i] % p);
  ptrim(r);
  return r;
}

Poly ppowmod(Poly base, uint64_t e, const Poly& f, uint32_t p) {
  Poly r{1};
  while (e) {
    if (e & 1) r = pmulmod(r, base, f, p);
    base = pmulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

Poly pmod(Poly a, const Poly& b, uint32_t p) {
  ptrim(a);
  Poly bb = b;
  ptrim(bb);
  const uint32_t lead_inv = static_cast<uint32_t>(nt::powmod(bb.back(), p - 2, p));
  while (a.size() >= bb.size() && !a.empty()) {
    const uint64_t c = (static_cast<uint64_t>(a.back()) * lead_inv) % p;
    const size_t off = a.size() - bb.size();
    for (size_t i = 0; i < bb.size(); ++i) {
      a[off + i] = static_cast<uint32_t>((a[off + i] + p - (c * bb[i]) % p) % p);
    }
    ptrim(a);
  }
  return a;
}

Poly pgcd(Poly a, Poly b, uint32_t p) {
  ptrim(a);
  ptrim(b);
  while (!b.empty()) {
    Poly r = pmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool irreducible(const Poly& f, uint32_t p, int m) {
  if (m == 1) return true;
  // x^{p^m} = x (mod f) and gcd(x^{p^{m/l}} - x, f) = 1 for each prime l | m.
  Poly x{0, 1};
  Poly xq = ppowmod(x, nt::pow_u64(p, static_cast<unsigned>(m)), f, p);
  ptrim(xq);
  if (xq != x) return false;
  for (const auto& [l, e] : nt::factor(static_cast<uint64_t>(m))) {
    (void)e;
    Poly h = ppowmod(x, nt::pow_u64(p, static_cast<unsigned>(m / l)), f, p);
    // h - x
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] + p - 1) % p;
    ptrim(h);
    Poly g = pgcd(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

bool root_is_primitive(const Poly& f, uint32_t p, int m,
                       const std::vector<std::pair<uint64_t, int>>& nfac) {
  const uint64_t n = nt::pow_u64(p, static_cast<unsigned>(m)) - 1;
  Poly x{0, 1};
  for (const auto& [l, e] : nfac) {
    (void)e;
    Poly t = ppowmod(x, n / l, f, p);
    ptrim(t);
    if (t == Poly{1}) return false;
  }
  return true;
}

}  // namespace

FieldCtx::FieldCtx(uint32_t p, int m) : p_(p), m_(m) {
  if (p < 3 || !nt::is_prime(p)) throw ConditionError("p_odd_prime", "make_field: p must be an odd prime");
  if (m < 1) throw ConditionError("m_positive", "make_field: m must be >= 1");
  order_ = nt::pow_u64(p, static_cast<unsigned>(m));
  gorder_ = order_ - 1;
  one_ = 1;
  const auto nfac = nt::factor(gorder_);

  if (m == 1) {
    // Monic degree-1 candidates x + c in ascending c; root -c must generate.
    uint32_t chosen = 0;
    bool found = false;
    for (uint32_t c = 0; c < p && !found; ++c) {
      const uint32_t root = (p - c) % p;
      if (root == 0) continue;
      bool prim = true;
      for (const auto& [l, e] : nfac) {
        (void)e;
        if (nt::powmod(root, gorder_ / l, p) == 1) {
          prim = false;
          break;
        }
      }
      if (prim) {
        chosen = c;
        found = true;
      }
    }
    if (!found) throw std::logic_error("make_field: no primitive degree-1 polynomial");
    modulus_ = {chosen, 1};
    gen_ = (p - chosen) % p;
  } else {
    bool found = false;
    for (uint64_t cand = 0; cand < order_ && !found; ++cand) {
      Poly f(m + 1, 0);
      f[m] = 1;
      uint64_t t = cand;
      for (int i = 0; i < m; ++i) {
        f[i] = static_cast<uint32_t>(t % p);
        t /= p;
      }
      if (!irreducible(f, p, m)) continue;
      if (!root_is_primitive(f, p, m, nfac)) continue;
      modulus_ = f;
      found = true;
    }
    if (!found) throw std::logic_error("make_field: no primitive polynomial found");
    gen_ = p;  // the class of x: coefficient vector (0,1,0,...)
  }

  has_tables_ = order_ <= kTableCap;
  if (has_tables_) {
    alog_.assign(gorder_, 0);
    log_.assign(order_, 0);
    elt cur = one_;
    for (uint64_t i = 0; i < gorder_; ++i) {
      alog_[i] = cur;
      log_[cur] = static_cast<uint32_t>(i);
      cur = mul_poly(cur, gen_);
    }
    if (cur != one_) throw std::logic_error("make_field: generator order check failed");
    zech_.assign(gorder_, -1);
    for (uint64_t k = 0; k < gorder_; ++k) {
      const elt s = add_digits(one_, alog_[k]);
      zech_[k] = (s == 0) ? -1 : static_cast<int64_t>(log_[s]);
    }
  }

  for (int d = 1; d <= m; ++d)
    if (m % d == 0) tower_.push_back(d);
}

const FieldCtx& FieldCtx::get(uint32_t p, int m) {
  static std::map<std::pair<uint32_t, int>, std::unique_ptr<FieldCtx>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, m}];
  if (!slot) slot = std::make_unique<FieldCtx>(p, m);
  return *slot;
}

FieldCtx::elt FieldCtx::add_digits(elt a, elt b) const {
  uint64_t x = a, y = b, r = 0, w = 1;
  for (int i = 0; i < m_; ++i) {
    r += w * ((x % p_ + y % p_) % p_);
    x /= p_;
    y /= p_;
    w *= p_;
  }
  return static_cast<elt>(r);
}

FieldCtx::elt FieldCtx::mul_poly(elt a, elt b) const {
  // Schoolbook product of packed coefficient vectors, reduced by the modulus.
  uint64_t acc[48] = {0};
  uint32_t da[24], db[24];
  uint64_t x = a, y = b;
  for (int i = 0; i < m_; ++i) {
    da[i] = static_cast<uint32_t>(x % p_);
    db[i] = static_cast<uint32_t>(y % p_);
    x /= p_;
    y /= p_;
  }
  for (int i = 0; i < m_; ++i) {
    if (!da[i]) continue;
    for (int j = 0; j < m_; ++j) acc[i + j] += static_cast<uint64_t>(da[i]) * db[j];
  }
  for (int d = 2 * m_ - 2; d >= m_; --d) {
    const uint64_t lead = acc[d] % p_;
    if (lead) {
      for (int i = 0; i < m_; ++i) acc[d - m_ + i] += lead * (p_ - modulus_[i]);
    }
    acc[d] = 0;
  }
  uint64_t r = 0, w = 1;
  for (int i = 0; i < m_; ++i) {
    r += w * (acc[i] % p_);
    w *= p_;
  }
  return static_cast<elt>(r);
}

FieldCtx::elt FieldCtx::add(elt a, elt b) const {
  if (has_tables_) {
    if (a == 0) return b;
    if (b == 0) return a;
    const uint64_t la = log_[a], lb = log_[b];
    const uint64_t k = (lb + gorder_ - la) % gorder_;
    const int64_t z = zech_[k];
    if (z < 0) return 0;
    return alog_[(la + static_cast<uint64_t>(z)) % gorder_];
  }
  return add_digits(a, b);
}

FieldCtx::elt FieldCtx::neg(elt a) const {
  uint64_t x = a, r = 0, w = 1;
  for (int i = 0; i < m_; ++i) {
    const uint64_t d = x % p_;
    r += w * (d ? p_ - d : 0);
    x /= p_;
    w *= p_;
  }
  return static_cast<elt>(r);
}

FieldCtx::elt FieldCtx::mul(elt a, elt b) const {
  if (a == 0 || b == 0) return 0;
  if (has_tables_) return alog_[(static_cast<uint64_t>(log_[a]) + log_[b]) % gorder_];
  return mul_poly(a, b);
}

FieldCtx::elt FieldCtx::inv(elt a) const {
  if (a == 0) throw std::domain_error("FieldCtx::inv: zero has no inverse");
  if (has_tables_) return alog_[(gorder_ - log_[a]) % gorder_];
  return pow(a, static_cast<int64_t>(gorder_) - 1);
}

FieldCtx::elt FieldCtx::pow(elt a, int64_t e) const {
  if (a == 0) {
    if (e > 0) return 0;
    if (e == 0) return one_;
    throw std::domain_error("FieldCtx::pow: 0 to a negative power");
  }
  const int64_t n = static_cast<int64_t>(gorder_);
  int64_t r = e % n;
  if (r < 0) r += n;
  if (has_tables_) return alog_[(static_cast<uint64_t>(log_[a]) * static_cast<uint64_t>(r)) % gorder_];
  elt result = one_, base = a;
  uint64_t ee = static_cast<uint64_t>(r);
  while (ee) {
    if (ee & 1) result = mul_poly(result, base);
    base = mul_poly(base, base);
    ee >>= 1;
  }
  return result;
}

FieldCtx::elt FieldCtx::frob(elt a, int i) const {
  if (a == 0) return 0;
  int ii = i % m_;
  if (ii < 0) ii += m_;
  if (ii == 0) return a;
  if (has_tables_) {
    const uint64_t e = nt::powmod(p_, static_cast<uint64_t>(ii), gorder_);
    return alog_[(static_cast<uint64_t>(log_[a]) * e) % gorder_];
  }
  elt r = a;
  for (int k = 0; k < ii; ++k) {
    elt s = one_;
    elt base = r;
    uint32_t e = p_;
    while (e) {
      if (e & 1) s = mul_poly(s, base);
      base = mul_poly(base, base);
      e >>= 1;
    }
    r = s;
  }
  return r;
}

uint64_t FieldCtx::dlog(elt a) const {
  if (a == 0) throw std::domain_error("FieldCtx::dlog: zero");
  if (has_tables_) return log_[a];
  return dlog_bsgs(a);
}

uint64_t FieldCtx::dlog_bsgs(elt a) const {
  const uint64_t n = gorder_;
  const uint64_t s = static_cast<uint64_t>(std::sqrt(static_cast<double>(n))) + 1;
  std::unordered_map<elt, uint64_t> baby;
  baby.reserve(s);
  elt cur = one_;
  for (uint64_t j = 0; j < s; ++j) {
    baby.emplace(cur, j);
    cur = mul_poly(cur, gen_);
  }
  // giant step: g^{-s}
  const elt gs = pow(gen_, -static_cast<int64_t>(s));
  elt y = a;
  for (uint64_t i = 0; i <= s; ++i) {
    auto it = baby.find(y);
    if (it != baby.end()) return (i * s + it->second) % n;
    y = mul_poly(y, gs);
  }
  throw std::logic_error("dlog: not found");
}

FieldCtx::elt FieldCtx::from_dlog(int64_t e) const {
  const int64_t n = static_cast<int64_t>(gorder_);
  int64_t r = e % n;
  if (r < 0) r += n;
  if (has_tables_) return alog_[static_cast<uint64_t>(r)];
  return pow(gen_, r);
}

FieldCtx::elt FieldCtx::from_int(uint64_t scalar) const { return static_cast<elt>(scalar % p_); }

std::vector<uint8_t> FieldCtx::coeffs(elt a) const {
  std::vector<uint8_t> c(m_);
  uint64_t x = a;
  for (int i = 0; i < m_; ++i) {
    c[i] = static_cast<uint8_t>(x % p_);
    x /= p_;
  }
  return c;
}

FieldCtx::elt FieldCtx::from_coeffs(const std::vector<uint8_t>& c) const {
  if (static_cast<int>(c.size()) != m_) throw std::invalid_argument("from_coeffs: wrong length");
  uint64_t r = 0, w = 1;
  for (int i = 0; i < m_; ++i) {
    r += w * (c[i] % p_);
    w *= p_;
  }
  return static_cast<elt>(r);
}

bool FieldCtx::is_square(elt a) const {
  if (a == 0) throw std::domain_error("is_square: zero");
  return dlog(a) % 2 == 0;
}

bool FieldCtx::power_subgroup_test(elt a, uint64_t s) const {
  if (a == 0) throw std::domain_error("power_subgroup_test: zero");
  const uint64_t g = std::gcd(s % gorder_ == 0 ? gorder_ : s % gorder_, gorder_);
  return dlog(a) % g == 0;
}

bool FieldCtx::in_subfield(int d, elt a) const {
  if (d < 1 || m_ % d != 0) throw std::invalid_argument("in_subfield: d must divide m");
  if (a == 0) return true;
  const uint64_t sub = nt::pow_u64(p_, static_cast<unsigned>(d)) - 1;
  return dlog(a) % (gorder_ / sub) == 0;
}

FieldCtx::elt FieldCtx::subfield_gen(int d) const {
  if (d < 1 || m_ % d != 0) throw std::invalid_argument("subfield_gen: d must divide m");
  const uint64_t sub = nt::pow_u64(p_, static_cast<unsigned>(d)) - 1;
  return from_dlog(static_cast<int64_t>(gorder_ / sub));
}

std::vector<FieldCtx::elt> FieldCtx::subfield_elements(int d) const {
  const uint64_t sub = nt::pow_u64(p_, static_cast<unsigned>(d)) - 1;
  const uint64_t step = gorder_ / sub;
  std::vector<elt> out;
  out.reserve(sub + 1);
  out.push_back(0);
  for (uint64_t j = 0; j < sub; ++j) out.push_back(from_dlog(static_cast<int64_t>(j * step)));
  return out;
}

std::vector<FieldCtx::elt> FieldCtx::sylow_subgroup(uint64_t pprime) const {
  if (pprime < 2 || gorder_ % pprime != 0)
    throw ConditionError("pprime_divides_group_order",
                         "sylow_subgroup: p' must divide p^m - 1");
  const uint64_t part = nt::prime_part(gorder_, pprime);
  const uint64_t step = gorder_ / part;
  std::vector<elt> out;
  out.reserve(part);
  for (uint64_t j = 0; j < part; ++j) out.push_back(from_dlog(static_cast<int64_t>(j * step)));
  return out;
}

std::pair<FieldCtx::elt, FieldCtx::elt> FieldCtx::decompose_square(elt x) const {
  if (m_ % 2 != 0) throw ConditionError("m_even", "decompose_square: m must be even");
  if (x == 0 || !is_square(x))
    throw ConditionError("nonzero_square", "decompose_square: x must be a nonzero square");
  const uint64_t Q = nt::pow_u64(p_, static_cast<unsigned>(m_ / 2));
  const uint64_t d = dlog(x);
  // c = g^{(Q+1)s} runs over L^x, g = g^{(Q-1)t} over the (Q+1)-st roots of 1.
  std::vector<std::pair<uint64_t, uint64_t>> sols;  // (s, t)
  for (uint64_t s = 0; s < Q - 1; ++s) {
    const uint64_t rem = (d + gorder_ - ((Q + 1) * s) % gorder_) % gorder_;
    if (rem % (Q - 1) == 0) sols.emplace_back(s, rem / (Q - 1));
  }
  if (sols.size() != 2) throw std::logic_error("decompose_square: expected exactly two decompositions");
  auto pick = sols[0];
  const bool e0 = sols[0].first % 2 == 0, e1 = sols[1].first % 2 == 0;
  if (e0 != e1) {
    pick = e0 ? sols[0] : sols[1];
  } else if (sols[1].first < sols[0].first) {
    pick = sols[1];
  }
  return {from_dlog(static_cast<int64_t>(((Q + 1) * pick.first) % gorder_)),
          from_dlog(static_cast<int64_t>(((Q - 1) * pick.second) % gorder_))};
}

std::vector<FieldCtx::elt> FieldCtx::roots_of_fp_poly(const std::vector<uint32_t>& poly) const {
  if (order_ > kTableCap) throw std::domain_error("roots_of_fp_poly: field too large for scan");
  std::vector<elt> roots;
  for (uint64_t v = 0; v < order_; ++v) {
    elt acc = 0;
    const elt x = static_cast<elt>(v);
    for (size_t i = poly.size(); i-- > 0;) {
      acc = add(mul(acc, x), from_int(poly[i]));
    }
    if (acc == 0) roots.push_back(x);
  }
  return roots;
}

}  // namespace sf
