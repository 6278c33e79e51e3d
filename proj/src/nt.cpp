#include "sf/nt.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace sf::nt {

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d : {2ull, 3ull, 5ull, 7ull}) {
    if (n == d) return true;
    if (n % d == 0) return false;
  }
  for (uint64_t d = 11; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::pair<uint64_t, int>> factor(uint64_t n) {
  if (n == 0) throw std::invalid_argument("factor: n = 0");
  std::vector<std::pair<uint64_t, int>> out;
  for (uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

uint64_t pow_u64(uint64_t b, unsigned e) {
  uint64_t r = 1;
  while (e) {
    if (e & 1) {
      if (b != 0 && r > UINT64_MAX / b) throw std::overflow_error("pow_u64 overflow");
      r *= b;
    }
    e >>= 1;
    if (e) {
      if (b != 0 && b > UINT64_MAX / b) throw std::overflow_error("pow_u64 overflow");
      b *= b;
    }
  }
  return r;
}

uint64_t powmod(uint64_t b, uint64_t e, uint64_t mod) {
  if (mod == 1) return 0;
  __uint128_t r = 1, base = b % mod;
  while (e) {
    if (e & 1) r = (r * base) % mod;
    base = (base * base) % mod;
    e >>= 1;
  }
  return static_cast<uint64_t>(r);
}

uint64_t gcd_u64(uint64_t a, uint64_t b) { return std::gcd(a, b); }

uint64_t odd_part(uint64_t n) {
  if (n == 0) throw std::invalid_argument("odd_part: n = 0");
  while ((n & 1) == 0) n >>= 1;
  return n;
}

int two_adic_valuation(uint64_t n) {
  if (n == 0) throw std::invalid_argument("two_adic_valuation: n = 0");
  int v = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++v;
  }
  return v;
}

uint64_t gcd_pm(uint64_t p, int i, int m, char sign) {
  if (i < 1 || m < 1) throw std::invalid_argument("gcd_pm: need i, m >= 1");
  if (sign != '+' && sign != '-') throw std::invalid_argument("gcd_pm: sign must be '+' or '-'");
  const uint64_t g = std::gcd(static_cast<uint64_t>(i), static_cast<uint64_t>(m));
  uint64_t closed;
  if (sign == '-') {
    closed = pow_u64(p, static_cast<unsigned>(g)) - 1;
  } else if ((static_cast<uint64_t>(m) / g) % 2 == 1) {
    closed = (p == 2) ? 1 : 2;
  } else {
    closed = pow_u64(p, static_cast<unsigned>(g)) + 1;
  }
  const uint64_t lhs = (sign == '-') ? pow_u64(p, static_cast<unsigned>(i)) - 1
                                     : pow_u64(p, static_cast<unsigned>(i)) + 1;
  const uint64_t direct = std::gcd(lhs, pow_u64(p, static_cast<unsigned>(m)) - 1);
  if (direct != closed) throw std::logic_error("gcd_pm: closed form disagrees with integer gcd");
  return closed;
}

uint64_t zsigmondy_prime(uint64_t p, int m) {
  if (!is_prime(p)) throw std::invalid_argument("zsigmondy_prime: p must be prime");
  if (m <= 2 || (p == 2 && m == 6))
    throw std::domain_error("zsigmondy_prime: no primitive divisor guaranteed for these parameters");
  const uint64_t n = pow_u64(p, static_cast<unsigned>(m)) - 1;
  for (const auto& [q, e] : factor(n)) {
    (void)e;
    bool primitive = true;
    for (int i = 1; i < m; ++i) {
      if (powmod(p, static_cast<uint64_t>(i), q) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return q;
  }
  throw std::logic_error("zsigmondy_prime: no primitive divisor found (should not happen)");
}

uint64_t prime_part(uint64_t n, uint64_t q) {
  uint64_t part = 1;
  while (n % q == 0) {
    n /= q;
    part *= q;
  }
  return part;
}

std::vector<uint64_t> solve_linear_congruence(uint64_t a, uint64_t b, uint64_t n) {
  a %= n;
  b %= n;
  const uint64_t g = std::gcd(a == 0 ? n : a, n);
  if (b % g != 0) return {};
  // Solve (a/g) t = (b/g) (mod n/g) by modular inverse, then lift.
  const uint64_t n2 = n / g, a2 = (a / g) % n2, b2 = (b / g) % n2;
  uint64_t t0;
  if (n2 == 1) {
    t0 = 0;
  } else {
    // extended Euclid for a2^{-1} mod n2
    int64_t x0 = 1, x1 = 0;
    uint64_t r0 = a2, r1 = n2;
    while (r1) {
      const uint64_t qq = r0 / r1;
      const uint64_t r2 = r0 - qq * r1;
      const int64_t x2 = x0 - static_cast<int64_t>(qq) * x1;
      r0 = r1;
      r1 = r2;
      x0 = x1;
      x1 = x2;
    }
    const uint64_t inv = static_cast<uint64_t>(((x0 % static_cast<int64_t>(n2)) + static_cast<int64_t>(n2))) % n2;
    t0 = static_cast<uint64_t>((__uint128_t(inv) * b2) % n2);
  }
  std::vector<uint64_t> out;
  out.reserve(g);
  for (uint64_t s = 0; s < g; ++s) out.push_back((t0 + s * n2) % n);
  return out;
}

}  // namespace sf::nt
