#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Integer number theory used throughout: factoring at desk scale, the
// gcd(p^i +- 1, p^m - 1) closed forms, odd part / 2-adic valuation, and
// p-primitive prime divisors.

namespace sf::nt {

bool is_prime(uint64_t n);

// Trial-division factorization, (prime, multiplicity) pairs in ascending order.
std::vector<std::pair<uint64_t, int>> factor(uint64_t n);

// b^e with overflow check (throws std::overflow_error).
uint64_t pow_u64(uint64_t b, unsigned e);

uint64_t powmod(uint64_t b, uint64_t e, uint64_t mod);

uint64_t gcd_u64(uint64_t a, uint64_t b);

// n = odd_part(n) * 2^two_adic_valuation(n); n >= 1 required.
uint64_t odd_part(uint64_t n);
int two_adic_valuation(uint64_t n);

// gcd(p^i - 1, p^m - 1) for sign '-', gcd(p^i + 1, p^m - 1) for sign '+'.
// Evaluates the closed form (p^gcd(i,m) - 1 resp. the parity-split cases)
// and cross-checks it against the direct integer gcd before returning.
uint64_t gcd_pm(uint64_t p, int i, int m, char sign);

// Smallest prime p' with p' | p^m - 1 and p' not dividing p^i - 1 for all
// 1 <= i < m. Requires m > 2 and (p, m) != (2, 6); otherwise throws
// std::domain_error ("no primitive divisor guaranteed").
uint64_t zsigmondy_prime(uint64_t p, int m);

// Largest power of the prime q dividing n (the "q-part").
uint64_t prime_part(uint64_t n, uint64_t q);

// Solutions t (mod n) of a*t = b (mod n); empty when gcd(a,n) does not
// divide b, else exactly gcd(a,n) solutions in ascending order.
std::vector<uint64_t> solve_linear_congruence(uint64_t a, uint64_t b, uint64_t n);

}  // namespace sf::nt
