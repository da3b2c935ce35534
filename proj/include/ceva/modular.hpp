#pragma once

// Word-size prime field arithmetic: mulmod via 128-bit products, a
// deterministic Miller-Rabin for 64-bit inputs, prime search in a range and
// primitive roots of unity.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ceva {

/// Thrown when no prime of the requested shape is found within the budget.
struct PrimeSearchFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t r = a + b;
  if (r >= p || r < a) r -= p;
  return r;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  base %= p;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    e >>= 1U;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw std::domain_error("invmod: zero has no inverse");
  return powmod(a, p - 2, p);
}

/// Deterministic for all 64-bit n (first twelve prime bases).
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto q : kSmall) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (auto a : kSmall) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Distinct prime divisors by trial division (n is a group exponent, so small).
inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline constexpr std::uint64_t kVerifyPrimeLow = std::uint64_t{1} << 50U;
inline constexpr std::uint64_t kVerifyPrimeHigh = std::uint64_t{1} << 62U;

/// Uniform prime p in [lo, hi) with p == 1 (mod n).
template <class Rng>
std::uint64_t random_prime_congruent_one(std::uint64_t n, Rng& rng, std::uint64_t lo = kVerifyPrimeLow,
                                         std::uint64_t hi = kVerifyPrimeHigh, int budget = 1 << 16) {
  if (n == 0) throw std::invalid_argument("random_prime_congruent_one: n must be positive");
  std::uint64_t kmin = (lo - 1 + n - 1) / n;  // smallest k with k*n+1 >= lo
  std::uint64_t kmax = (hi - 2) / n;          // largest k with k*n+1 < hi
  if (kmin > kmax) throw PrimeSearchFailed("no candidates of the form k*n+1 in range");
  std::uniform_int_distribution<std::uint64_t> dist(kmin, kmax);
  for (int i = 0; i < budget; ++i) {
    std::uint64_t p = dist(rng) * n + 1;
    if (is_prime_u64(p)) return p;
  }
  throw PrimeSearchFailed("prime search budget exhausted");
}

template <class Rng>
std::uint64_t random_prime(Rng& rng, std::uint64_t lo = kVerifyPrimeLow, std::uint64_t hi = kVerifyPrimeHigh) {
  return random_prime_congruent_one(1, rng, lo, hi);
}

/// An element of exact multiplicative order n in F_p; requires n | p-1.
template <class Rng>
std::uint64_t primitive_root_of_unity(std::uint64_t n, std::uint64_t p, Rng& rng) {
  if ((p - 1) % n != 0) throw std::invalid_argument("primitive_root_of_unity: n does not divide p-1");
  if (n == 1) return 1;
  auto qs = prime_divisors(n);
  std::uniform_int_distribution<std::uint64_t> dist(2, p - 1);
  for (int i = 0; i < 4096; ++i) {
    std::uint64_t w = powmod(dist(rng), (p - 1) / n, p);
    bool ok = true;
    for (auto q : qs) {
      if (powmod(w, n / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return w;
  }
  throw PrimeSearchFailed("no primitive root of unity found");
}

}  // namespace ceva
