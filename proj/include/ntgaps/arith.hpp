#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ntgaps/errors.hpp"

namespace ntg {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Default segment for the segmented sieve and the cap on a single
// primes_in range.
inline constexpr u64 kSieveSegment = u64{1} << 20;
inline constexpr u64 kRangeCap = u64{1} << 32;

struct Factorization {
    int sign = 1;  // -1 or +1
    std::vector<std::pair<u64, int>> factors;  // (prime, exponent), primes increasing

    // Reconstructs sign * prod p^e; overflow-checked.
    i64 value() const;
};

struct PrimeRange {
    u64 lo = 0;
    u64 hi = 0;
};

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
u64 isqrt(u64 n);
// floor(n^(1/r)), r >= 1
u64 iroot(u64 n, unsigned r);

// Overflow-checked arithmetic; throws resource_error on wrap.
i64 checked_mul(i64 a, i64 b);
i64 checked_add(i64 a, i64 b);
u64 checked_mul_u64(u64 a, u64 b);

// Deterministic Miller-Rabin, exact over the full 64-bit range.
bool is_prime(u64 n);

// All primes p with lo <= p <= hi, ascending. Segmented internally;
// ranges longer than range_cap are refused.
std::vector<u64> primes_in(u64 lo, u64 hi, u64 range_cap = kRangeCap);
std::vector<u64> primes_in(const PrimeRange& r, u64 range_cap = kRangeCap);

// Trial division to 10^6, then Pollard rho (Brent) with a fixed parameter
// sequence c = 1, 2, 3, ... so results are identical across runs.
Factorization factorize(i64 n);

// Jacobi symbol (a/n) for odd n >= 1; depends on a only through a mod n.
int jacobi(i64 a, u64 n);

// Kronecker symbol (a/n) for n >= 1; agrees with jacobi for odd n and
// handles the (a/2) factor.
int kronecker(i64 a, u64 n);

// Least t >= 1 with a^t = 1 mod p; requires p prime, p not dividing a.
u64 mult_order(i64 a, u64 p);

// Simultaneous congruences x = r_i mod m_i. Returns (x, lcm) with
// x in [0, lcm). Throws crt_inconsistent when no solution exists.
std::pair<u64, u64> crt(const std::vector<std::pair<i64, u64>>& congruences);

// The squarefree q' with q/q' a positive perfect square, sign preserved.
i64 squarefree_part(i64 q);

// Square root mod an odd prime (Tonelli-Shanks); nullopt for non-residues.
std::optional<u64> sqrt_mod(u64 a, u64 p);

}  // namespace ntg
