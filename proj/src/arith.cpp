#include "ntgaps/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace ntg {

namespace {

constexpr u64 kTrialLimit = 1'000'000;

u64 abs_u64(i64 n) {
    return n < 0 ? ~static_cast<u64>(n) + 1 : static_cast<u64>(n);
}

// Residue of a mod m in [0, m).
u64 reduce_mod(i64 a, u64 m) {
    i64 r = a % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

bool miller_rabin(u64 n, u64 a) {
    a %= n;
    if (a == 0) return true;
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

// Brent's cycle variant; deterministic because c walks 1, 2, 3, ...
u64 pollard_rho(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1, saved = 2;
        u64 steps = 0, limit = 2;
        while (d == 1) {
            u64 prod = 1;
            for (u64 i = 0; i < 128 && steps < limit; ++i, ++steps) {
                x = mulmod(x, x, n) + c;
                if (x >= n) x -= n;
                u64 diff = x > y ? x - y : y - x;
                if (diff == 0) diff = n;
                prod = mulmod(prod, diff, n);
            }
            d = std::gcd(prod, n);
            if (steps >= limit && d == 1) {
                y = x;
                limit *= 2;
            }
            if (d == 1) saved = x;
        }
        if (d != n) return d;
        // Backtrack one block to recover a factor lost in the product.
        u64 x2 = saved;
        d = 1;
        while (d == 1) {
            x2 = mulmod(x2, x2, n) + c;
            if (x2 >= n) x2 -= n;
            u64 diff = x2 > y ? x2 - y : y - x2;
            if (diff == 0) break;
            d = std::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_into(u64 n, std::map<u64, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

u64 iroot(u64 n, unsigned r) {
    if (r == 0) throw domain_error("iroot: r must be positive");
    if (r == 1 || n < 2) return n;
    if (r == 2) return isqrt(n);
    u64 x = static_cast<u64>(std::pow(static_cast<double>(n), 1.0 / r)) + 1;
    auto pow_le = [n](u64 b, unsigned e) {
        u128 p = 1;
        for (unsigned i = 0; i < e; ++i) {
            p *= b;
            if (p > n) return false;
        }
        return true;
    };
    while (x > 0 && !pow_le(x, r)) --x;
    while (pow_le(x + 1, r)) ++x;
    return x;
}

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw resource_error("integer overflow in multiply");
    return r;
}

i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw resource_error("integer overflow in add");
    return r;
}

u64 checked_mul_u64(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw resource_error("integer overflow in multiply");
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    // Witness set exact for all 64-bit integers.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!miller_rabin(n, a)) return false;
    }
    return true;
}

std::vector<u64> primes_in(u64 lo, u64 hi, u64 range_cap) {
    if (lo > hi) throw domain_error("primes_in: lo > hi");
    if (hi - lo > range_cap) throw resource_error("primes_in: range exceeds segment cap");
    std::vector<u64> out;
    if (hi < 2) return out;
    lo = std::max<u64>(lo, 2);

    u64 root = isqrt(hi);
    if (root > (u64{1} << 26)) throw resource_error("primes_in: upper bound beyond sieve tier");
    std::vector<bool> base_composite(root + 1, false);
    std::vector<u64> base;
    for (u64 p = 2; p <= root; ++p) {
        if (base_composite[p]) continue;
        base.push_back(p);
        for (u64 q = p * p; q <= root; q += p) base_composite[q] = true;
    }

    std::vector<bool> seg;
    for (u64 start = lo; start <= hi; start += kSieveSegment) {
        u64 end = std::min(hi, start + kSieveSegment - 1);
        seg.assign(end - start + 1, true);
        for (u64 p : base) {
            u64 first = std::max(p * p, (start + p - 1) / p * p);
            for (u64 q = first; q <= end; q += p) seg[q - start] = false;
        }
        for (u64 n = start; n <= end; ++n)
            if (seg[n - start]) out.push_back(n);
        if (end == hi) break;
    }
    return out;
}

std::vector<u64> primes_in(const PrimeRange& r, u64 range_cap) {
    return primes_in(r.lo, r.hi, range_cap);
}

i64 Factorization::value() const {
    i64 v = sign;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i) v = checked_mul(v, static_cast<i64>(p));
    return v;
}

Factorization factorize(i64 n) {
    if (n == 0) throw domain_error("factorize: 0 has no factorization");
    Factorization f;
    f.sign = n < 0 ? -1 : 1;
    u64 m = abs_u64(n);

    std::map<u64, int> fac;
    for (u64 d = 2; d < kTrialLimit && d * d <= m; d = (d == 2 ? 3 : d + 2)) {
        while (m % d == 0) {
            fac[d] += 1;
            m /= d;
        }
    }
    if (m > 1) factor_into(m, fac);
    f.factors.assign(fac.begin(), fac.end());
    return f;
}

int jacobi(i64 a, u64 n) {
    if (n == 0 || n % 2 == 0) throw domain_error("jacobi: modulus must be odd and positive");
    u64 x = reduce_mod(a, n);
    u64 m = n;
    int t = 1;
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            if (m % 8 == 3 || m % 8 == 5) t = -t;
        }
        std::swap(x, m);
        if (x % 4 == 3 && m % 4 == 3) t = -t;
        x %= m;
    }
    return m == 1 ? t : 0;
}

int kronecker(i64 a, u64 n) {
    if (n == 0) throw domain_error("kronecker: modulus must be positive");
    int t = 1;
    while (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        u64 r = reduce_mod(a, 8);
        if (r == 3 || r == 5) t = -t;
        n /= 2;
    }
    if (n == 1) return t;
    return t * jacobi(a, n);
}

u64 mult_order(i64 a, u64 p) {
    u64 x = reduce_mod(a, p);
    if (x == 0) throw domain_error("mult_order: p divides a");
    u64 t = p - 1;
    for (auto [ell, e] : factorize(static_cast<i64>(p - 1)).factors) {
        while (t % ell == 0 && powmod(x, t / ell, p) == 1) t /= ell;
    }
    return t;
}

std::pair<u64, u64> crt(const std::vector<std::pair<i64, u64>>& congruences) {
    if (congruences.empty()) throw domain_error("crt: empty system");
    for (auto& [r, m] : congruences)
        if (m < 1) throw domain_error("crt: modulus must be >= 1");

    u64 x = 0, L = 1;
    for (size_t i = 0; i < congruences.size(); ++i) {
        auto [ri, mi] = congruences[i];
        u64 r = reduce_mod(ri, mi);
        u64 g = std::gcd(L, mi);
        if (x % g != r % g) {
            // Locate a genuinely conflicting input pair for the report.
            for (size_t j = 0; j < i; ++j) {
                auto [rj, mj] = congruences[j];
                u64 gg = std::gcd(mj, mi);
                if (reduce_mod(rj, gg) != reduce_mod(ri, gg))
                    throw crt_inconsistent({rj, mj}, {ri, mi});
            }
            throw crt_inconsistent({static_cast<i64>(x), L}, {ri, mi});
        }
        u64 lcm = checked_mul_u64(L / g, mi);
        // Solve x_new = x mod L, = r mod mi.
        u64 m2 = mi / g;
        if (m2 > 1) {
            u64 diff = (r + mi - x % mi) % mi / g;
            // Inverse of (L/g) mod m2 exists since gcd(L/g, m2) = 1.
            u64 lg = (L / g) % m2;
            u64 inv = 1;
            {
                i64 t0 = 0, t1 = 1;
                u64 r0 = m2, r1 = lg;
                while (r1 != 0) {
                    u64 q = r0 / r1;
                    i64 tn = t0 - static_cast<i64>(q) * t1;
                    t0 = t1; t1 = tn;
                    u64 rn = r0 - q * r1;
                    r0 = r1; r1 = rn;
                }
                inv = reduce_mod(t0, m2);
            }
            u64 k = mulmod(diff % m2, inv, m2);
            x = static_cast<u64>((static_cast<u128>(L) * k + x) % lcm);
        }
        L = lcm;
    }
    return {x, L};
}

i64 squarefree_part(i64 q) {
    if (q == 0) throw domain_error("squarefree_part: q must be nonzero");
    Factorization f = factorize(q);
    i64 r = f.sign;
    for (auto [p, e] : f.factors)
        if (e % 2 == 1) r = checked_mul(r, static_cast<i64>(p));
    return r;
}

std::optional<u64> sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    u64 q = p - 1;
    int s = std::countr_zero(q);
    q >>= s;
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = powmod(c, u64{1} << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

}  // namespace ntg
