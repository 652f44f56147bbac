#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ntgaps/arith.hpp"
#include "ntgaps/congruence.hpp"

namespace ntg {

struct LinearFunction {
    i64 slope = 1;      // > 0
    i64 intercept = 0;

    i64 operator()(i64 n) const { return checked_add(checked_mul(slope, n), intercept); }
    friend bool operator==(const LinearFunction&, const LinearFunction&) = default;
};

struct AdmissibilityReport {
    bool admissible = false;
    // For each checked prime p, a residue n_p avoiding all roots.
    std::map<u64, u64> witnesses;
    // Prime whose residues are fully covered, present iff not admissible.
    std::optional<u64> blocking_prime;
};

// A family is admissible when for every prime p some residue n_p avoids
// all roots of the L_i mod p. With coprime coefficients it suffices to
// check p <= k; primes dividing some gcd(slope, intercept) are checked too.
AdmissibilityReport is_admissible(const std::vector<LinearFunction>& functions);

// The 2*kappa functions L_i = v n + a_i and L~_i = (v/T) n + (a_i - 1)/T
// built on a congruence class, with T * L~_i + 1 = L_i identically.
struct AdmissibleFamily {
    u64 kappa = 0;
    u64 T = 0;
    u64 v = 0;
    std::vector<LinearFunction> functions;  // L_1..L_kappa, then L~_1..L~_kappa
    std::vector<i64> a_values;              // a_1 < ... < a_kappa
    std::map<u64, u64> witnesses;           // primes p <= 2 kappa -> n_p
    i64 window() const { return a_values.back() - a_values.front(); }
};

// All A in [0, limit] with p^-((vA + u)((v/T)A + (u-1)/T)) > 2*kappa.
std::vector<u64> sieve_survivors(const CongruenceClass& c, u64 kappa, u64 limit);

// Family from the first kappa survivors; throws search_failure (with the
// survivor count in the message) when fewer than kappa exist below limit.
AdmissibleFamily build_family(const CongruenceClass& c, u64 kappa, u64 limit);

}  // namespace ntg
