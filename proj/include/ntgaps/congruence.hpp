#pragma once

#include <optional>
#include <vector>

#include "ntgaps/arith.hpp"
#include "ntgaps/qset.hpp"

namespace ntg {

// The class (u, v, T): every prime p = u mod v has all target Legendre
// symbols equal to -1 (q-set form) or is inert in M (field form); T is the
// exact power of 2 dividing u - 1.
struct CongruenceClass {
    u64 u = 0;
    u64 v = 0;
    u64 T = 0;
};

// Throws domain_error unless (u, v, T) satisfies the type invariants:
// gcd(u, v) = 1, T in {2, 4, 8} exactly dividing u - 1, gcd((u-1)/T, v) = 1,
// and 16 | v or 432 | v.
void check_class_invariants(const CongruenceClass& c);

enum class Splitting { split, inert, ramified };

// A quadratic field given by its fundamental discriminant, or an abelian
// cubic field given by its conductor and generators of the index-3
// subgroup H of (Z/fZ)^x fixing it.
class FieldDescriptor {
public:
    static FieldDescriptor quadratic(i64 D);
    static FieldDescriptor cubic(u64 f, const std::vector<u64>& subgroup_generators);

    bool is_quadratic() const { return quadratic_; }
    i64 discriminant() const;       // quadratic only
    u64 conductor() const { return conductor_; }
    // Full subgroup H as a sorted residue list (cubic only).
    const std::vector<u64>& subgroup() const;

    bool in_subgroup(u64 a) const;  // a coprime to the conductor

private:
    FieldDescriptor() = default;
    bool quadratic_ = true;
    i64 disc_ = 0;
    u64 conductor_ = 0;
    std::vector<u64> subgroup_;
};

// Smallest prime p0 <= bound with (-3/p0) = (q_i/p0) = -1 for all i.
// Requires (*) to hold and all elements squarefree.
u64 find_p0(const QSet& q, u64 bound = 1'000'000);

// Heath-Brown style class for a q-set: v = 16 * prod of odd primes
// dividing prod q_i', u assembled by CRT from p0.
CongruenceClass build_uv(const QSet& q, u64 p0_bound = 1'000'000);

// Inert-in-M class: v = 2^4 3^3 * prod of primes > 3 dividing the
// conductor, u assembled from the least admissible u0.
CongruenceClass build_uv_field(const FieldDescriptor& M);

Splitting splitting_in_M(u64 p, const FieldDescriptor& M);

struct ClassReport {
    u64 primes_checked = 0;
    std::optional<u64> counterexample;
    bool all_pass() const { return !counterexample.has_value(); }
};

// Checks every prime p = u mod v, p <= test_bound, against the lemma's
// property (1), and re-verifies property (2) of the class itself.
ClassReport verify_congruence_class(const CongruenceClass& c, const QSet& q, u64 test_bound);
ClassReport verify_congruence_class(const CongruenceClass& c, const FieldDescriptor& M,
                                    u64 test_bound);

// Conductor of Q(sqrt(q_1), ..., sqrt(q_r)) / Q as the lcm of the
// fundamental discriminants of the Q(sqrt(q_i')): each product of the
// generator characters has conductor dividing that lcm.
u64 multiquadratic_conductor(const QSet& q);

// |fundamental discriminant| of Q(sqrt(d)); 1 when d is a perfect square.
u64 quadratic_field_conductor(i64 d);

}  // namespace ntg
