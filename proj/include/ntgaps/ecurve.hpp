#pragma once

#include <optional>
#include <vector>

#include "ntgaps/arith.hpp"

namespace ntg {

// Short Weierstrass curve y^2 = x^3 + Ax + B over Q. The model
// discriminant -16(4A^3 + 27B^2) stands in for the minimal discriminant;
// for short Weierstrass input only 2 and 3 can appear as spurious primes.
struct CurveQ {
    i64 A = 0;
    i64 B = 0;
    std::optional<i64> cm_discriminant;  // caller-asserted CM field data

    i64 disc_model() const;
};

struct CurveModP {
    u64 p = 0;
    u64 A = 0;
    u64 B = 0;
};

// E(F_p) = Z/d + Z/e with d | e; N = d*e, a = p + 1 - N.
struct GroupStructure {
    u64 N = 0;
    u64 d = 0;
    u64 e = 0;
    i64 a = 0;
};

// pi = x + y*omega in the maximal order of discriminant field_disc with
// N(pi) = p and pi = 1 mod ell coordinate-wise.
struct NormWitness {
    i64 x = 0;
    i64 y = 0;
    i64 field_disc = 0;
    friend bool operator==(const NormWitness&, const NormWitness&) = default;
};

struct ECOptions {
    // Full point enumeration below this; BSGS above it when enabled.
    u64 enumeration_limit = u64{1} << 16;
    bool enable_bsgs = false;
    u64 seed = 0x9e3779b97f4a7c15ull;
};

struct bad_reduction_error : domain_error {
    using domain_error::domain_error;
};

CurveModP reduce_mod_p(const CurveQ& E, u64 p);

u64 group_order(const CurveModP& C, const ECOptions& opts = {});
GroupStructure group_structure(const CurveModP& C, const ECOptions& opts = {});
bool is_cyclic_ec(const CurveModP& C, const ECOptions& opts = {});

// Trace criterion a_p = 0, equivalent to Deuring's for p >= 5.
bool is_supersingular(const CurveQ& E, u64 p, const ECOptions& opts = {});

// True iff (Z/ell)^2 sits inside E(F_p), i.e. ell | d. Fast exits: false
// when ell > sqrt(p) + 1 or ell does not divide p - 1.
bool splits_completely_torsion(const CurveModP& C, u64 ell, const ECOptions& opts = {});

// Deterministic box search over the maximal order; scans x ascending and,
// per x, y by absolute value with the positive sign first.
std::optional<NormWitness> cm_norm_witness(u64 p, i64 field_disc, u64 ell);

// #{p <= x : good reduction, p >= 5, n | d_p}.
u64 duke_census(const CurveQ& E, u64 x, u64 n, const ECOptions& opts = {});

// (p, structure) for every good prime 5 <= p <= x; shared by the census
// and the scanners.
std::vector<std::pair<u64, GroupStructure>> structures_up_to(const CurveQ& E, u64 x,
                                                             const ECOptions& opts = {});

// rad of the model discriminant (product of its distinct primes).
u64 rad_disc_model(const CurveQ& E);

}  // namespace ntg
