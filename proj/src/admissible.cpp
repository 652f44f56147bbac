#include "ntgaps/admissible.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ntg {

namespace {

u64 mod_residue(i64 x, u64 p) {
    i64 r = x % static_cast<i64>(p);
    if (r < 0) r += static_cast<i64>(p);
    return static_cast<u64>(r);
}

u64 inverse_mod(u64 a, u64 p) { return powmod(a % p, p - 2, p); }

}  // namespace

AdmissibilityReport is_admissible(const std::vector<LinearFunction>& functions) {
    if (functions.empty()) throw domain_error("is_admissible: empty family");
    for (const auto& f : functions)
        if (f.slope <= 0) throw domain_error("is_admissible: slopes must be positive");
    for (std::size_t i = 0; i < functions.size(); ++i)
        for (std::size_t j = i + 1; j < functions.size(); ++j)
            if (functions[i] == functions[j])
                throw domain_error("is_admissible: functions must be distinct");

    const u64 k = functions.size();
    std::set<u64> to_check;
    if (k >= 2)
        for (u64 p : primes_in(2, k)) to_check.insert(p);
    for (const auto& f : functions) {
        i64 g = std::gcd(f.slope, f.intercept < 0 ? -f.intercept : f.intercept);
        if (g > 1)
            for (auto [p, e] : factorize(g).factors) to_check.insert(p);
    }

    AdmissibilityReport report;
    for (u64 p : to_check) {
        std::vector<bool> covered(p, false);
        bool blocked = false;
        for (const auto& f : functions) {
            u64 a = mod_residue(f.slope, p);
            u64 b = mod_residue(f.intercept, p);
            if (a == 0) {
                if (b == 0) blocked = true;  // p divides every value
                continue;
            }
            covered[mulmod(p - b == p ? 0 : p - b, inverse_mod(a, p), p)] = true;
        }
        u64 witness = p;
        if (!blocked) {
            for (u64 n = 0; n < p; ++n)
                if (!covered[n]) {
                    witness = n;
                    break;
                }
        }
        if (blocked || witness == p) {
            report.admissible = false;
            report.blocking_prime = p;
            report.witnesses.clear();
            return report;
        }
        report.witnesses[p] = witness;
    }
    report.admissible = true;
    return report;
}

std::vector<u64> sieve_survivors(const CongruenceClass& c, u64 kappa, u64 limit) {
    check_class_invariants(c);
    if (kappa < 1) throw domain_error("sieve_survivors: kappa must be >= 1");

    std::vector<bool> bad(limit + 1, false);
    const u64 k = 2 * kappa;
    for (u64 p : primes_in(2, k)) {
        // Roots of vA + u and (v/T)A + (u-1)/T mod p. Slopes sharing p are
        // harmless: the matching intercepts are coprime to v.
        if (c.v % p != 0) {
            u64 a0 = mulmod(p - c.u % p == p ? 0 : p - c.u % p, inverse_mod(c.v % p, p), p);
            for (u64 A = a0; A <= limit; A += p) bad[A] = true;
        }
        u64 vt = c.v / c.T, ut = (c.u - 1) / c.T;
        if (vt % p != 0) {
            u64 a0 = mulmod(p - ut % p == p ? 0 : p - ut % p, inverse_mod(vt % p, p), p);
            for (u64 A = a0; A <= limit; A += p) bad[A] = true;
        }
    }
    std::vector<u64> out;
    for (u64 A = 0; A <= limit; ++A)
        if (!bad[A]) out.push_back(A);
    return out;
}

AdmissibleFamily build_family(const CongruenceClass& c, u64 kappa, u64 limit) {
    std::vector<u64> survivors = sieve_survivors(c, kappa, limit);
    if (survivors.size() < kappa)
        throw search_failure("build_family: only " + std::to_string(survivors.size()) +
                             " survivors below limit, need " + std::to_string(kappa));

    AdmissibleFamily fam;
    fam.kappa = kappa;
    fam.T = c.T;
    fam.v = c.v;
    for (u64 i = 0; i < kappa; ++i) {
        i64 a = checked_add(checked_mul(static_cast<i64>(c.v), static_cast<i64>(survivors[i])),
                            static_cast<i64>(c.u));
        fam.a_values.push_back(a);
        fam.functions.push_back({static_cast<i64>(c.v), a});
    }
    for (u64 i = 0; i < kappa; ++i) {
        fam.functions.push_back({static_cast<i64>(c.v / c.T),
                                 (fam.a_values[i] - 1) / static_cast<i64>(c.T)});
    }

    auto report = is_admissible(fam.functions);
    if (!report.admissible)
        throw domain_error("build_family: construction produced an inadmissible family");
    for (auto [p, n] : report.witnesses)
        if (p <= 2 * kappa) fam.witnesses[p] = n;
    return fam;
}

}  // namespace ntg
