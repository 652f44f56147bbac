#include "ntgaps/congruence.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ntg {

namespace {

int mod4(i64 x) { return static_cast<int>(((x % 4) + 4) % 4); }

bool is_squarefree(i64 n) { return squarefree_part(n) == n; }

bool is_fundamental_discriminant(i64 D) {
    if (D == 0 || D == 1) return false;
    if (mod4(D) == 1) return is_squarefree(D);
    if (mod4(D) != 0) return false;
    i64 m = D / 4;
    return is_squarefree(m) && (mod4(m) == 2 || mod4(m) == 3);
}

u64 two_part(u64 n) { return n & (~n + 1); }

}  // namespace

void check_class_invariants(const CongruenceClass& c) {
    if (c.u < 2) throw domain_error("congruence class: u - 1 must be positive (T undefined)");
    if (c.v == 0) throw domain_error("congruence class: v must be positive");
    if (std::gcd(c.u, c.v) != 1) throw domain_error("congruence class: gcd(u, v) != 1");
    if (c.T != 2 && c.T != 4 && c.T != 8)
        throw domain_error("congruence class: T must lie in {2, 4, 8}");
    if (two_part(c.u - 1) != c.T)
        throw domain_error("congruence class: T is not the exact 2-power of u - 1");
    if (std::gcd((c.u - 1) / c.T, c.v) != 1)
        throw domain_error("congruence class: gcd((u-1)/T, v) != 1");
    if (c.v % 16 != 0 && c.v % 432 != 0)
        throw domain_error("congruence class: v matches neither lemma form");
}

FieldDescriptor FieldDescriptor::quadratic(i64 D) {
    if (!is_fundamental_discriminant(D))
        throw domain_error("field descriptor: not a fundamental discriminant");
    FieldDescriptor d;
    d.quadratic_ = true;
    d.disc_ = D;
    d.conductor_ = static_cast<u64>(D < 0 ? -D : D);
    return d;
}

FieldDescriptor FieldDescriptor::cubic(u64 f, const std::vector<u64>& subgroup_generators) {
    if (f < 7) throw domain_error("field descriptor: cubic conductor too small");
    Factorization fac = factorize(static_cast<i64>(f));
    for (auto [p, e] : fac.factors) {
        if (p == 3) {
            if (e != 2) throw domain_error("field descriptor: cubic conductor 3-part must be 9");
        } else {
            if (e != 1 || p % 6 != 1)
                throw domain_error(
                    "field descriptor: cubic conductor must be a product of distinct primes = 1 mod 6, "
                    "optionally times 9");
        }
    }

    // Close the generators (with 1) under multiplication mod f.
    std::set<u64> closure{1 % f};
    std::vector<u64> frontier{1 % f};
    for (u64 g : subgroup_generators) {
        u64 r = g % f;
        if (r == 0 || std::gcd(r, f) != 1)
            throw domain_error("field descriptor: subgroup generator not coprime to conductor");
        if (closure.insert(r).second) frontier.push_back(r);
    }
    while (!frontier.empty()) {
        u64 a = frontier.back();
        frontier.pop_back();
        for (u64 b : std::vector<u64>(closure.begin(), closure.end())) {
            u64 c = mulmod(a, b, f);
            if (closure.insert(c).second) frontier.push_back(c);
        }
    }

    u64 phi = 1;
    for (auto [p, e] : fac.factors) {
        u64 pe = 1;
        for (int i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    if (phi != 3 * closure.size())
        throw domain_error("field descriptor: subgroup index is not 3");

    FieldDescriptor d;
    d.quadratic_ = false;
    d.conductor_ = f;
    d.subgroup_.assign(closure.begin(), closure.end());
    return d;
}

i64 FieldDescriptor::discriminant() const {
    if (!quadratic_) throw domain_error("field descriptor: cubic field has no stored discriminant");
    return disc_;
}

const std::vector<u64>& FieldDescriptor::subgroup() const {
    if (quadratic_) throw domain_error("field descriptor: quadratic subgroup is implicit");
    return subgroup_;
}

bool FieldDescriptor::in_subgroup(u64 a) const {
    a %= conductor_;
    if (std::gcd(a, conductor_) != 1)
        throw domain_error("field descriptor: residue not coprime to conductor");
    if (quadratic_) return kronecker(disc_, a) == 1;
    return std::binary_search(subgroup_.begin(), subgroup_.end(), a);
}

u64 find_p0(const QSet& q, u64 bound) {
    auto star = check_star(q);
    if (!star.holds) throw domain_error("find_p0: condition (*) fails for this q-set");
    for (i64 qi : q.elements())
        if (!is_squarefree(qi))
            throw domain_error("find_p0: elements must be squarefree (apply squarefree_part)");

    for (u64 start = 5; start <= bound; start += kSieveSegment) {
        u64 end = std::min(bound, start + kSieveSegment - 1);
        for (u64 p : primes_in(start, end)) {
            if (p == 2 || p == 3) continue;
            bool ok = jacobi(-3, p) == -1;
            for (std::size_t i = 0; ok && i < q.size(); ++i)
                ok = q.elements()[i] % static_cast<i64>(p) != 0 && jacobi(q.elements()[i], p) == -1;
            if (ok) return p;
        }
        if (end == bound) break;
    }
    throw search_failure("find_p0: no prime below bound; retry with a 10x larger bound");
}

CongruenceClass build_uv(const QSet& q, u64 p0_bound) {
    std::set<i64> parts(q.squarefree_parts().begin(), q.squarefree_parts().end());
    QSet reduced(std::vector<i64>(parts.begin(), parts.end()));

    u64 v = 16;
    std::vector<u64> odd_primes;
    for (u64 p : reduced.basis_primes()) {
        if (p == 2) continue;
        odd_primes.push_back(p);
        v = checked_mul_u64(v, p);
    }

    u64 p0 = find_p0(reduced, p0_bound);

    std::vector<std::pair<i64, u64>> congruences;
    u64 u2 = (p0 - 1) % 16 == 0 ? p0 - 8 : p0;
    congruences.push_back({static_cast<i64>(u2 % 16), 16});
    for (u64 ell : odd_primes) {
        u64 u_ell = (p0 - 1) % ell == 0 ? 4 * p0 : p0;
        congruences.push_back({static_cast<i64>(u_ell % ell), ell});
    }
    auto [u, L] = crt(congruences);

    CongruenceClass c{u, v, two_part(u - 1)};
    check_class_invariants(c);
    return c;
}

CongruenceClass build_uv_field(const FieldDescriptor& M) {
    const u64 f = M.conductor();
    u64 v = 432;
    std::vector<u64> big_primes;
    for (auto [p, e] : factorize(static_cast<i64>(f)).factors) {
        if (p <= 3) continue;
        big_primes.push_back(p);
        v = checked_mul_u64(v, p);
    }

    // Least u0 coprime to f, outside H, with u0 = 2 mod 3, u0 odd and
    // 16 not dividing u0 - 1. Searching for all conditions at once
    // subsumes the shift-repair steps of the construction.
    u64 u0 = 0;
    for (u64 cand = 2; cand < 10'000'000; ++cand) {
        if (cand % 2 == 0 || cand % 3 != 2) continue;
        if ((cand - 1) % 16 == 0) continue;
        if (std::gcd(cand, f) != 1) continue;
        if (M.in_subgroup(cand)) continue;
        u0 = cand;
        break;
    }
    if (u0 == 0) throw search_failure("build_uv_field: no admissible u0 found");

    std::vector<std::pair<i64, u64>> congruences;
    congruences.push_back({static_cast<i64>(u0 % 432), 432});
    for (u64 ell : big_primes) {
        i64 u_ell;
        if ((u0 - 1) % ell != 0) {
            u_ell = static_cast<i64>(u0);
        } else {
            u_ell = M.is_quadratic() ? checked_mul(4, static_cast<i64>(u0))
                                     : checked_mul(-8, static_cast<i64>(u0));
        }
        if (((u_ell - 1) % static_cast<i64>(ell)) == 0)
            throw domain_error("build_uv_field: u_ell congruent to 1 mod ell");
        congruences.push_back({u_ell, ell});
    }
    auto [u, L] = crt(congruences);

    CongruenceClass c{u, v, two_part(u - 1)};
    check_class_invariants(c);
    return c;
}

Splitting splitting_in_M(u64 p, const FieldDescriptor& M) {
    if (!is_prime(p)) throw domain_error("splitting_in_M: p must be prime");
    const u64 f = M.conductor();
    if (M.is_quadratic()) {
        int k = kronecker(M.discriminant(), p);
        if (k == 0) return Splitting::ramified;
        return k == 1 ? Splitting::split : Splitting::inert;
    }
    if (f % p == 0) return Splitting::ramified;
    return M.in_subgroup(p % f) ? Splitting::split : Splitting::inert;
}

namespace {

template <class Pred>
ClassReport verify_class_impl(const CongruenceClass& c, u64 test_bound, Pred&& passes) {
    check_class_invariants(c);
    ClassReport report;
    for (u64 p = c.u; p <= test_bound; p += c.v) {
        if (!is_prime(p)) continue;
        ++report.primes_checked;
        if (!report.counterexample && !passes(p)) report.counterexample = p;
    }
    return report;
}

}  // namespace

ClassReport verify_congruence_class(const CongruenceClass& c, const QSet& q, u64 test_bound) {
    return verify_class_impl(c, test_bound, [&](u64 p) {
        for (i64 qp : q.squarefree_parts())
            if (jacobi(qp, p) != -1) return false;
        return true;
    });
}

ClassReport verify_congruence_class(const CongruenceClass& c, const FieldDescriptor& M,
                                    u64 test_bound) {
    return verify_class_impl(c, test_bound,
                             [&](u64 p) { return splitting_in_M(p, M) == Splitting::inert; });
}

u64 quadratic_field_conductor(i64 d) {
    i64 dp = squarefree_part(d);
    if (dp == 1) return 1;
    if (mod4(dp) == 1) return static_cast<u64>(dp < 0 ? -dp : dp);
    return checked_mul_u64(4, static_cast<u64>(dp < 0 ? -dp : dp));
}

u64 multiquadratic_conductor(const QSet& q) {
    u64 f = 1;
    for (i64 qi : q.elements()) f = std::lcm(f, quadratic_field_conductor(qi));
    return f;
}

}  // namespace ntg
