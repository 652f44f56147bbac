#include "ntgaps/ecurve.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>

namespace ntg {

namespace {

struct Pt {
    u64 x = 0;
    u64 y = 0;
    bool inf = true;
};

bool same(const Pt& P, const Pt& Q) {
    if (P.inf || Q.inf) return P.inf == Q.inf;
    return P.x == Q.x && P.y == Q.y;
}

u64 inv_mod(u64 a, u64 p) { return powmod(a, p - 2, p); }

Pt ec_add(const CurveModP& C, const Pt& P, const Pt& Q) {
    const u64 p = C.p;
    if (P.inf) return Q;
    if (Q.inf) return P;
    if (P.x == Q.x) {
        if ((P.y + Q.y) % p == 0) return {};  // vertical line
        // doubling
        u64 num = (mulmod(3, mulmod(P.x, P.x, p), p) + C.A) % p;
        u64 lam = mulmod(num, inv_mod(mulmod(2, P.y, p), p), p);
        u64 x3 = (mulmod(lam, lam, p) + 2 * p - P.x - Q.x) % p;
        u64 y3 = (mulmod(lam, (P.x + p - x3) % p, p) + p - P.y) % p;
        return {x3, y3, false};
    }
    u64 lam = mulmod((Q.y + p - P.y) % p, inv_mod((Q.x + p - P.x) % p, p), p);
    u64 x3 = (mulmod(lam, lam, p) + 2 * p - P.x - Q.x) % p;
    u64 y3 = (mulmod(lam, (P.x + p - x3) % p, p) + p - P.y) % p;
    return {x3, y3, false};
}

Pt ec_mul(const CurveModP& C, u64 k, Pt P) {
    Pt R;
    while (k) {
        if (k & 1) R = ec_add(C, R, P);
        P = ec_add(C, P, P);
        k >>= 1;
    }
    return R;
}

u64 curve_rhs(const CurveModP& C, u64 x) {
    u64 t = mulmod(x, x, C.p);
    t = mulmod(t, x, C.p);
    t = (t + mulmod(C.A, x, C.p)) % C.p;
    return (t + C.B) % C.p;
}

// Order of P given the factored group order N.
u64 point_order(const CurveModP& C, const Pt& P, u64 N, const Factorization& nf) {
    u64 t = N;
    for (auto [ell, e] : nf.factors) {
        while (t % ell == 0 && ec_mul(C, t / ell, P).inf) t /= ell;
    }
    return t;
}

// Number of roots of x^3 + Ax + B mod p, via gcd(x^p - x, cubic) computed
// with arithmetic in F_p[x]/(cubic). Good reduction makes the cubic
// squarefree, so the gcd degree is the root count.
int cubic_root_count(const CurveModP& C) {
    const u64 p = C.p;
    // multiply two degree-<3 polynomials modulo x^3 + Ax + B
    auto mulpoly = [&](const std::array<u64, 3>& f, const std::array<u64, 3>& g) {
        u64 c[5] = {0, 0, 0, 0, 0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c[i + j] = (c[i + j] + mulmod(f[i], g[j], p)) % p;
        u64 nA = (p - C.A % p) % p, nB = (p - C.B % p) % p;
        // x^4 = -A x^2 - B x
        c[2] = (c[2] + mulmod(c[4], nA, p)) % p;
        c[1] = (c[1] + mulmod(c[4], nB, p)) % p;
        // x^3 = -A x - B
        c[1] = (c[1] + mulmod(c[3], nA, p)) % p;
        c[0] = (c[0] + mulmod(c[3], nB, p)) % p;
        return std::array<u64, 3>{c[0], c[1], c[2]};
    };

    std::array<u64, 3> result{1, 0, 0}, base{0, 1, 0};
    u64 e = p;
    while (e) {
        if (e & 1) result = mulpoly(result, base);
        base = mulpoly(base, base);
        e >>= 1;
    }
    // x^p - x
    std::array<u64, 3> f = result;
    f[1] = (f[1] + p - 1) % p;

    // gcd(cubic, f) degree: do one division of the cubic by f if deg f >= 1,
    // then Euclid on small degrees.
    auto deg = [&](const std::array<u64, 3>& g) {
        if (g[2]) return 2;
        if (g[1]) return 1;
        if (g[0]) return 0;
        return -1;
    };
    // represent cubic as coefficients [B, A, 0, 1]
    std::array<u64, 4> cubic{C.B % p, C.A % p, 0, 1};
    // reduce cubic mod f
    std::array<u64, 3> r{};
    int df = deg(f);
    if (df == -1) return 3;  // x^p = x identically: all residues are roots
    {
        std::array<u64, 4> num = cubic;
        u64 lead_inv = inv_mod(f[df], p);
        for (int d = 3; d >= df; --d) {
            if (num[d] == 0) continue;
            u64 q = mulmod(num[d], lead_inv, p);
            for (int i = 0; i <= df; ++i)
                num[d - df + i] = (num[d - df + i] + p - mulmod(q, f[i], p)) % p;
        }
        r = {num[0], num[1], num[2] % p};
    }
    std::array<u64, 3> a = f, b = r;
    while (deg(b) >= 0) {
        // a mod b
        int db = deg(b);
        u64 lead_inv = inv_mod(b[db], p);
        std::array<u64, 3> num = a;
        for (int d = 2; d >= db; --d) {
            if (num[d] == 0) continue;
            u64 q = mulmod(num[d], lead_inv, p);
            for (int i = 0; i <= db; ++i)
                num[d - db + i] = (num[d - db + i] + p - mulmod(q, b[i], p)) % p;
        }
        a = b;
        b = num;
    }
    return deg(a) == -1 ? 3 : deg(a);  // unreachable -1 guard
}

u64 hasse_halfwidth(u64 p) { return 2 * isqrt(p) + 2; }

u64 group_order_enumerate(const CurveModP& C) {
    const u64 p = C.p;
    std::vector<int8_t> chi(p, -1);
    chi[0] = 0;
    for (u64 x = 1; x <= p / 2; ++x) chi[mulmod(x, x, p)] = 1;
    u64 n = p + 1;
    i64 s = 0;
    for (u64 x = 0; x < p; ++x) s += chi[curve_rhs(C, x)];
    return static_cast<u64>(static_cast<i64>(n) + s);
}

Pt random_point(const CurveModP& C, std::mt19937_64& rng) {
    for (;;) {
        u64 x = rng() % C.p;
        u64 t = curve_rhs(C, x);
        if (t == 0) return {x, 0, false};
        auto y = sqrt_mod(t, C.p);
        if (y) return {x, *y, false};
    }
}

// All k in [lo, hi] with kP = O, via baby-step giant-step.
std::vector<u64> kill_multiples(const CurveModP& C, const Pt& P, u64 lo, u64 hi) {
    const u64 p = C.p;
    u64 width = hi - lo + 1;
    u64 m = isqrt(width) + 1;
    std::map<u64, std::vector<std::pair<u64, u64>>> baby;  // x -> (j, y)
    Pt Q;
    std::vector<u64> found;
    for (u64 j = 0; j < m; ++j) {
        if (j > 0 && Q.inf) break;  // ord(P) = j handled through giant matches anyway
        if (j > 0) baby[Q.x].push_back({j, Q.y});
        Q = ec_add(C, Q, P);
    }
    Pt base = ec_mul(C, lo, P);
    Pt step = ec_mul(C, m, P);
    for (u64 i = 0; lo + i * m <= hi + m; ++i) {
        // k = lo + i*m + j with (lo+im)P = -jP
        u64 kbase = lo + i * m;
        if (base.inf && kbase >= lo && kbase <= hi) found.push_back(kbase);
        if (!base.inf) {
            auto it = baby.find(base.x);
            if (it != baby.end()) {
                for (auto [j, y] : it->second) {
                    if ((base.y + y) % p == 0) {
                        u64 k = kbase + j;
                        if (k >= lo && k <= hi) found.push_back(k);
                    }
                }
            }
        }
        base = ec_add(C, base, step);
        if (kbase > hi) break;
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

u64 exact_point_order_from_multiple(const CurveModP& C, const Pt& P, u64 k) {
    u64 ord = k;
    for (auto [ell, e] : factorize(static_cast<i64>(k)).factors)
        while (ord % ell == 0 && ec_mul(C, ord / ell, P).inf) ord /= ell;
    return ord;
}

u64 group_order_bsgs(const CurveModP& C, const ECOptions& opts) {
    const u64 p = C.p;
    const u64 h = hasse_halfwidth(p);
    const u64 lo = p + 1 - h, hi = p + 1 + h;
    std::mt19937_64 rng(opts.seed ^ p);

    // quadratic twist: its order N' satisfies N + N' = 2p + 2, and by
    // Mestre at least one of the two exponents pins its order in the
    // Hasse interval (p > 457)
    u64 g = 2;
    while (jacobi(static_cast<i64>(g), p) != -1) ++g;
    CurveModP T{p, mulmod(C.A, mulmod(g, g, p), p), mulmod(C.B, mulmod(mulmod(g, g, p), g, p), p)};

    u64 LC = 1, LT = 1;
    auto step = [&](const CurveModP& curve, u64& L) -> std::optional<u64> {
        Pt P = random_point(curve, rng);
        auto kills = kill_multiples(curve, P, lo, hi);
        if (kills.empty()) throw resource_error("bsgs: no annihilator found in Hasse interval");
        L = std::lcm(L, exact_point_order_from_multiple(curve, P, kills.front()));
        u64 first = (lo + L - 1) / L * L;
        if (first <= hi && first + L > hi) return first;
        return std::nullopt;
    };
    for (int tries = 0; tries < 64; ++tries) {
        if (auto n = step(C, LC)) return *n;
        if (auto n = step(T, LT)) return 2 * p + 2 - *n;
    }
    throw resource_error("bsgs: group order not pinned after 64 points");
}

GroupStructure finish_structure(const CurveModP& C, u64 N, u64 d, u64 e) {
    i64 a = static_cast<i64>(C.p) + 1 - static_cast<i64>(N);
    return {N, d, e, a};
}

GroupStructure structure_enumerate(const CurveModP& C) {
    const u64 p = C.p;
    const u64 N = group_order_enumerate(C);
    Factorization nf = factorize(static_cast<i64>(N));

    bool maybe_noncyclic = false;
    for (auto [ell, ex] : nf.factors)
        if (ex >= 2 && (p - 1) % ell == 0) maybe_noncyclic = true;
    if (!maybe_noncyclic) return finish_structure(C, N, 1, N);

    int r2 = cubic_root_count(C);

    // y-value table for point enumeration: some square root of each residue.
    std::vector<u64> sq(p, p);
    for (u64 y = 0; y + y <= p; ++y) sq[mulmod(y, y, p)] = y;

    u64 e_acc = 1;
    for (u64 x = 0; x < p; ++x) {
        u64 t = curve_rhs(C, x);
        Pt P;
        if (t == 0) {
            P = {x, 0, false};
        } else if (sq[t] != p) {
            P = {x, sq[t], false};  // (x, -y) has the same order
        } else {
            continue;
        }
        if (e_acc > 1 && ec_mul(C, e_acc, P).inf) continue;
        e_acc = std::lcm(e_acc, point_order(C, P, N, nf));
        u64 dc = N / e_acc;
        if (dc == 1) break;
        if (dc == 2 && r2 == 3) break;  // full 2-torsion pins d = 2
    }
    return finish_structure(C, N, N / e_acc, e_acc);
}

GroupStructure structure_bsgs(const CurveModP& C, const ECOptions& opts) {
    const u64 p = C.p;
    const u64 N = group_order_bsgs(C, opts);
    Factorization nf = factorize(static_cast<i64>(N));

    bool maybe_noncyclic = false;
    for (auto [ell, ex] : nf.factors)
        if (ex >= 2 && (p - 1) % ell == 0) maybe_noncyclic = true;
    if (!maybe_noncyclic) return finish_structure(C, N, 1, N);

    int r2 = cubic_root_count(C);
    std::mt19937_64 rng(opts.seed ^ (p * 0x5851f42d4c957f2dull));
    u64 e_acc = 1;
    for (int i = 0; i < 32; ++i) {
        Pt P = random_point(C, rng);
        if (e_acc > 1 && ec_mul(C, e_acc, P).inf) continue;
        e_acc = std::lcm(e_acc, point_order(C, P, N, nf));
        u64 dc = N / e_acc;
        if (dc == 1) break;
        if (dc == 2 && r2 == 3) break;
    }
    return finish_structure(C, N, N / e_acc, e_acc);
}

}  // namespace

i64 CurveQ::disc_model() const {
    i64 a3 = checked_mul(checked_mul(A, A), A);
    i64 b2 = checked_mul(B, B);
    return checked_mul(-16, checked_add(checked_mul(4, a3), checked_mul(27, b2)));
}

CurveModP reduce_mod_p(const CurveQ& E, u64 p) {
    if (p < 5) throw domain_error("reduce_mod_p: primes below 5 are unsupported");
    if (!is_prime(p)) throw domain_error("reduce_mod_p: p must be prime");
    i64 disc = E.disc_model();
    if (disc % static_cast<i64>(p) == 0)
        throw bad_reduction_error("reduce_mod_p: p divides the model discriminant");
    auto red = [p](i64 v) {
        i64 r = v % static_cast<i64>(p);
        if (r < 0) r += static_cast<i64>(p);
        return static_cast<u64>(r);
    };
    return {p, red(E.A), red(E.B)};
}

u64 group_order(const CurveModP& C, const ECOptions& opts) {
    if (C.p < opts.enumeration_limit) return group_order_enumerate(C);
    if (C.p < (u64{1} << 32) && opts.enable_bsgs) return group_order_bsgs(C, opts);
    throw resource_error("group_order: p beyond the enabled tiers");
}

GroupStructure group_structure(const CurveModP& C, const ECOptions& opts) {
    if (C.p < opts.enumeration_limit) return structure_enumerate(C);
    if (C.p < (u64{1} << 32) && opts.enable_bsgs) return structure_bsgs(C, opts);
    throw resource_error("group_structure: p beyond the enabled tiers");
}

bool is_cyclic_ec(const CurveModP& C, const ECOptions& opts) {
    return group_structure(C, opts).d == 1;
}

bool is_supersingular(const CurveQ& E, u64 p, const ECOptions& opts) {
    CurveModP C = reduce_mod_p(E, p);
    return group_order(C, opts) == p + 1;
}

bool splits_completely_torsion(const CurveModP& C, u64 ell, const ECOptions& opts) {
    if (!is_prime(ell)) throw domain_error("splits_completely_torsion: ell must be prime");
    if (ell == C.p) throw domain_error("splits_completely_torsion: ell = p is excluded");
    if (ell > isqrt(C.p) + 1) return false;      // full ell-torsion needs ell <= sqrt(p) + 1
    if ((C.p - 1) % ell != 0) return false;      // Weil pairing constraint
    return group_structure(C, opts).d % ell == 0;
}

std::optional<NormWitness> cm_norm_witness(u64 p, i64 field_disc, u64 ell) {
    if (field_disc >= 0) throw domain_error("cm_norm_witness: discriminant must be negative");
    i64 m4 = ((field_disc % 4) + 4) % 4;
    bool fundamental;
    if (m4 == 1) {
        fundamental = squarefree_part(field_disc) == field_disc;
    } else if (m4 == 0) {
        i64 q = field_disc / 4;
        i64 qm = ((q % 4) + 4) % 4;
        fundamental = squarefree_part(q) == q && (qm == 2 || qm == 3);
    } else {
        fundamental = false;
    }
    if (!fundamental) throw domain_error("cm_norm_witness: not a fundamental discriminant");
    if (ell == p) throw domain_error("cm_norm_witness: ell = p is excluded");

    const i64 absd = -field_disc;
    auto norm = [&](i64 x, i64 y) -> i128 {
        if (m4 == 0) return static_cast<i128>(x) * x + static_cast<i128>(absd / 4) * y * y;
        return static_cast<i128>(x) * x + static_cast<i128>(x) * y +
               static_cast<i128>((1 - field_disc) / 4) * y * y;
    };
    auto congruent = [&](i64 v, i64 target) {
        i64 r = (v - target) % static_cast<i64>(ell);
        return r == 0;
    };

    const i64 bound =
        static_cast<i64>(isqrt(4 * p / static_cast<u64>(absd)) + 1 + ell);
    for (i64 x = -bound; x <= bound; ++x) {
        for (i64 ay = 0; ay <= bound; ++ay) {
            for (int s = 0; s < (ay == 0 ? 1 : 2); ++s) {
                i64 y = s == 0 ? ay : -ay;
                if (norm(x, y) != static_cast<i128>(p)) continue;
                if (congruent(x, 1) && congruent(y, 0)) return NormWitness{x, y, field_disc};
            }
        }
    }
    return std::nullopt;
}

std::vector<std::pair<u64, GroupStructure>> structures_up_to(const CurveQ& E, u64 x,
                                                             const ECOptions& opts) {
    std::vector<std::pair<u64, GroupStructure>> out;
    if (x < 5) return out;
    for (u64 p : primes_in(5, x)) {
        CurveModP C;
        try {
            C = reduce_mod_p(E, p);
        } catch (const bad_reduction_error&) {
            continue;
        }
        out.push_back({p, group_structure(C, opts)});
    }
    return out;
}

u64 duke_census(const CurveQ& E, u64 x, u64 n, const ECOptions& opts) {
    if (n < 2) throw domain_error("duke_census: n must be >= 2");
    if (n > 2 * isqrt(x)) return 0;  // d_p <= 2 sqrt(p)
    u64 count = 0;
    for (auto& [p, g] : structures_up_to(E, x, opts))
        if (g.d % n == 0) ++count;
    return count;
}

u64 rad_disc_model(const CurveQ& E) {
    u64 r = 1;
    for (auto [p, e] : factorize(E.disc_model()).factors) r = checked_mul_u64(r, p);
    return r;
}

}  // namespace ntg
