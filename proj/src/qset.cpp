#include "ntgaps/qset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace ntg {

namespace {

i64 gcd_i64(i64 a, i64 b) {
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

i128 abs_i128(i128 x) { return x < 0 ? -x : x; }

i128 checked_mul_i128(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw resource_error("exponent-lattice overflow");
    return r;
}

}  // namespace

QSet::QSet(std::vector<i64> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw domain_error("QSet: needs at least one element");
    std::set<i64> seen;
    for (i64 q : elements_) {
        if (q == 0) throw domain_error("QSet: elements must be nonzero");
        if (!seen.insert(q).second) throw domain_error("QSet: elements must be distinct");
    }
    std::set<u64> primes;
    for (i64 q : elements_) {
        squarefree_parts_.push_back(squarefree_part(q));
        for (auto [p, e] : factorize(squarefree_parts_.back()).factors) primes.insert(p);
    }
    basis_primes_.assign(primes.begin(), primes.end());
    for (i64 qp : squarefree_parts_) {
        std::vector<bool> row(basis_primes_.size() + 1, false);
        row[0] = qp < 0;
        for (auto [p, e] : factorize(qp).factors) {
            auto it = std::lower_bound(basis_primes_.begin(), basis_primes_.end(), p);
            row[1 + static_cast<std::size_t>(it - basis_primes_.begin())] = true;
        }
        parity_rows_.push_back(std::move(row));
    }
}

IndependenceReport is_mult_independent(const QSet& q) {
    const std::size_t r = q.size();
    // Full integer exponent vectors of |q_i| over the union of their primes;
    // the sign only matters mod 2 and is handled at the end.
    std::set<u64> primes;
    std::vector<Factorization> facs;
    for (i64 e : q.elements()) {
        facs.push_back(factorize(e));
        for (auto [p, ex] : facs.back().factors) primes.insert(p);
    }
    std::vector<u64> cols(primes.begin(), primes.end());
    const std::size_t k = cols.size();

    std::vector<std::vector<i128>> M(r, std::vector<i128>(k, 0));
    std::vector<std::vector<i128>> U(r, std::vector<i128>(r, 0));
    for (std::size_t i = 0; i < r; ++i) {
        U[i][i] = 1;
        for (auto [p, ex] : facs[i].factors) {
            auto it = std::lower_bound(cols.begin(), cols.end(), p);
            M[i][static_cast<std::size_t>(it - cols.begin())] = ex;
        }
    }

    auto row_gcd_reduce = [&](std::size_t i) {
        i128 g = 0;
        auto acc = [&g](i128 x) {
            x = abs_i128(x);
            while (x) {
                i128 t = g % x;
                g = x;
                x = t;
            }
        };
        for (i128 x : M[i]) acc(x);
        for (i128 x : U[i]) acc(x);
        if (g > 1) {
            for (i128& x : M[i]) x /= g;
            for (i128& x : U[i]) x /= g;
        }
    };

    std::vector<bool> used(r, false);
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t pivot = r;
        for (std::size_t i = 0; i < r; ++i)
            if (!used[i] && M[i][c] != 0) {
                pivot = i;
                break;
            }
        if (pivot == r) continue;
        used[pivot] = true;
        for (std::size_t i = 0; i < r; ++i) {
            if (used[i] || M[i][c] == 0) continue;
            i128 a = M[pivot][c], b = M[i][c];
            for (std::size_t j = 0; j < k; ++j)
                M[i][j] = checked_mul_i128(M[i][j], a) - checked_mul_i128(M[pivot][j], b);
            for (std::size_t j = 0; j < r; ++j)
                U[i][j] = checked_mul_i128(U[i][j], a) - checked_mul_i128(U[pivot][j], b);
            row_gcd_reduce(i);
        }
    }

    for (std::size_t i = 0; i < r; ++i) {
        if (used[i]) continue;
        bool zero = true;
        for (i128 x : M[i]) zero = zero && x == 0;
        if (!zero) continue;
        std::vector<i64> rel(r);
        for (std::size_t j = 0; j < r; ++j) {
            if (abs_i128(U[i][j]) > INT64_MAX) throw resource_error("relation coefficients overflow");
            rel[j] = static_cast<i64>(U[i][j]);
        }
        // The prime exponents cancel; if the signed product is -1, squaring
        // the relation fixes it.
        int sign_parity = 0;
        for (std::size_t j = 0; j < r; ++j)
            if (q.elements()[j] < 0 && rel[j] % 2 != 0) sign_parity ^= 1;
        if (sign_parity) for (i64& e : rel) e = checked_mul(e, 2);
        i64 g = 0;
        for (i64 e : rel) g = gcd_i64(g, e);
        if (g > 1 && sign_parity == 0) {
            // Keep the relation primitive when the sign allows it.
            bool ok = true;
            for (i64 e : rel) ok = ok && e % g == 0;
            if (ok) {
                std::vector<i64> cand(rel);
                for (i64& e : cand) e /= g;
                int sp = 0;
                for (std::size_t j = 0; j < r; ++j)
                    if (q.elements()[j] < 0 && cand[j] % 2 != 0) sp ^= 1;
                if (sp == 0) rel = cand;
            }
        }
        // Deterministic orientation: first nonzero coefficient positive.
        for (i64 e : rel) {
            if (e == 0) continue;
            if (e < 0) for (i64& x : rel) x = -x;
            break;
        }
        return {false, rel};
    }
    return {true, std::nullopt};
}

StarReport check_star(const QSet& q) {
    const std::size_t r = q.size();
    // Columns: sign, then the primes of the q_i' together with 3 (for -3).
    std::set<u64> primes(q.basis_primes().begin(), q.basis_primes().end());
    primes.insert(3);
    std::vector<u64> cols(primes.begin(), primes.end());
    auto col_of = [&](u64 p) {
        return 1 + static_cast<std::size_t>(
                       std::lower_bound(cols.begin(), cols.end(), p) - cols.begin());
    };

    const std::size_t ncols = cols.size() + 1;
    std::vector<std::vector<bool>> rows(r + 1, std::vector<bool>(ncols, false));
    rows[0][0] = true;          // sign of -3
    rows[0][col_of(3)] = true;
    for (std::size_t i = 0; i < r; ++i) {
        const auto& pr = q.parity_row(i);
        rows[i + 1][0] = pr[0];
        for (std::size_t j = 0; j < q.basis_primes().size(); ++j)
            if (pr[1 + j]) rows[i + 1][col_of(q.basis_primes()[j])] = true;
    }

    // Row reduction with combination tracking; zero rows give the left
    // kernel, on which the all-ones functional must vanish.
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (col, reduced row index)
    std::vector<std::vector<bool>> reduced;
    std::vector<std::vector<int>> combos;
    for (std::size_t i = 0; i <= r; ++i) {
        std::vector<bool> row = rows[i];
        std::vector<int> combo(r + 1, 0);
        combo[i] = 1;
        for (auto [pc, pr] : pivots) {
            if (!row[pc]) continue;
            for (std::size_t c = 0; c < ncols; ++c) row[c] = row[c] ^ reduced[pr][c];
            for (std::size_t j = 0; j <= r; ++j) combo[j] ^= combos[pr][j];
        }
        std::size_t lead = ncols;
        for (std::size_t c = 0; c < ncols; ++c)
            if (row[c]) {
                lead = c;
                break;
            }
        if (lead == ncols) {
            int parity = 0;
            for (int b : combo) parity ^= b;
            if (parity) return {false, combo};
        } else {
            pivots.emplace_back(lead, reduced.size());
            reduced.push_back(std::move(row));
            combos.push_back(std::move(combo));
        }
    }
    return {true, std::nullopt};
}

u64 subgroup_order(const QSet& q, u64 p) {
    // In the cyclic group F_p^x the subgroup generated by a set is the
    // unique subgroup of order lcm of the element orders.
    u64 order = 1;
    for (i64 qi : q.elements()) {
        u64 o = mult_order(qi, p);  // throws domain_error when p | qi
        order = std::lcm(order, o);
    }
    return order;
}

std::vector<u64> small_subgroup_census(const QSet& q, u64 Y, u64 search_bound) {
    if (Y < 1) throw domain_error("census: Y must be >= 1");
    auto ind = is_mult_independent(q);
    if (!ind.independent) throw domain_error("census: q-set is multiplicatively dependent");
    const std::size_t r = q.size();
    if (r > 8) throw resource_error("census: r > 8 exponent boxes are out of reach");

    const i64 B = static_cast<i64>(iroot(Y, static_cast<unsigned>(r)));
    constexpr u128 kNumeratorCap = u128{1} << 62;

    // one orientation of every nonzero exponent vector in [-B, B]^r
    std::vector<std::vector<i64>> box;
    std::vector<i64> e(r, -B);
    auto advance = [&]() {
        for (std::size_t i = 0; i < r; ++i) {
            if (e[i] < B) {
                ++e[i];
                for (std::size_t j = 0; j < i; ++j) e[j] = -B;
                return true;
            }
        }
        return false;
    };
    do {
        i64 lead = 0;
        for (i64 x : e)
            if (x != 0) {
                lead = x;
                break;
            }
        if (lead > 0) box.push_back(e);
    } while (advance());

    std::set<u64> candidates;
    bool overflow = false;
    for (const auto& exps : box) {
        u128 num = 1, den = 1;
        bool negative = false;
        for (std::size_t i = 0; i < r; ++i) {
            u64 base = q.elements()[i] < 0 ? static_cast<u64>(-q.elements()[i])
                                           : static_cast<u64>(q.elements()[i]);
            if (q.elements()[i] < 0 && (exps[i] % 2 != 0)) negative = !negative;
            u128& side = exps[i] >= 0 ? num : den;
            for (i64 j = 0; j < (exps[i] >= 0 ? exps[i] : -exps[i]); ++j) {
                side *= base;
                if (side > kNumeratorCap) overflow = true;
            }
            if (overflow) break;
        }
        if (overflow) break;
        // Reduce the fraction: different q_i may share prime factors.
        u128 a = num, b = den;
        while (b) {
            u128 t = a % b;
            a = b;
            b = t;
        }
        num /= a;
        den /= a;
        u128 diff = negative ? num + den : (num > den ? num - den : den - num);
        if (diff == 0) throw domain_error("census: unexpected multiplicative relation");
        if (diff > kNumeratorCap) {
            overflow = true;
            break;
        }
        for (auto [p, ex] : factorize(static_cast<i64>(diff)).factors) candidates.insert(p);
    }

    if (overflow) {
        // the pigeonhole products no longer fit a machine word; test the
        // same exponent vectors against each prime by modular arithmetic
        candidates.clear();
        for (u64 start = 2; start <= search_bound; start += kSieveSegment) {
            u64 end = std::min(search_bound, start + kSieveSegment - 1);
            for (u64 p : primes_in(start, end)) {
                bool divides = false;
                for (i64 qi : q.elements())
                    if (qi % static_cast<i64>(p) == 0) divides = true;
                if (divides) continue;
                for (const auto& exps : box) {
                    u64 num = 1, den = 1;
                    bool negative = false;
                    for (std::size_t i = 0; i < r; ++i) {
                        i64 qi = q.elements()[i];
                        u64 base = static_cast<u64>(qi < 0 ? -qi : qi) % p;
                        if (qi < 0 && (exps[i] % 2 != 0)) negative = !negative;
                        u64& side = exps[i] >= 0 ? num : den;
                        u64 mag = static_cast<u64>(exps[i] >= 0 ? exps[i] : -exps[i]);
                        side = mulmod(side, powmod(base, mag, p), p);
                    }
                    bool hit = negative ? (num + den) % p == 0 : num == den;
                    if (hit) {
                        candidates.insert(p);
                        break;
                    }
                }
            }
            if (end == search_bound) break;
        }
    }

    std::vector<u64> out;
    for (u64 p : candidates) {
        if (p > search_bound) continue;
        bool divides = false;
        for (i64 qi : q.elements())
            if (qi % static_cast<i64>(p) == 0) divides = true;
        if (divides) continue;
        if (subgroup_order(q, p) <= Y) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<i64> primitive_root_in(const QSet& q, u64 p) {
    if (p == 2 || !is_prime(p)) throw domain_error("primitive_root_in: p must be an odd prime");
    for (i64 qi : q.elements()) {
        if (qi % static_cast<i64>(p) == 0)
            throw domain_error("primitive_root_in: p divides an element");
        if (mult_order(qi, p) == p - 1) return qi;
    }
    return std::nullopt;
}

}  // namespace ntg
