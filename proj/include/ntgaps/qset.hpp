#pragma once

#include <optional>
#include <vector>

#include "ntgaps/arith.hpp"

namespace ntg {

// A finite set of nonzero integers q_1, ..., q_r with cached squarefree
// parts and the parity (F_2) exponent matrix of the squarefree parts over
// the basis {-1} united with the primes dividing some q_i'.
class QSet {
public:
    explicit QSet(std::vector<i64> elements);

    const std::vector<i64>& elements() const { return elements_; }
    const std::vector<i64>& squarefree_parts() const { return squarefree_parts_; }
    std::size_t size() const { return elements_.size(); }

    // Basis primes for the parity matrix, ascending. Column 0 of a parity
    // row is the sign bit; column 1 + i corresponds to basis_primes()[i].
    const std::vector<u64>& basis_primes() const { return basis_primes_; }
    // Parity row of squarefree_parts()[i], one bool per column.
    const std::vector<bool>& parity_row(std::size_t i) const { return parity_rows_[i]; }

private:
    std::vector<i64> elements_;
    std::vector<i64> squarefree_parts_;
    std::vector<u64> basis_primes_;
    std::vector<std::vector<bool>> parity_rows_;
};

struct IndependenceReport {
    bool independent = false;
    // Nonzero integer relation with prod q_i^{e_i} = 1, present iff dependent.
    std::optional<std::vector<i64>> relation;
};

struct StarReport {
    bool holds = false;
    // Bits (e_0, ..., e_r) with (-3)^{e_0} prod q_i^{e_i} a square and an
    // odd bit sum, present iff the condition fails.
    std::optional<std::vector<int>> witness;
};

IndependenceReport is_mult_independent(const QSet& q);

StarReport check_star(const QSet& q);

// Order of the subgroup of F_p^x generated by the reductions of all q_i.
u64 subgroup_order(const QSet& q, u64 p);

// All primes p <= search_bound, p not dividing prod q_i, whose generated
// subgroup has order <= Y. Uses the pigeonhole route: enumerate exponent
// boxes |e_i| <= floor(Y^{1/r}), factor the numerators of
// q_1^{e_1}...q_r^{e_r} - 1, then confirm with the direct order test.
std::vector<u64> small_subgroup_census(const QSet& q, u64 Y, u64 search_bound);

// First element (in input order) that is a primitive root mod p.
std::optional<i64> primitive_root_in(const QSet& q, u64 p);

}  // namespace ntg
