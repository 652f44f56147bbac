#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace ntg {

// Invalid argument or violated precondition. The CLI maps these to exit 2.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A bounded search ran out of room; the caller should retry with a larger
// bound. Mapped to exit 3.
struct search_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Work refused because it would exceed a configured cap (segment size,
// overflow-checked arithmetic, enumeration tier). Mapped to exit 3.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A congruence system with no solution; carries one conflicting pair.
struct crt_inconsistent : domain_error {
    std::pair<std::int64_t, std::uint64_t> first_congruence;
    std::pair<std::int64_t, std::uint64_t> second_congruence;

    crt_inconsistent(std::pair<std::int64_t, std::uint64_t> a,
                     std::pair<std::int64_t, std::uint64_t> b)
        : domain_error("crt: incompatible congruences " + std::to_string(a.first) + " mod " +
                       std::to_string(a.second) + " vs " + std::to_string(b.first) + " mod " +
                       std::to_string(b.second)),
          first_congruence(a),
          second_congruence(b) {}
};

}  // namespace ntg
