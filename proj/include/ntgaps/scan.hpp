#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "ntgaps/congruence.hpp"
#include "ntgaps/ecurve.hpp"
#include "ntgaps/qset.hpp"

namespace ntg {

enum class RunKind { primitive_root, ec_cyclic, progression, ss_cyclic };

// Per-prime evidence; every certificate re-verifies against its prime.
struct PrCert {
    i64 q = 0;       // the chosen element
    u64 order = 0;   // mult_order(q, p), equal to p - 1
    friend bool operator==(const PrCert&, const PrCert&) = default;
};
struct EcCert {
    u64 d = 0;
    u64 e = 0;
    friend bool operator==(const EcCert&, const EcCert&) = default;
};
struct ApCert {
    u64 u = 0;
    u64 q = 0;       // p = u mod q
    friend bool operator==(const ApCert&, const ApCert&) = default;
};
struct SsCert {
    i64 a = 0;       // trace, equal to 0
    u64 d = 0;       // equal to 1
    u64 e = 0;
    friend bool operator==(const SsCert&, const SsCert&) = default;
};
using Certificate = std::variant<PrCert, EcCert, ApCert, SsCert>;

struct RunRecord {
    RunKind kind = RunKind::primitive_root;
    std::vector<u64> primes;           // strictly increasing, length m
    u64 gap = 0;                       // last - first
    bool consecutive = true;           // no prime strictly between listed ones
    std::vector<Certificate> certificates;
    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ScanRange {
    u64 lo = 0;
    u64 hi = 0;
};
void check_range(const ScanRange& r);

struct ScanOptions {
    u64 max_records = 10'000;
    unsigned workers = 1;
    bool require_consecutive = false;  // only consulted by scan_ss_cyclic
    ECOptions ec;
};

struct ScanSummary {
    u64 run_count = 0;                 // windows emitted (pre-truncation total)
    std::optional<u64> min_gap;
    u64 modulus = 0;                   // conductor / rad(disc) / progression modulus
    std::optional<double> ratio;       // min_gap / modulus
    bool truncated = false;
    u64 last_prime = 0;                // highest fully scanned number
};

struct ScanResult {
    std::vector<RunRecord> records;
    ScanSummary summary;
};

// Serializable scanner state: the pending window tail plus the summary
// accumulators, enough to resume a scan byte-identically.
struct AssemblerState {
    std::vector<u64> primes;
    std::vector<Certificate> certificates;
    u64 run_count = 0;
    std::optional<u64> min_gap;
    bool truncated = false;
    u64 last_scanned = 0;
};

// Drives one scan incrementally. The predicate maps a prime to a
// certificate (nullopt = does not qualify). In consecutive mode a failing
// prime resets the window; in subsequence mode it is skipped. Worker
// parallelism evaluates predicates over chunks of primes; assembly is
// serial, so output is independent of the worker count.
class ScanEngine {
public:
    using Predicate = std::function<std::optional<Certificate>(u64)>;
    using Sink = std::function<void(const RunRecord&)>;

    ScanEngine(RunKind kind, Predicate pred, u64 m, bool consecutive, const ScanOptions& opts);

    // Scan primes in [lo, hi] inclusive, emitting windows to sink.
    void process(u64 lo, u64 hi, const Sink& sink);

    AssemblerState& state() { return state_; }
    const AssemblerState& state() const { return state_; }

private:
    void feed(u64 p, std::optional<Certificate> cert, const Sink& sink);

    RunKind kind_;
    Predicate pred_;
    u64 m_;
    bool consecutive_;
    ScanOptions opts_;
    AssemblerState state_;
};

ScanResult scan_pr_runs(const QSet& q, u64 m, ScanRange range, const ScanOptions& opts = {});
ScanResult scan_cyclic_runs(const CurveQ& E, u64 m, ScanRange range, const ScanOptions& opts = {});
ScanResult scan_ap_runs(u64 u, u64 q, u64 m, ScanRange range, const ScanOptions& opts = {});
ScanResult scan_ss_cyclic(const CurveQ& E, const FieldDescriptor& M, u64 m, ScanRange range,
                          const ScanOptions& opts = {});

// Predicate factories shared with the CLI so resumed scans rebuild the
// exact same closures.
ScanEngine::Predicate pr_predicate(QSet q);
ScanEngine::Predicate ec_cyclic_predicate(CurveQ E, ECOptions ec);
ScanEngine::Predicate ap_predicate(u64 u, u64 q);
ScanEngine::Predicate ss_cyclic_predicate(CurveQ E, FieldDescriptor M, ECOptions ec);

// Effective lower end of a scan: primitive-root and progression scans
// start at 3, curve scans at 5.
u64 clamp_lo(RunKind kind, u64 lo);

u64 scan_modulus(RunKind kind, const QSet* q, const CurveQ* E, u64 ap_modulus,
                 const FieldDescriptor* M);

}  // namespace ntg
