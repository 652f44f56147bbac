#include "ntgaps/scan.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace ntg {

void check_range(const ScanRange& r) {
    if (r.lo < 2) throw domain_error("scan range: lo must be >= 2");
    if (r.hi > (u64{1} << 63)) throw domain_error("scan range: hi must be <= 2^63");
    if (r.lo > r.hi) throw domain_error("scan range: lo > hi");
}

u64 clamp_lo(RunKind kind, u64 lo) {
    u64 floor = (kind == RunKind::ec_cyclic || kind == RunKind::ss_cyclic) ? 5 : 3;
    return std::max(lo, floor);
}

ScanEngine::ScanEngine(RunKind kind, Predicate pred, u64 m, bool consecutive,
                       const ScanOptions& opts)
    : kind_(kind), pred_(std::move(pred)), m_(m), consecutive_(consecutive), opts_(opts) {
    if (m == 0) throw domain_error("scan: m must be >= 1");
}

void ScanEngine::feed(u64 p, std::optional<Certificate> cert, const Sink& sink) {
    if (!cert) {
        if (consecutive_) {
            state_.primes.clear();
            state_.certificates.clear();
        }
        return;
    }
    state_.primes.push_back(p);
    state_.certificates.push_back(std::move(*cert));
    if (state_.primes.size() < m_) return;

    RunRecord rec;
    rec.kind = kind_;
    rec.primes = state_.primes;
    rec.certificates = state_.certificates;
    rec.gap = rec.primes.back() - rec.primes.front();
    rec.consecutive = consecutive_;

    ++state_.run_count;
    if (!state_.min_gap || rec.gap < *state_.min_gap) state_.min_gap = rec.gap;
    if (state_.run_count <= opts_.max_records)
        sink(rec);
    else
        state_.truncated = true;

    state_.primes.erase(state_.primes.begin());
    state_.certificates.erase(state_.certificates.begin());
}

void ScanEngine::process(u64 lo, u64 hi, const Sink& sink) {
    for (u64 seg = lo; seg <= hi; ) {
        u64 seg_hi = std::min(hi, seg + kSieveSegment - 1);
        std::vector<u64> primes = primes_in(seg, seg_hi);
        std::vector<std::optional<Certificate>> results(primes.size());

        unsigned workers = std::max(1u, opts_.workers);
        if (workers == 1 || primes.size() < 2 * workers) {
            for (std::size_t i = 0; i < primes.size(); ++i) results[i] = pred_(primes[i]);
        } else {
            std::vector<std::thread> pool;
            std::size_t per = (primes.size() + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                std::size_t a = w * per, b = std::min(primes.size(), a + per);
                if (a >= b) break;
                pool.emplace_back([&, a, b] {
                    for (std::size_t i = a; i < b; ++i) results[i] = pred_(primes[i]);
                });
            }
            for (auto& t : pool) t.join();
        }

        for (std::size_t i = 0; i < primes.size(); ++i) feed(primes[i], std::move(results[i]), sink);
        state_.last_scanned = seg_hi;
        if (seg_hi == hi) break;
        seg = seg_hi + 1;
    }
}

ScanEngine::Predicate pr_predicate(QSet q) {
    return [q = std::move(q)](u64 p) -> std::optional<Certificate> {
        for (i64 qi : q.elements()) {
            if (qi % static_cast<i64>(p) == 0) continue;
            u64 ord = mult_order(qi, p);
            if (ord == p - 1) return Certificate{PrCert{qi, ord}};
        }
        return std::nullopt;
    };
}

ScanEngine::Predicate ec_cyclic_predicate(CurveQ E, ECOptions ec) {
    return [E, ec](u64 p) -> std::optional<Certificate> {
        CurveModP C;
        try {
            C = reduce_mod_p(E, p);
        } catch (const bad_reduction_error&) {
            return std::nullopt;  // cyclicity undefined: breaks the run
        }
        GroupStructure g = group_structure(C, ec);
        if (g.d != 1) return std::nullopt;
        return Certificate{EcCert{g.d, g.e}};
    };
}

ScanEngine::Predicate ap_predicate(u64 u, u64 q) {
    return [u, q](u64 p) -> std::optional<Certificate> {
        if (p % q != u % q) return std::nullopt;
        return Certificate{ApCert{u % q, q}};
    };
}

ScanEngine::Predicate ss_cyclic_predicate(CurveQ E, FieldDescriptor M, ECOptions ec) {
    if (!E.cm_discriminant) throw domain_error("ss_cyclic: curve carries no CM discriminant");
    FieldDescriptor F = FieldDescriptor::quadratic(*E.cm_discriminant);
    return [E, M = std::move(M), F = std::move(F), ec](u64 p) -> std::optional<Certificate> {
        CurveModP C;
        try {
            C = reduce_mod_p(E, p);
        } catch (const bad_reduction_error&) {
            return std::nullopt;
        }
        if (splitting_in_M(p, F) != Splitting::inert) return std::nullopt;
        try {
            if (splitting_in_M(p, M) != Splitting::inert) return std::nullopt;
        } catch (const domain_error&) {
            return std::nullopt;  // p divides the conductor of M
        }
        GroupStructure g = group_structure(C, ec);
        if (g.a != 0 || g.d != 1) return std::nullopt;
        return Certificate{SsCert{g.a, g.d, g.e}};
    };
}

u64 scan_modulus(RunKind kind, const QSet* q, const CurveQ* E, u64 ap_modulus,
                 const FieldDescriptor* M) {
    switch (kind) {
        case RunKind::primitive_root:
            return multiquadratic_conductor(*q);
        case RunKind::ec_cyclic:
            return rad_disc_model(*E);
        case RunKind::progression:
            return ap_modulus;
        case RunKind::ss_cyclic:
            return checked_mul_u64(quadratic_field_conductor(*E->cm_discriminant),
                                   M->conductor());
    }
    throw domain_error("scan_modulus: unknown kind");
}

namespace {

ScanResult run_scan(RunKind kind, ScanEngine::Predicate pred, u64 m, bool consecutive,
                    ScanRange range, const ScanOptions& opts, u64 modulus) {
    check_range(range);
    ScanEngine engine(kind, std::move(pred), m, consecutive, opts);
    ScanResult out;
    u64 lo = clamp_lo(kind, range.lo);
    if (lo <= range.hi)
        engine.process(lo, range.hi, [&](const RunRecord& r) { out.records.push_back(r); });

    const AssemblerState& st = engine.state();
    out.summary.run_count = st.run_count;
    out.summary.min_gap = st.min_gap;
    out.summary.modulus = modulus;
    if (st.min_gap && modulus > 0)
        out.summary.ratio = static_cast<double>(*st.min_gap) / static_cast<double>(modulus);
    out.summary.truncated = st.truncated;
    out.summary.last_prime = st.last_scanned;
    return out;
}

}  // namespace

ScanResult scan_pr_runs(const QSet& q, u64 m, ScanRange range, const ScanOptions& opts) {
    return run_scan(RunKind::primitive_root, pr_predicate(q), m, true, range, opts,
                    scan_modulus(RunKind::primitive_root, &q, nullptr, 0, nullptr));
}

ScanResult scan_cyclic_runs(const CurveQ& E, u64 m, ScanRange range, const ScanOptions& opts) {
    return run_scan(RunKind::ec_cyclic, ec_cyclic_predicate(E, opts.ec), m, true, range, opts,
                    scan_modulus(RunKind::ec_cyclic, nullptr, &E, 0, nullptr));
}

ScanResult scan_ap_runs(u64 u, u64 q, u64 m, ScanRange range, const ScanOptions& opts) {
    if (q == 0) throw domain_error("scan_ap_runs: modulus must be positive");
    if (std::gcd(u, q) != 1) throw domain_error("scan_ap_runs: residue not coprime to modulus");
    return run_scan(RunKind::progression, ap_predicate(u, q), m, true, range, opts, q);
}

ScanResult scan_ss_cyclic(const CurveQ& E, const FieldDescriptor& M, u64 m, ScanRange range,
                          const ScanOptions& opts) {
    return run_scan(RunKind::ss_cyclic, ss_cyclic_predicate(E, M, opts.ec), m,
                    opts.require_consecutive, range, opts,
                    scan_modulus(RunKind::ss_cyclic, nullptr, &E, 0, &M));
}

}  // namespace ntg
