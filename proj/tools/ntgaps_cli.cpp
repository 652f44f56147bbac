// Command-line frontend: one subcommand per public operation, JSON Lines /
// CSV / text output, and checkpoint-resumable scans.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "ntgaps/admissible.hpp"
#include "ntgaps/congruence.hpp"
#include "ntgaps/ecurve.hpp"
#include "ntgaps/io.hpp"
#include "ntgaps/qset.hpp"
#include "ntgaps/scan.hpp"

namespace {

using namespace ntg;

std::vector<i64> parse_list(const std::string& s) {
    std::vector<i64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw domain_error("empty entry in list " + s);
        out.push_back(std::stoll(tok));
    }
    if (out.empty()) throw domain_error("empty list");
    return out;
}

CurveQ parse_curve(const std::string& s, std::optional<i64> cm) {
    auto v = parse_list(s);
    if (v.size() != 2) throw domain_error("--curve expects A,B");
    return CurveQ{v[0], v[1], cm};
}

FieldDescriptor parse_field(std::optional<i64> quadratic, const std::string& cubic) {
    if (quadratic && !cubic.empty())
        throw domain_error("give exactly one of --quadratic and --cubic");
    if (quadratic) return FieldDescriptor::quadratic(*quadratic);
    if (cubic.empty()) throw domain_error("a field descriptor is required");
    auto colon = cubic.find(':');
    if (colon == std::string::npos) throw domain_error("--cubic expects f:g1,g2,...");
    u64 f = std::stoull(cubic.substr(0, colon));
    std::vector<u64> gens;
    for (i64 g : parse_list(cubic.substr(colon + 1))) {
        if (g <= 0) throw domain_error("--cubic generators must be positive");
        gens.push_back(static_cast<u64>(g));
    }
    return FieldDescriptor::cubic(f, gens);
}

void emit(const ojson& j, const std::string& format) {
    if (format == "text") {
        for (auto& [k, v] : j.items()) std::cout << k << ": " << v.dump() << "\n";
    } else {
        std::cout << j.dump() << "\n";
    }
}

ojson class_json(const CongruenceClass& c) {
    ojson j;
    j["u"] = c.u;
    j["v"] = c.v;
    j["T"] = c.T;
    return j;
}

// ---- scan plumbing ---------------------------------------------------------

struct ScanArgs {
    u64 m = 1;
    u64 lo = 0;
    u64 hi = 0;
    std::string format = "json";
    unsigned workers = 1;
    u64 seed = 0x9e3779b97f4a7c15ull;
    std::string checkpoint;
    u64 max_records = 10'000;
    u64 stop_after = 0;  // scan no further than this number, then checkpoint and exit
    bool bsgs = false;
    bool consecutive = false;  // sscyclic only
};

void add_scan_flags(CLI::App* cmd, ScanArgs& a, bool default_lo_five) {
    cmd->add_option("--m", a.m, "window length")->required();
    cmd->add_option("--lo", a.lo, "range start")->default_val(default_lo_five ? 5 : 3);
    cmd->add_option("--hi", a.hi, "range end")->required();
    cmd->add_option("--format", a.format, "json|csv|text")->default_val("json");
    cmd->add_option("--workers", a.workers, "worker threads")->default_val(1);
    cmd->add_option("--seed", a.seed, "seed for randomized subroutines");
    cmd->add_option("--checkpoint", a.checkpoint, "checkpoint file path");
    cmd->add_option("--max-records", a.max_records, "record cap")->default_val(10'000);
    cmd->add_option("--stop-after", a.stop_after,
                    "scan no further than this bound, write the checkpoint, and exit");
    cmd->add_flag("--bsgs", a.bsgs, "enable the large-prime BSGS tier");
}

// Everything identifying the scan except hi / workers / checkpoint path /
// stop-after, so a resume may extend the range.
u64 scan_digest(const std::string& subcommand, const std::string& params, const ScanArgs& a) {
    std::ostringstream os;
    os << subcommand << '|' << params << "|m=" << a.m << "|lo=" << a.lo << "|fmt=" << a.format
       << "|seed=" << a.seed << "|cap=" << a.max_records << "|consecutive=" << a.consecutive;
    return fnv1a(os.str());
}

int run_scan_command(RunKind kind, ScanEngine::Predicate pred, bool consecutive_mode,
                     const ScanArgs& a, u64 modulus, const std::string& digest_params) {
    ScanRange range{a.lo, a.hi};
    check_range(range);
    ScanOptions opts;
    opts.max_records = a.max_records;
    opts.workers = a.workers;
    opts.ec.seed = a.seed;
    opts.ec.enable_bsgs = a.bsgs;

    ScanEngine engine(kind, std::move(pred), a.m, consecutive_mode, opts);
    u64 start = clamp_lo(kind, a.lo);
    bool resumed = false;

    const u64 digest = scan_digest(kind_name(kind), digest_params, a);
    if (!a.checkpoint.empty() && std::filesystem::exists(a.checkpoint)) {
        std::ifstream in(a.checkpoint);
        if (!in) throw std::runtime_error("cannot read checkpoint " + a.checkpoint);
        ojson j = ojson::parse(in);
        Checkpoint cp = checkpoint_from_json(j);
        if (cp.config_digest != digest)
            throw domain_error("checkpoint digest mismatch: refusing to resume");
        engine.state() = cp.state;
        start = std::max(start, cp.last_prime + 1);
        resumed = true;
    }
    if (!a.checkpoint.empty()) {
        // fail before any output if the checkpoint cannot be written later
        std::ofstream probe(a.checkpoint + ".tmp", std::ios::app);
        if (!probe) throw std::runtime_error("cannot write checkpoint " + a.checkpoint + ".tmp");
        probe.close();
        std::filesystem::remove(a.checkpoint + ".tmp");
    }

    if (a.format == "csv" && !resumed) std::cout << csv_header() << "\n";

    u64 effective_hi = a.hi;
    bool stopped_early = false;
    if (a.stop_after > 0 && a.stop_after < a.hi) {
        effective_hi = a.stop_after;
        stopped_early = true;
    }

    auto sink = [&](const RunRecord& r) {
        if (a.format == "csv") {
            std::cout << record_to_csv(r) << "\n";
        } else if (a.format == "text") {
            std::cout << "run";
            for (u64 p : r.primes) std::cout << ' ' << p;
            std::cout << " gap=" << r.gap << "\n";
        } else {
            std::cout << record_to_json(r).dump() << "\n";
        }
    };
    if (start <= effective_hi) engine.process(start, effective_hi, sink);

    if (!a.checkpoint.empty()) {
        Checkpoint cp;
        cp.config_digest = digest;
        cp.kind = kind;
        cp.state = engine.state();
        cp.last_prime = std::max(engine.state().last_scanned, effective_hi);
        cp.records_emitted = std::min(engine.state().run_count, a.max_records);
        std::string tmp = a.checkpoint + ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
            out << checkpoint_to_json(cp).dump() << "\n";
        }
        std::filesystem::rename(tmp, a.checkpoint);
    }

    if (stopped_early) return 0;  // summary comes from the resumed run

    const AssemblerState& st = engine.state();
    ScanSummary summary;
    summary.run_count = st.run_count;
    summary.min_gap = st.min_gap;
    summary.modulus = modulus;
    if (st.min_gap && modulus > 0)
        summary.ratio = static_cast<double>(*st.min_gap) / static_cast<double>(modulus);
    summary.truncated = st.truncated;
    summary.last_prime = std::max(st.last_scanned, a.hi);

    if (a.format == "csv") {
        std::cout << "# " << summary_to_json(kind, summary).dump() << "\n";
    } else if (a.format == "text") {
        std::cout << "summary " << summary_to_json(kind, summary).dump() << "\n";
    } else {
        std::cout << summary_to_json(kind, summary).dump() << "\n";
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"number-theoretic gap toolkit"};
    app.require_subcommand(1);

    std::string q_str, curve_str, cubic_str, format = "json";
    std::optional<i64> quadratic, cm_disc;
    u64 kappa = 0, y = 0, n = 0, limit = 1'000'000, test_u = 0, test_v = 0, test_t = 0;
    u64 ap_residue = 0;
    ScanArgs scan;

    auto* construct = app.add_subcommand("construct", "Heath-Brown style class for a q-set");
    construct->add_option("--q", q_str)->required();
    construct->add_option("--limit", limit, "p0 search bound");
    construct->add_option("--format", format);

    auto* construct_field = app.add_subcommand("construct-field", "inert-in-M class");
    construct_field->add_option("--quadratic", quadratic);
    construct_field->add_option("--cubic", cubic_str);
    construct_field->add_option("--format", format);

    auto* conductor = app.add_subcommand("conductor", "multiquadratic conductor of a q-set");
    conductor->add_option("--q", q_str)->required();
    conductor->add_option("--format", format);

    auto* star = app.add_subcommand("star-check", "parity condition on a q-set");
    star->add_option("--q", q_str)->required();
    star->add_option("--format", format);

    auto* indep = app.add_subcommand("indep", "multiplicative independence of a q-set");
    indep->add_option("--q", q_str)->required();
    indep->add_option("--format", format);

    auto* census = app.add_subcommand("census", "primes with small generated subgroup");
    census->add_option("--q", q_str)->required();
    census->add_option("--y", y, "subgroup order bound")->required();
    census->add_option("--limit", limit, "prime search bound");
    census->add_option("--format", format);

    auto* admissible = app.add_subcommand("admissible", "admissible family from a q-set class");
    admissible->add_option("--q", q_str)->required();
    admissible->add_option("--kappa", kappa)->required();
    admissible->add_option("--limit", limit, "survivor search bound");
    admissible->add_option("--format", format);

    auto* verify = app.add_subcommand("verify-class", "check a class against its target");
    verify->add_option("--q", q_str);
    verify->add_option("--quadratic", quadratic);
    verify->add_option("--cubic", cubic_str);
    verify->add_option("--u", test_u, "class u (default: construct)");
    verify->add_option("--v", test_v, "class v");
    verify->add_option("--t", test_t, "class T");
    verify->add_option("--limit", limit, "test bound");
    verify->add_option("--format", format);

    auto* ecstruct = app.add_subcommand("ecstruct", "group structures over a prime range");
    ecstruct->add_option("--curve", curve_str)->required();
    ecstruct->add_option("--lo", scan.lo)->default_val(5);
    ecstruct->add_option("--hi", scan.hi)->required();
    ecstruct->add_option("--seed", scan.seed);
    ecstruct->add_flag("--bsgs", scan.bsgs);
    ecstruct->add_option("--format", format);

    auto* duke = app.add_subcommand("duke", "count good primes with n | d_p");
    duke->add_option("--curve", curve_str)->required();
    duke->add_option("--hi", scan.hi, "x")->required();
    duke->add_option("--n", n)->required();
    duke->add_option("--format", format);

    auto* prscan = app.add_subcommand("prscan", "runs of primes with a primitive root in q");
    prscan->add_option("--q", q_str)->required();
    add_scan_flags(prscan, scan, false);

    auto* ecscan = app.add_subcommand("ecscan", "runs of primes with cyclic reduction");
    ecscan->add_option("--curve", curve_str)->required();
    add_scan_flags(ecscan, scan, true);

    auto* apscan = app.add_subcommand("apscan", "runs of primes in a progression");
    apscan->add_option("--q", q_str, "progression modulus")->required();
    apscan->add_option("--u", ap_residue, "progression residue")->required();
    add_scan_flags(apscan, scan, false);

    auto* sscyclic = app.add_subcommand("sscyclic", "supersingular cyclic primes via inertness");
    sscyclic->add_option("--curve", curve_str)->required();
    sscyclic->add_option("--cm-disc", cm_disc)->required();
    sscyclic->add_option("--quadratic", quadratic);
    sscyclic->add_option("--cubic", cubic_str);
    sscyclic->add_flag("--consecutive", scan.consecutive, "require consecutive primes");
    add_scan_flags(sscyclic, scan, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << R"({"error":"domain","message":)" << ojson(std::string(e.what())).dump()
                  << "}\n";
        return 2;
    }

    if (construct->parsed()) {
        QSet q(parse_list(q_str));
        CongruenceClass c = build_uv(q, limit);
        ojson j = class_json(c);
        // squarefree reduction mirrors the constructor's internal one
        std::set<i64> parts(q.squarefree_parts().begin(), q.squarefree_parts().end());
        j["p0"] = find_p0(QSet(std::vector<i64>(parts.begin(), parts.end())), limit);
        emit(j, format);
        return 0;
    }
    if (construct_field->parsed()) {
        FieldDescriptor M = parse_field(quadratic, cubic_str);
        emit(class_json(build_uv_field(M)), format);
        return 0;
    }
    if (conductor->parsed()) {
        QSet q(parse_list(q_str));
        ojson j;
        j["conductor"] = multiquadratic_conductor(q);
        emit(j, format);
        return 0;
    }
    if (star->parsed()) {
        auto rep = check_star(QSet(parse_list(q_str)));
        ojson j;
        j["holds"] = rep.holds;
        j["witness"] = rep.witness ? ojson(*rep.witness) : ojson(nullptr);
        emit(j, format);
        return 0;
    }
    if (indep->parsed()) {
        auto rep = is_mult_independent(QSet(parse_list(q_str)));
        ojson j;
        j["independent"] = rep.independent;
        j["relation"] = rep.relation ? ojson(*rep.relation) : ojson(nullptr);
        emit(j, format);
        return 0;
    }
    if (census->parsed()) {
        auto primes = small_subgroup_census(QSet(parse_list(q_str)), y, limit);
        ojson j;
        j["primes"] = primes;
        j["count"] = primes.size();
        emit(j, format);
        return 0;
    }
    if (admissible->parsed()) {
        QSet q(parse_list(q_str));
        CongruenceClass c = build_uv(q);
        AdmissibleFamily fam = build_family(c, kappa, limit);
        ojson j;
        j["kappa"] = fam.kappa;
        j["T"] = fam.T;
        j["v"] = fam.v;
        ojson fns = ojson::array();
        for (const auto& f : fam.functions) {
            ojson fj;
            fj["slope"] = f.slope;
            fj["intercept"] = f.intercept;
            fns.push_back(fj);
        }
        j["functions"] = fns;
        j["a_values"] = fam.a_values;
        j["window"] = fam.window();
        ojson w;
        for (auto [p, np] : fam.witnesses) w[std::to_string(p)] = np;
        j["witnesses"] = w;
        emit(j, format);
        return 0;
    }
    if (verify->parsed()) {
        ClassReport rep;
        CongruenceClass c{test_u, test_v, test_t};
        if (!q_str.empty()) {
            QSet q(parse_list(q_str));
            if (test_u == 0) c = build_uv(q);
            rep = verify_congruence_class(c, q, limit);
        } else {
            FieldDescriptor M = parse_field(quadratic, cubic_str);
            if (test_u == 0) c = build_uv_field(M);
            rep = verify_congruence_class(c, M, limit);
        }
        ojson j;
        j["u"] = c.u;
        j["v"] = c.v;
        j["T"] = c.T;
        j["primes_checked"] = rep.primes_checked;
        j["counterexample"] = rep.counterexample ? ojson(*rep.counterexample) : ojson(nullptr);
        emit(j, format);
        return 0;
    }
    if (ecstruct->parsed()) {
        CurveQ E = parse_curve(curve_str, std::nullopt);
        ECOptions ec;
        ec.seed = scan.seed;
        ec.enable_bsgs = scan.bsgs;
        for (auto& [p, g] : structures_up_to(E, scan.hi, ec)) {
            if (p < scan.lo) continue;
            ojson j;
            j["p"] = p;
            j["N"] = g.N;
            j["d"] = g.d;
            j["e"] = g.e;
            j["a"] = g.a;
            emit(j, format);
        }
        return 0;
    }
    if (duke->parsed()) {
        CurveQ E = parse_curve(curve_str, std::nullopt);
        ojson j;
        j["x"] = scan.hi;
        j["n"] = n;
        j["count"] = duke_census(E, scan.hi, n);
        emit(j, format);
        return 0;
    }
    if (prscan->parsed()) {
        QSet q(parse_list(q_str));
        return run_scan_command(RunKind::primitive_root, pr_predicate(q), true, scan,
                                multiquadratic_conductor(q), "q=" + q_str);
    }
    if (ecscan->parsed()) {
        CurveQ E = parse_curve(curve_str, std::nullopt);
        ECOptions ec;
        ec.seed = scan.seed;
        ec.enable_bsgs = scan.bsgs;
        return run_scan_command(RunKind::ec_cyclic, ec_cyclic_predicate(E, ec), true, scan,
                                rad_disc_model(E), "curve=" + curve_str);
    }
    if (apscan->parsed()) {
        u64 modulus = std::stoull(q_str);
        if (modulus == 0) throw domain_error("apscan: modulus must be positive");
        if (std::gcd(ap_residue, modulus) != 1)
            throw domain_error("apscan: residue not coprime to modulus");
        return run_scan_command(RunKind::progression, ap_predicate(ap_residue, modulus), true,
                                scan, modulus,
                                "q=" + q_str + ",u=" + std::to_string(ap_residue));
    }
    if (sscyclic->parsed()) {
        CurveQ E = parse_curve(curve_str, cm_disc);
        FieldDescriptor M = parse_field(quadratic, cubic_str);
        ECOptions ec;
        ec.seed = scan.seed;
        ec.enable_bsgs = scan.bsgs;
        u64 modulus = checked_mul_u64(quadratic_field_conductor(*cm_disc), M.conductor());
        std::string params = "curve=" + curve_str + ",cm=" + std::to_string(*cm_disc) +
                             ",field=" + (quadratic ? std::to_string(*quadratic) : cubic_str);
        return run_scan_command(RunKind::ss_cyclic, ss_cyclic_predicate(E, M, ec),
                                scan.consecutive, scan, modulus, params);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ntg::domain_error& e) {
        std::cerr << R"({"error":"domain","message":)" << ntg::ojson(e.what()).dump() << "}\n";
        return 2;
    } catch (const ntg::search_failure& e) {
        std::cerr << R"({"error":"search-failure","message":)" << ntg::ojson(e.what()).dump()
                  << "}\n";
        return 3;
    } catch (const ntg::resource_error& e) {
        std::cerr << R"({"error":"resource","message":)" << ntg::ojson(e.what()).dump() << "}\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << R"({"error":"domain","message":)" << ntg::ojson(e.what()).dump() << "}\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << R"({"error":"io","message":)" << ntg::ojson(e.what()).dump() << "}\n";
        return 3;
    }
}
