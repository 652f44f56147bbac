#include "ntgaps/io.hpp"

#include <sstream>

namespace ntg {

std::string kind_name(RunKind k) {
    switch (k) {
        case RunKind::primitive_root: return "primitive-root";
        case RunKind::ec_cyclic: return "ec-cyclic";
        case RunKind::progression: return "progression";
        case RunKind::ss_cyclic: return "supersingular-cyclic";
    }
    throw domain_error("kind_name: unknown kind");
}

RunKind kind_from_name(const std::string& s) {
    if (s == "primitive-root") return RunKind::primitive_root;
    if (s == "ec-cyclic") return RunKind::ec_cyclic;
    if (s == "progression") return RunKind::progression;
    if (s == "supersingular-cyclic") return RunKind::ss_cyclic;
    throw domain_error("kind_from_name: unknown kind " + s);
}

ojson certificate_to_json(const Certificate& c) {
    ojson j;
    if (auto* pr = std::get_if<PrCert>(&c)) {
        j["q"] = pr->q;
        j["order"] = pr->order;
    } else if (auto* ec = std::get_if<EcCert>(&c)) {
        j["d"] = ec->d;
        j["e"] = ec->e;
    } else if (auto* ap = std::get_if<ApCert>(&c)) {
        j["u"] = ap->u;
        j["q"] = ap->q;
    } else if (auto* ss = std::get_if<SsCert>(&c)) {
        j["a"] = ss->a;
        j["d"] = ss->d;
        j["e"] = ss->e;
    }
    return j;
}

Certificate certificate_from_json(const ojson& j, RunKind kind) {
    switch (kind) {
        case RunKind::primitive_root:
            return PrCert{j.at("q").get<i64>(), j.at("order").get<u64>()};
        case RunKind::ec_cyclic:
            return EcCert{j.at("d").get<u64>(), j.at("e").get<u64>()};
        case RunKind::progression:
            return ApCert{j.at("u").get<u64>(), j.at("q").get<u64>()};
        case RunKind::ss_cyclic:
            return SsCert{j.at("a").get<i64>(), j.at("d").get<u64>(), j.at("e").get<u64>()};
    }
    throw domain_error("certificate_from_json: unknown kind");
}

ojson record_to_json(const RunRecord& r) {
    ojson j;
    j["kind"] = kind_name(r.kind);
    j["primes"] = r.primes;
    j["gap"] = r.gap;
    j["consecutive"] = r.consecutive;
    ojson certs = ojson::array();
    for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
    j["certificates"] = certs;
    return j;
}

RunRecord record_from_json(const ojson& j) {
    RunRecord r;
    r.kind = kind_from_name(j.at("kind").get<std::string>());
    r.primes = j.at("primes").get<std::vector<u64>>();
    r.gap = j.at("gap").get<u64>();
    r.consecutive = j.at("consecutive").get<bool>();
    for (const auto& c : j.at("certificates")) r.certificates.push_back(certificate_from_json(c, r.kind));
    return r;
}

ojson summary_to_json(RunKind kind, const ScanSummary& s) {
    ojson j;
    j["summary"] = true;
    j["kind"] = kind_name(kind);
    j["run_count"] = s.run_count;
    if (s.min_gap)
        j["min_gap"] = *s.min_gap;
    else
        j["min_gap"] = nullptr;
    j["modulus"] = s.modulus;
    if (s.ratio)
        j["ratio"] = *s.ratio;
    else
        j["ratio"] = nullptr;
    j["truncated"] = s.truncated;
    j["last_prime"] = s.last_prime;
    return j;
}

std::string csv_header() { return "kind,primes,gap,consecutive,certificates"; }

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

}  // namespace

std::string record_to_csv(const RunRecord& r) {
    std::ostringstream os;
    os << kind_name(r.kind) << ',';
    for (std::size_t i = 0; i < r.primes.size(); ++i) os << (i ? " " : "") << r.primes[i];
    os << ',' << r.gap << ',' << (r.consecutive ? "true" : "false") << ',';
    ojson certs = ojson::array();
    for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
    os << csv_quote(certs.dump());
    return os.str();
}

RunRecord record_from_csv(const std::string& line) {
    // split on commas outside quotes
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    if (fields.size() != 5) throw domain_error("record_from_csv: expected 5 fields");

    RunRecord r;
    r.kind = kind_from_name(fields[0]);
    std::istringstream ps(fields[1]);
    u64 p;
    while (ps >> p) r.primes.push_back(p);
    r.gap = std::stoull(fields[2]);
    r.consecutive = fields[3] == "true";
    for (const auto& c : ojson::parse(fields[4])) r.certificates.push_back(certificate_from_json(c, r.kind));
    return r;
}

ojson checkpoint_to_json(const Checkpoint& c) {
    ojson j;
    j["digest"] = c.config_digest;
    j["last_prime"] = c.last_prime;
    j["records_emitted"] = c.records_emitted;
    j["kind"] = kind_name(c.kind);
    ojson st;
    st["primes"] = c.state.primes;
    ojson certs = ojson::array();
    for (const auto& cc : c.state.certificates) certs.push_back(certificate_to_json(cc));
    st["certificates"] = certs;
    st["run_count"] = c.state.run_count;
    if (c.state.min_gap)
        st["min_gap"] = *c.state.min_gap;
    else
        st["min_gap"] = nullptr;
    st["truncated"] = c.state.truncated;
    st["last_scanned"] = c.state.last_scanned;
    j["state"] = st;
    return j;
}

Checkpoint checkpoint_from_json(const ojson& j) {
    Checkpoint c;
    c.config_digest = j.at("digest").get<u64>();
    c.last_prime = j.at("last_prime").get<u64>();
    c.records_emitted = j.at("records_emitted").get<u64>();
    c.kind = kind_from_name(j.at("kind").get<std::string>());
    const ojson& st = j.at("state");
    c.state.primes = st.at("primes").get<std::vector<u64>>();
    for (const auto& cc : st.at("certificates"))
        c.state.certificates.push_back(certificate_from_json(cc, c.kind));
    c.state.run_count = st.at("run_count").get<u64>();
    if (!st.at("min_gap").is_null()) c.state.min_gap = st.at("min_gap").get<u64>();
    c.state.truncated = st.at("truncated").get<bool>();
    c.state.last_scanned = st.at("last_scanned").get<u64>();
    return c;
}

u64 fnv1a(const std::string& s) {
    u64 h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace ntg
