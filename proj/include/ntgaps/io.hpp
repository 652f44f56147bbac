#pragma once

#include <string>

#include "json.hpp"
#include "ntgaps/scan.hpp"

namespace ntg {

using ojson = nlohmann::ordered_json;

std::string kind_name(RunKind k);
RunKind kind_from_name(const std::string& s);

ojson certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const ojson& j, RunKind kind);

ojson record_to_json(const RunRecord& r);
RunRecord record_from_json(const ojson& j);

ojson summary_to_json(RunKind kind, const ScanSummary& s);

// CSV encoding: kind, primes (space separated), gap, consecutive,
// certificates (JSON array, quoted).
std::string csv_header();
std::string record_to_csv(const RunRecord& r);
RunRecord record_from_csv(const std::string& line);

// Scan checkpoint: config digest, progress counters, and the assembler
// tail needed to resume byte-identically.
struct Checkpoint {
    u64 config_digest = 0;
    u64 last_prime = 0;         // highest fully scanned number
    u64 records_emitted = 0;
    RunKind kind = RunKind::primitive_root;
    AssemblerState state;
};

ojson checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const ojson& j);

// FNV-1a over a canonical config string; stable across runs and builds.
u64 fnv1a(const std::string& s);

}  // namespace ntg
