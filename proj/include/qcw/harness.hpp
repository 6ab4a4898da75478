#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcw/rng.hpp"
#include "qcw/session.hpp"

namespace qcw {

// A full run description: which protocol, which registered strategy each
// party plays, and the numeric/text parameters the runner reads.
struct SessionConfig {
    std::string protocol;
    std::string alice = "honest";
    std::string bob = "honest";
    std::string eve = "none";
    std::map<std::string, double> knobs;
    std::map<std::string, std::string> text;
};

struct SessionOutcome {
    bool ok = false;
    std::string note;
    std::map<std::string, double> metrics;
};

struct SessionResult {
    uint64_t session_id = 0;
    uint64_t setup_seed = 0;
    uint64_t alice_seed = 0;
    uint64_t bob_seed = 0;
    uint64_t eve_seed = 0;
    SessionOutcome outcome;
    Transcript transcript;
};

std::vector<std::string> protocol_names();

// Validates the protocol, the strategy names, and the eve registration,
// builds one independent rng per party from the seed, runs the protocol,
// and checks the transcript against the protocol's message schedule.
SessionResult run_session(const SessionConfig& cfg, uint64_t seed);

// Throws SessionError naming the first round that breaks the protocol's
// sender/message schedule.
void check_schedule(const std::string& protocol, const Transcript& transcript);

enum class BoundRule { upper, lower, two_sided, exact };

struct StatReport {
    std::string metric;
    double estimate = 0;
    double std_err = 0;
    double bound = 0;
    BoundRule rule = BoundRule::upper;
    bool pass = false;
};

// Runs `trials` sessions with per-session seeds derived by counter from the
// master seed, optionally across threads; outcomes are aggregated in session
// order, so the reports do not depend on the parallelism.
std::vector<StatReport> run_batch(const SessionConfig& cfg,
                                  uint64_t master_seed, size_t trials,
                                  size_t parallelism);

// One record per line as a JSON object; UTF-8, LF endings.
void export_transcript(const Transcript& transcript, const std::string& path);

// Throws FormatError naming the first malformed or out-of-order line.
Transcript import_transcript(const std::string& path);

std::string report_json_line(const StatReport& report);

struct SuiteEntry {
    std::string name;
    std::vector<StatReport> reports;
};

// Fixed cross-protocol battery; entry seeds are derived by counter from the
// master seed, so the same master yields byte-identical output.
std::vector<SuiteEntry> run_suite(uint64_t master_seed, size_t parallelism = 1);

// One JSON line per report, tagged with its entry name, then a summary line.
std::string suite_json(const std::vector<SuiteEntry>& entries);

}  // namespace qcw
