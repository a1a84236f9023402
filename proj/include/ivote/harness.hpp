#ifndef IVOTE_HARNESS_HPP
#define IVOTE_HARNESS_HPP

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "ivote/actors.hpp"
#include "ivote/adversaries.hpp"
#include "ivote/stats.hpp"

// -----------------------------------------------------------------------------
// Deterministic scenario runner. A Scenario fully determines a run: per-trial
// seeds are hash(seed || trial-index), trials execute in parallel, and
// aggregation is order-independent, so serial and parallel runs of the same
// scenario produce byte-identical reports.
// -----------------------------------------------------------------------------

namespace ivote::sim {

struct Scenario {
    actors::ProtocolVariant variant = actors::ProtocolVariant::proposed;
    std::size_t m = 5;
    std::size_t voters = 1;
    std::uint64_t trials = 1;
    Bytes32 seed{};
    std::optional<int> truncation_bits;  // proposed-only knob
    std::optional<std::size_t> fixed_beta;  // pin the voter's index; else uniform
    std::optional<adv::AdversaryConfig> adversary;
    bool with_verification = true;
    bool with_tally = true;
    bool record_trials = true;
    bool record_events = true;
    bool leak_beta_in_transcript = false;  // negative-control hook, not a file key
    unsigned threads = 0;                  // 0 = hardware concurrency

    int t() const { return truncation_bits.value_or(24); }
    void validate() const;
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario_file(const std::filesystem::path& path);

struct TrialRow {
    std::uint64_t trial = 0;
    std::string outcome;
    std::string detail;
};

struct ExperimentReport {
    Scenario scenario;
    std::map<std::string, RateStats> rates;
    ActorCounters counters;
    std::optional<actors::TallyResult> tally;
    std::map<std::string, double> analytic;  // closed-form reference figures
    std::vector<TrialRow> trial_rows;
    actors::EventLog events;

    nlohmann::ordered_json to_json() const;
    /// Writes report.json, trials.csv and events.jsonl under out_dir.
    void write(const std::filesystem::path& out_dir) const;
};

ExperimentReport run_scenario(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Cost model (operation counts)
// ---------------------------------------------------------------------------

/// Analytic counter prediction. Per vote: 1 asym_enc + 1 sign at VoterApp.
/// Per verification — original: m asym_enc at VerifApp, nothing at VFS;
/// proposed: m asym_enc + m sym_dec at VerifApp, 1 sym_enc at VFS.
ActorCounters expected_counters(actors::ProtocolVariant variant, std::size_t m,
                                std::uint64_t votes, std::uint64_t verifications);

struct CounterComparison {
    bool pass = true;
    std::string diff;  // "actor.counter: measured X != expected Y" lines
};

/// Exact equality on asym_enc, asym_dec, sym_enc and sym_dec for the three
/// protocol roles; hash/sign/verify are informational only.
CounterComparison compare_counters(const ActorCounters& measured,
                                   const ActorCounters& expected);

// ---------------------------------------------------------------------------
// Parallel trial runner: dynamic scheduling, results land at their trial
// index, reduction happens in index order.
// ---------------------------------------------------------------------------

template <typename R, typename Fn>
std::vector<R> run_trials(std::uint64_t trials, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));

    std::vector<R> results(trials);
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < trials; ++i) results[i] = fn(i);
        return results;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                std::uint64_t i = next.fetch_add(1);
                if (i >= trials) return;
                try {
                    results[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(trials);
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace ivote::sim

#endif
