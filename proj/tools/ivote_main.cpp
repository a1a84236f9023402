// ivote — command-line driver for the i-voting verification simulator.
//
// Subcommands:
//   run-election        cast/verify/tally a scenario file, write reports
//   privacy-experiment  sniffer-strategy experiment against both variants
//   reproduce-tables    regenerate the cost and truncation tables and check
//                       them against expectations
//
// Exit codes: 0 success, 1 claim violation, 2 protocol alarm, 64 usage,
// 74 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ivote/harness.hpp"

namespace fs = std::filesystem;
using namespace ivote;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaim = 1;
constexpr int kExitAlarm = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct CommonOpts {
    std::string out = "out";
    std::string seed_hex;
    std::uint64_t trials = 0;  // 0 = keep scenario/default value
    std::string variant;
    unsigned threads = 0;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out, "Output directory");
    cmd->add_option("--seed", opts.seed_hex, "256-bit seed as 64 hex characters");
    cmd->add_option("--trials", opts.trials, "Trial count override");
    cmd->add_option("--variant", opts.variant, "original|proposed")
        ->check(CLI::IsMember({"original", "proposed"}));
    cmd->add_option("--threads", opts.threads, "Worker threads (0 = hardware)");
    cmd->add_flag("-v,--verbose", opts.verbose, "Print a run summary");
}

// --seed wins over a scenario-file seed; IVOTE_SEED is the fallback when
// neither is given.
Bytes32 resolve_seed(const CommonOpts& opts, bool file_has_seed,
                     const Bytes32& file_seed) {
    if (!opts.seed_hex.empty()) return fixed_from_hex<32>(opts.seed_hex);
    if (file_has_seed) return file_seed;
    if (const char* env = std::getenv("IVOTE_SEED")) {
        return fixed_from_hex<32>(env);
    }
    return file_seed;  // all-zero default
}

bool scenario_file_sets_seed(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(),
                                 [](unsigned char c) { return std::isspace(c); }),
                  key.end());
        if (key == "seed") return true;
    }
    return false;
}

void apply_overrides(sim::Scenario& s, const CommonOpts& opts) {
    if (opts.trials > 0) s.trials = opts.trials;
    if (!opts.variant.empty()) s.variant = actors::variant_from_name(opts.variant);
    if (opts.threads > 0) s.threads = opts.threads;
}

void print_rates(const sim::ExperimentReport& report) {
    for (const auto& [name, stats] : report.rates) {
        auto band = stats.band();
        std::cout << "  " << name << ": " << stats.successes << "/"
                  << stats.trials << " = " << stats.rate() << "  ci=["
                  << band.lo << ", " << band.hi << "]\n";
    }
}

// ---------------------------------------------------------------------------
// run-election
// ---------------------------------------------------------------------------

int cmd_run_election(const std::string& scenario_path, const CommonOpts& opts) {
    sim::Scenario scenario = sim::load_scenario_file(scenario_path);
    scenario.seed = resolve_seed(opts, scenario_file_sets_seed(scenario_path),
                                 scenario.seed);
    apply_overrides(scenario, opts);
    scenario.validate();

    sim::ExperimentReport report = sim::run_scenario(scenario);
    report.write(opts.out);

    if (report.tally) {
        nlohmann::ordered_json jt;
        nlohmann::ordered_json counts;
        for (const auto& [cand, n] : report.tally->counts) {
            counts[std::to_string(cand)] = n;
        }
        jt["counts"] = counts;
        jt["ballots_counted"] = report.tally->ballots_counted;
        jt["ballots_superseded"] = report.tally->ballots_superseded;
        std::ofstream tally_file(fs::path(opts.out) / "tally.json",
                                 std::ios::binary);
        if (!tally_file) throw IoError("cannot write tally.json");
        tally_file << jt.dump(2) << '\n';
    }

    std::uint64_t alarms = 0;
    if (auto it = report.rates.find("alarm"); it != report.rates.end()) {
        alarms = it->second.successes;
    }
    if (opts.verbose) {
        std::cout << "scenario: " << actors::variant_name(scenario.variant)
                  << " m=" << scenario.m << " voters=" << scenario.voters
                  << " trials=" << scenario.trials << "\n";
        print_rates(report);
        std::cout << "alarms: " << alarms << "\n";
    }
    return alarms > 0 ? kExitAlarm : kExitOk;
}

// ---------------------------------------------------------------------------
// privacy-experiment
// ---------------------------------------------------------------------------

int cmd_privacy_experiment(std::size_t m, const CommonOpts& opts, bool leaky) {
    const std::uint64_t trials = opts.trials > 0 ? opts.trials : 20000;
    Bytes32 root = resolve_seed(opts, false, Bytes32{});

    struct VariantResult {
        actors::ProtocolVariant variant;
        sim::ExperimentReport report;
    };
    std::vector<VariantResult> results;
    for (auto variant :
         {actors::ProtocolVariant::original, actors::ProtocolVariant::proposed}) {
        sim::Scenario s;
        s.variant = variant;
        s.m = m;
        s.trials = trials;
        s.seed = derive_seed(root, std::string("privacy-") +
                                       std::string(actors::variant_name(variant)));
        s.threads = opts.threads;
        s.record_trials = false;
        s.record_events = false;
        s.with_tally = false;
        adv::AdversaryConfig cfg;
        cfg.kind = adv::AdversaryKind::verifapp_sniffer;
        s.adversary = cfg;
        if (leaky && variant == actors::ProtocolVariant::proposed) {
            s.leak_beta_in_transcript = true;
        }
        results.push_back({variant, sim::run_scenario(s)});
    }

    // Distinguisher bound: against the proposed variant every strategy's
    // success rate must stay within delta = 4*sqrt(p(1-p)/N) of p = 1/m;
    // original transcripts give the vote away completely.
    const double p = 1.0 / static_cast<double>(m);
    const double delta =
        4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));

    bool pass = true;
    std::ostringstream verdict;
    fs::create_directories(opts.out);
    std::ofstream csv(fs::path(opts.out) / "experiments.csv", std::ios::binary);
    if (!csv) throw IoError("cannot write experiments.csv");
    csv << "experiment,variant,m,t,trials,successes,rate,ci_low,ci_high,seed\n";

    nlohmann::ordered_json summary;
    summary["m"] = m;
    summary["trials"] = trials;
    summary["expected_rate_proposed"] = p;
    summary["delta"] = delta;
    for (const auto& res : results) {
        const bool proposed = res.variant == actors::ProtocolVariant::proposed;
        nlohmann::ordered_json block;
        for (auto strat : adv::kAllSnifferStrategies) {
            std::string name(adv::strategy_name(strat));
            const auto& stats = res.report.rates.at("guess_" + name);
            auto band = stats.band();
            csv << "sniffer_guess," << actors::variant_name(res.variant) << ','
                << m << ',' << res.report.scenario.t() << ',' << stats.trials
                << ',' << stats.successes << ',' << stats.rate() << ','
                << band.lo << ',' << band.hi << ','
                << to_hex(view(res.report.scenario.seed)) << '\n';
            block[name] = stats.rate();

            bool ok = proposed ? std::abs(stats.rate() - p) <= delta
                               : stats.rate() == 1.0;
            if (!ok) {
                pass = false;
                verdict << actors::variant_name(res.variant) << '/' << name
                        << " rate " << stats.rate() << " violates the bound\n";
            }
        }
        summary[std::string(actors::variant_name(res.variant))] = block;
    }
    summary["pass"] = pass;
    {
        std::ofstream f(fs::path(opts.out) / "privacy_report.json",
                        std::ios::binary);
        if (!f) throw IoError("cannot write privacy_report.json");
        f << summary.dump(2) << '\n';
    }

    if (opts.verbose || !pass) {
        std::cout << "privacy experiment: m=" << m << " trials=" << trials
                  << " delta=" << delta << "\n";
        for (const auto& res : results) {
            std::cout << actors::variant_name(res.variant) << ":\n";
            print_rates(res.report);
        }
        if (!pass) std::cout << verdict.str();
    }
    return pass ? kExitOk : kExitClaim;
}

// ---------------------------------------------------------------------------
// reproduce-tables
// ---------------------------------------------------------------------------

constexpr std::size_t kTableM = 3;

// Cost rows come from a measured one-vote one-verification run, not from the
// analytic prediction; compare_counters keeps the two in lockstep.
std::string generate_tables(const CommonOpts& opts) {
    std::ostringstream out;
    out << "cost table: operation counts for 1 vote and 1 verification (m="
        << kTableM << ")\n\n";
    out << "variant   actor     asym_enc  sym_enc  sym_dec  sign\n";
    for (auto variant :
         {actors::ProtocolVariant::original, actors::ProtocolVariant::proposed}) {
        sim::Scenario s;
        s.variant = variant;
        s.m = kTableM;
        s.trials = 1;
        s.voters = 1;
        s.seed = fixed_from_hex<32>(
            "5eed5eed5eed5eed5eed5eed5eed5eed5eed5eed5eed5eed5eed5eed5eed5eed");
        s.with_tally = false;
        s.record_events = false;
        s.threads = opts.threads;
        auto report = sim::run_scenario(s);

        auto cmp = sim::compare_counters(
            report.counters, sim::expected_counters(variant, kTableM, 1, 1));
        if (!cmp.pass) {
            throw Error("measured counters deviate from the cost model:\n" +
                        cmp.diff);
        }

        struct Row {
            const char* name;
            const sim::OpCounters* c;
        };
        for (const Row& row : {Row{"voterapp", &report.counters.voterapp},
                               Row{"vfs", &report.counters.vfs},
                               Row{"verifapp", &report.counters.verifapp}}) {
            out << actors::variant_name(variant) << "  " << row.name
                << std::string(10 - std::string(row.name).size(), ' ')
                << row.c->asym_enc << "         " << row.c->sym_enc
                << "        " << row.c->sym_dec << "        " << row.c->sign
                << '\n';
        }
    }

    out << "\ntruncation table: 4-symbol rendering of the last 32 bits of q\n\n";
    out << "q                                 q_right\n";
    for (std::string_view q :
         {"aBxQwSOckfrzdYuaDNcvtTIDqKjEmAlQ", "qxvsEgaKMXpwApGDsNnPaNhjTJYtqven",
          "RatqPKvgtTAFectHpOeteDoPYKbTkApp"}) {
        Bytes32 bytes{};
        for (int i = 0; i < 32; ++i) bytes[i] = static_cast<std::uint8_t>(q[i]);
        out << q << "  " << msg::truncate_display(bytes) << '\n';
    }
    return out.str();
}

const char* kExpectedTables =
    "cost table: operation counts for 1 vote and 1 verification (m=3)\n"
    "\n"
    "variant   actor     asym_enc  sym_enc  sym_dec  sign\n"
    "original  voterapp  1         0        0        1\n"
    "original  vfs       0         0        0        0\n"
    "original  verifapp  3         0        0        0\n"
    "proposed  voterapp  1         0        0        1\n"
    "proposed  vfs       0         1        0        0\n"
    "proposed  verifapp  3         0        3        0\n"
    "\n"
    "truncation table: 4-symbol rendering of the last 32 bits of q\n"
    "\n"
    "q                                 q_right\n"
    "aBxQwSOckfrzdYuaDNcvtTIDqKjEmAlQ  mAlQ\n"
    "qxvsEgaKMXpwApGDsNnPaNhjTJYtqven  qven\n"
    "RatqPKvgtTAFectHpOeteDoPYKbTkApp  kApp\n";

int cmd_reproduce_tables(const CommonOpts& opts,
                         const std::string& expected_path) {
    std::string generated = generate_tables(opts);

    fs::create_directories(opts.out);
    {
        std::ofstream f(fs::path(opts.out) / "tables.txt", std::ios::binary);
        if (!f) throw IoError("cannot write tables.txt");
        f << generated;
    }

    std::string expected = kExpectedTables;
    if (!expected_path.empty()) {
        std::ifstream f(expected_path, std::ios::binary);
        if (!f) throw IoError("cannot read expectation file: " + expected_path);
        std::ostringstream buf;
        buf << f.rdbuf();
        expected = buf.str();
    }

    if (opts.verbose) std::cout << generated;
    if (generated != expected) {
        std::cout << "generated tables do not match expectations\n";
        std::istringstream got(generated), want(expected);
        std::string g, w;
        while (std::getline(want, w)) {
            if (!std::getline(got, g)) g = "<missing>";
            if (g != w) std::cout << "- " << w << "\n+ " << g << "\n";
        }
        while (std::getline(got, g)) std::cout << "+ " << g << "\n";
        return kExitClaim;
    }
    std::cout << "tables match expectations\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"i-voting verification protocol simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::string scenario_path;
    auto* run = app.add_subcommand("run-election",
                                   "Run a scenario end to end and write reports");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    add_common(run, run_opts);

    CommonOpts privacy_opts;
    std::size_t privacy_m = 5;
    bool leaky = false;
    auto* privacy = app.add_subcommand(
        "privacy-experiment", "Sniffer-strategy experiment on both variants");
    privacy->add_option("--m", privacy_m, "Number of candidates");
    privacy->add_flag("--leaky-transcripts", leaky,
                      "Test hook: expose the voter's index in transcripts")
        ->group("");  // hidden
    add_common(privacy, privacy_opts);

    CommonOpts tables_opts;
    std::string expected_path;
    auto* tables = app.add_subcommand(
        "reproduce-tables", "Regenerate cost/truncation tables and verify them");
    tables->add_option("--expected", expected_path,
                       "Expectation file (defaults to the embedded tables)");
    add_common(tables, tables_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run_election(scenario_path, run_opts);
        if (privacy->parsed()) {
            return cmd_privacy_experiment(privacy_m, privacy_opts, leaky);
        }
        return cmd_reproduce_tables(tables_opts, expected_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const LengthError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClaim;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClaim;
    }
}
