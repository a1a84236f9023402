// End-to-end checks of the ivote binary: exit-code contract, output files,
// seed precedence. The binary path comes in via IVOTE_BIN.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run_cmd(const std::string& args) {
    std::string cmd = std::string(IVOTE_BIN) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "ivote-cli-test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const char* name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << content;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

constexpr const char* kHonestScenario =
    "variant = proposed\n"
    "m = 4\n"
    "voters = 10\n"
    "trials = 1\n"
    "seed = 4242424242424242424242424242424242424242424242424242424242424242\n";

}  // namespace

TEST_CASE("run-election: honest scenario exits 0 and writes the tally") {
    TempDir dir;
    write_file(dir / "honest.scn", kHonestScenario);
    CHECK(run_cmd("run-election --scenario " + (dir / "honest.scn") + " --out " +
                  (dir / "out")) == 0);
    CHECK(fs::exists(dir.path / "out" / "report.json"));
    CHECK(fs::exists(dir.path / "out" / "tally.json"));
    CHECK(fs::exists(dir.path / "out" / "trials.csv"));
    CHECK(fs::exists(dir.path / "out" / "events.jsonl"));

    auto report = nlohmann::json::parse(slurp(dir / "out/report.json"));
    CHECK(report["rates"]["accept"]["rate"] == 1.0);
    auto tally = nlohmann::json::parse(slurp(dir / "out/tally.json"));
    CHECK(tally["ballots_counted"] == 10);
}

TEST_CASE("run-election: student attack raises alarms and exits 2") {
    TempDir dir;
    write_file(dir / "attack.scn",
               "variant = original\n"
               "m = 3\n"
               "voters = 4\n"
               "seed = "
               "1234123412341234123412341234123412341234123412341234123412341234\n"
               "adversary.kind = student_substitution\n");
    CHECK(run_cmd("run-election --scenario " + (dir / "attack.scn") + " --out " +
                  (dir / "out")) == 2);
}

TEST_CASE("run-election: usage errors exit 64") {
    TempDir dir;
    CHECK(run_cmd("run-election --scenario " + (dir / "absent.scn") + " --out " +
                  (dir / "out")) == 64);

    write_file(dir / "bad.scn", "no_such_key = 1\n");
    CHECK(run_cmd("run-election --scenario " + (dir / "bad.scn") + " --out " +
                  (dir / "out")) == 64);

    write_file(dir / "conflict.scn",
               "variant = original\ntruncation_bits = 8\nm = 3\n");
    CHECK(run_cmd("run-election --scenario " + (dir / "conflict.scn") +
                  " --out " + (dir / "out")) == 64);

    CHECK(run_cmd("run-election") == 64);           // missing required option
    CHECK(run_cmd("no-such-subcommand") == 64);
}

TEST_CASE("seed precedence: --seed beats the file, IVOTE_SEED is the fallback") {
    TempDir dir;
    write_file(dir / "seedless.scn", "variant = proposed\nm = 3\nvoters = 2\n");
    const std::string env_seed(64, 'b');
    const std::string cli_seed(64, 'c');

    std::string base = "IVOTE_SEED=" + env_seed + " " + IVOTE_BIN +
                       " run-election --scenario " + (dir / "seedless.scn");
    REQUIRE(std::system((base + " --out " + (dir / "env") + " >/dev/null 2>&1")
                            .c_str()) == 0);
    auto env_report = nlohmann::json::parse(slurp(dir / "env/report.json"));
    CHECK(env_report["scenario"]["seed"] == env_seed);

    REQUIRE(std::system((base + " --seed " + cli_seed + " --out " +
                         (dir / "cli") + " >/dev/null 2>&1")
                            .c_str()) == 0);
    auto cli_report = nlohmann::json::parse(slurp(dir / "cli/report.json"));
    CHECK(cli_report["scenario"]["seed"] == cli_seed);

    // a file seed wins over the environment
    write_file(dir / "seeded.scn", std::string(kHonestScenario));
    REQUIRE(std::system(("IVOTE_SEED=" + env_seed + " " + IVOTE_BIN +
                         " run-election --scenario " + (dir / "seeded.scn") +
                         " --out " + (dir / "file") + " >/dev/null 2>&1")
                            .c_str()) == 0);
    auto file_report = nlohmann::json::parse(slurp(dir / "file/report.json"));
    std::string file_seed;
    for (int i = 0; i < 32; ++i) file_seed += "42";
    CHECK(file_report["scenario"]["seed"] == file_seed);
}

TEST_CASE("reproduce-tables: matches embedded expectations, detects tampering") {
    TempDir dir;
    CHECK(run_cmd("reproduce-tables --out " + (dir / "tables")) == 0);
    std::string tables = slurp(dir / "tables/tables.txt");
    CHECK(tables.find("mAlQ") != std::string::npos);
    CHECK(tables.find("proposed  vfs       0         1") != std::string::npos);

    std::string tampered = tables;
    tampered.replace(tampered.find("mAlQ"), 4, "XXXX");
    write_file(dir / "tampered.txt", tampered);
    CHECK(run_cmd("reproduce-tables --out " + (dir / "tables2") + " --expected " +
                  (dir / "tampered.txt")) == 1);
}

TEST_CASE("privacy-experiment: desk-scale run passes, leaky build fails") {
    TempDir dir;
    std::string common = "privacy-experiment --m 2 --trials 1500 --seed " +
                         std::string(64, 'd') + " --out ";
    CHECK(run_cmd(common + (dir / "priv")) == 0);
    CHECK(fs::exists(dir.path / "priv" / "experiments.csv"));
    CHECK(fs::exists(dir.path / "priv" / "privacy_report.json"));

    std::string csv = slurp(dir / "priv/experiments.csv");
    CHECK(csv.rfind("experiment,variant,m,t,trials,successes,rate,ci_low,"
                    "ci_high,seed\n",
                    0) == 0);

    CHECK(run_cmd(common + (dir / "leaky") + " --leaky-transcripts") == 1);
}
