#include "ivote/harness.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ivote::sim {

namespace {

using actors::ProtocolVariant;

std::string zero_pad(std::uint64_t v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

void Scenario::validate() const {
    if (m < 2) throw ConfigError("m must be >= 2");
    if (m > 1000) throw ConfigError("m is implausibly large");
    if (voters < 1) throw ConfigError("voters must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (truncation_bits && variant == ProtocolVariant::original) {
        throw ConfigError("truncation_bits is a proposed-variant parameter");
    }
    if (truncation_bits && *truncation_bits != 8 && *truncation_bits != 16 &&
        *truncation_bits != 24 && *truncation_bits != 32) {
        throw ConfigError("truncation_bits must be 8, 16, 24 or 32");
    }
    if (fixed_beta && (*fixed_beta < 1 || *fixed_beta > m)) {
        throw ConfigError("beta outside candidate list");
    }
    if (adversary) {
        adv::AdversaryConfig cfg = *adversary;
        cfg.truncation_bits = t();
        cfg.validate();
        if (cfg.kind == adv::AdversaryKind::fooling_search &&
            variant == ProtocolVariant::original) {
            throw ConfigError("fooling_search applies to the proposed variant only");
        }
        if (cfg.target_candidate && (*cfg.target_candidate < 1 ||
                                     *cfg.target_candidate > m)) {
            throw ConfigError("target candidate not in candidate list");
        }
    }
}

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("bad boolean for " + key + ": " + value);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": " + value);
    }
}

std::string trim(std::string s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
    Scenario s;
    adv::AdversaryConfig adversary;
    bool has_adversary = false;

    std::string line;
    while (std::getline(in, line)) {
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "variant") {
            s.variant = actors::variant_from_name(value);
        } else if (key == "m") {
            s.m = parse_u64(key, value);
        } else if (key == "voters") {
            s.voters = parse_u64(key, value);
        } else if (key == "trials") {
            s.trials = parse_u64(key, value);
        } else if (key == "seed") {
            s.seed = fixed_from_hex<32>(value);
        } else if (key == "truncation_bits") {
            s.truncation_bits = static_cast<int>(parse_u64(key, value));
        } else if (key == "beta") {
            s.fixed_beta = parse_u64(key, value);
        } else if (key == "with_verification") {
            s.with_verification = parse_bool(key, value);
        } else if (key == "with_tally") {
            s.with_tally = parse_bool(key, value);
        } else if (key == "record_trials") {
            s.record_trials = parse_bool(key, value);
        } else if (key == "record_events") {
            s.record_events = parse_bool(key, value);
        } else if (key == "threads") {
            s.threads = static_cast<unsigned>(parse_u64(key, value));
        } else if (key == "adversary.kind") {
            adversary.kind = adv::adversary_kind_from_name(value);
            has_adversary = true;
        } else if (key == "adversary.target_candidate") {
            adversary.target_candidate = static_cast<std::uint32_t>(parse_u64(key, value));
            has_adversary = true;
        } else if (key == "adversary.budget") {
            adversary.search_budget = parse_u64(key, value);
            has_adversary = true;
        } else if (key == "adversary.cancel") {
            adversary.cancel_instead_of_divert = parse_bool(key, value);
            has_adversary = true;
        } else {
            throw ConfigError("unknown scenario key: " + key);
        }
    }
    if (has_adversary) s.adversary = adversary;
    return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path.string());
    return parse_scenario(in);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

nlohmann::ordered_json ExperimentReport::to_json() const {
    nlohmann::ordered_json j;

    nlohmann::ordered_json sc;
    sc["variant"] = std::string(actors::variant_name(scenario.variant));
    sc["m"] = scenario.m;
    sc["voters"] = scenario.voters;
    sc["trials"] = scenario.trials;
    sc["seed"] = to_hex(view(scenario.seed));
    if (scenario.variant == ProtocolVariant::proposed) {
        sc["truncation_bits"] = scenario.t();
    }
    if (scenario.fixed_beta) sc["beta"] = *scenario.fixed_beta;
    if (scenario.adversary) {
        nlohmann::ordered_json a;
        a["kind"] = std::string(adv::adversary_kind_name(scenario.adversary->kind));
        if (scenario.adversary->target_candidate) {
            a["target_candidate"] = *scenario.adversary->target_candidate;
        }
        a["budget"] = scenario.adversary->search_budget;
        a["cancel"] = scenario.adversary->cancel_instead_of_divert;
        sc["adversary"] = a;
    }
    sc["with_verification"] = scenario.with_verification;
    sc["with_tally"] = scenario.with_tally;
    if (scenario.leak_beta_in_transcript) sc["leak_beta_in_transcript"] = true;
    j["scenario"] = sc;

    nlohmann::ordered_json jr;
    for (const auto& [name, stats] : rates) {
        nlohmann::ordered_json r;
        r["trials"] = stats.trials;
        r["successes"] = stats.successes;
        r["rate"] = stats.rate();
        auto band = stats.band();
        r["ci_low"] = band.lo;
        r["ci_high"] = band.hi;
        jr[name] = r;
    }
    j["rates"] = jr;

    auto counter_json = [](const OpCounters& c) {
        nlohmann::ordered_json o;
        o["asym_enc"] = c.asym_enc;
        o["asym_dec"] = c.asym_dec;
        o["sym_enc"] = c.sym_enc;
        o["sym_dec"] = c.sym_dec;
        o["hash"] = c.hash;
        o["sign"] = c.sign;
        o["verify"] = c.verify;
        return o;
    };
    nlohmann::ordered_json jc;
    jc["voterapp"] = counter_json(counters.voterapp);
    jc["vfs"] = counter_json(counters.vfs);
    jc["verifapp"] = counter_json(counters.verifapp);
    jc["counting"] = counter_json(counters.counting);
    jc["attacker"] = counter_json(counters.attacker);
    j["counters"] = jc;

    if (tally) {
        nlohmann::ordered_json jt;
        nlohmann::ordered_json counts;
        for (const auto& [cand, n] : tally->counts) {
            counts[std::to_string(cand)] = n;
        }
        jt["counts"] = counts;
        jt["ballots_counted"] = tally->ballots_counted;
        jt["ballots_superseded"] = tally->ballots_superseded;
        j["tally"] = jt;
    }

    if (!analytic.empty()) {
        nlohmann::ordered_json ja;
        for (const auto& [k, v] : analytic) ja[k] = v;
        j["analytic"] = ja;
    }

    j["events_file"] = "events.jsonl";
    return j;
}

void ExperimentReport::write(const std::filesystem::path& out_dir) const {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());

    auto open = [&](const char* name) {
        std::ofstream f(out_dir / name, std::ios::binary);
        if (!f) throw IoError(std::string("cannot write ") + name);
        return f;
    };

    {
        auto f = open("report.json");
        f << to_json().dump(2) << '\n';
    }
    {
        auto f = open("trials.csv");
        f << "trial,outcome,detail\n";
        for (const auto& row : trial_rows) {
            f << row.trial << ',' << row.outcome << ',' << row.detail << '\n';
        }
    }
    {
        auto f = open("events.jsonl");
        events.write_jsonl(f);
    }
}

// ---------------------------------------------------------------------------
// Cost model
// ---------------------------------------------------------------------------

ActorCounters expected_counters(ProtocolVariant variant, std::size_t m,
                                std::uint64_t votes, std::uint64_t verifications) {
    ActorCounters e;
    e.voterapp.asym_enc = votes;
    e.voterapp.sign = votes;
    e.verifapp.asym_enc = m * verifications;
    if (variant == ProtocolVariant::proposed) {
        e.verifapp.sym_dec = m * verifications;
        e.vfs.sym_enc = verifications;
    }
    return e;
}

CounterComparison compare_counters(const ActorCounters& measured,
                                   const ActorCounters& expected) {
    CounterComparison result;
    struct Field {
        const char* name;
        std::uint64_t OpCounters::* member;
    };
    static constexpr Field kStrict[] = {
        {"asym_enc", &OpCounters::asym_enc},
        {"asym_dec", &OpCounters::asym_dec},
        {"sym_enc", &OpCounters::sym_enc},
        {"sym_dec", &OpCounters::sym_dec},
    };
    struct ActorSlot {
        const char* name;
        const OpCounters* got;
        const OpCounters* want;
    };
    const ActorSlot actors_to_check[] = {
        {"voterapp", &measured.voterapp, &expected.voterapp},
        {"vfs", &measured.vfs, &expected.vfs},
        {"verifapp", &measured.verifapp, &expected.verifapp},
    };
    std::ostringstream diff;
    for (const auto& slot : actors_to_check) {
        for (const auto& field : kStrict) {
            std::uint64_t got = slot.got->*(field.member);
            std::uint64_t want = slot.want->*(field.member);
            if (got != want) {
                result.pass = false;
                diff << slot.name << '.' << field.name << ": measured " << got
                     << " != expected " << want << '\n';
            }
        }
    }
    result.diff = diff.str();
    return result;
}

// ---------------------------------------------------------------------------
// Trial runners
// ---------------------------------------------------------------------------

namespace {

struct ElectionContext {
    const Scenario* scenario;
    msg::CandidateList cl;
    crypto::ElectionKeyPair election;
};

struct VoterSetup {
    crypto::VoterKeyPair keys;
    actors::VoterIntent intent;
    std::uint32_t q_right_value = 0;  // the value the honest VoterApp would show
};

VoterSetup make_voter(const ElectionContext& ctx, const Bytes32& trial_seed,
                      std::size_t voter_index) {
    const Scenario& s = *ctx.scenario;
    Bytes32 voter_seed =
        derive_seed(trial_seed, "voter-" + std::to_string(voter_index));
    DeterministicRng rng(voter_seed);

    VoterSetup v;
    std::string id = "voter-" + zero_pad(voter_index + 1, 5);
    v.keys = crypto::keygen_voter(rng.child("identity").bytes32(), id);
    v.intent.voter_id = id;
    v.intent.beta = s.fixed_beta ? *s.fixed_beta : 1 + rng.below(s.m);
    v.intent.candidate_id = ctx.cl.at_index(v.intent.beta).id;
    if (s.variant == ProtocolVariant::proposed) {
        auto chars_rng = rng.child("q-right");
        v.intent.chosen_q_right = msg::random_q_right_chars(chars_rng);
        v.q_right_value =
            msg::sample_q_right_value(v.intent.chosen_q_right, chars_rng);
    }
    return v;
}

std::uint32_t pick_target(const Scenario& s, const actors::VoterIntent& intent) {
    if (s.adversary && s.adversary->target_candidate) {
        return *s.adversary->target_candidate;
    }
    return static_cast<std::uint32_t>(intent.beta % s.m + 1);  // next candidate
}

struct ElectionTrialResult {
    ActorCounters counters;
    RateStats accept, alarm, detection, alpha_eq_beta;
    actors::TallyResult tally;
    std::uint64_t store_attempts = 0;
    std::uint64_t store_rejects = 0;
    std::vector<TrialRow> rows;
    actors::EventLog events;
};

ElectionTrialResult run_election_trial(const ElectionContext& ctx,
                                       std::uint64_t trial) {
    const Scenario& s = *ctx.scenario;
    const bool attacked =
        s.adversary && s.adversary->kind == adv::AdversaryKind::student_substitution;

    Bytes32 trial_seed = derive_seed(s.seed, trial);
    ElectionTrialResult out;
    actors::EventLog* log = s.record_events ? &out.events : nullptr;

    actors::Registry registry;
    std::vector<VoterSetup> voters;
    voters.reserve(s.voters);
    for (std::size_t v = 0; v < s.voters; ++v) {
        voters.push_back(make_voter(ctx, trial_seed, v));
        registry.enroll(voters.back().keys);
    }

    actors::Vfs vfs(s.variant, ctx.cl, registry, derive_seed(trial_seed, "voteref"),
                    out.counters.vfs, log);
    crypto::MeteredCrypto voterapp(out.counters.voterapp);
    crypto::MeteredCrypto verifapp(out.counters.verifapp);
    crypto::MeteredCrypto attacker(out.counters.attacker);

    for (std::size_t v = 0; v < s.voters; ++v) {
        const VoterSetup& voter = voters[v];
        DeterministicRng cast_rng(
            derive_seed(trial_seed, "cast-" + std::to_string(v)));

        // --- voting stage -------------------------------------------------
        std::optional<crypto::Randomness> qr_r;  // what lands in the QR code
        std::optional<msg::VoteRefToken> voteref;
        bool cancelled = false;

        auto submit = [&](const msg::SignEncVote& vote,
                          const std::optional<msg::VerificationParameter>& q,
                          const crypto::Randomness& r) {
            actors::StoreResult res = vfs.store(vote, q);
            if (res.ok()) {
                voteref = res.voteref;
                qr_r = r;
            } else if (log) {
                log->append("harness", "store_failed", voter.intent.voter_id);
            }
        };

        if (!attacked) {
            if (s.variant == ProtocolVariant::original) {
                auto cast = actors::voterapp_cast_original(
                    voter.intent, ctx.cl, ctx.election.pk, voter.keys, cast_rng,
                    voterapp);
                submit(cast.vote, std::nullopt, cast.r);
            } else {
                auto cast = actors::voterapp_cast_proposed(
                    voter.intent, ctx.cl, ctx.election.pk, voter.keys, cast_rng,
                    voterapp);
                // The honest app shows the transmitted q_right on screen; the
                // voter checks against that value later.
                voters[v].q_right_value = cast.q.q_right();
                submit(cast.vote, cast.q, cast.r);
            }
        } else {
            std::uint32_t target = pick_target(s, voter.intent);
            bool cancel = s.adversary->cancel_instead_of_divert;
            if (s.variant == ProtocolVariant::original) {
                auto forged = adv::student_cast_original(
                    voter.intent, ctx.cl, ctx.election.pk, voter.keys, target,
                    cancel, cast_rng, attacker);
                if (forged.sent) {
                    submit(forged.sent->vote, std::nullopt, forged.sent->r);
                } else {
                    cancelled = true;
                }
            } else {
                auto forged = adv::student_cast_proposed(
                    voter.intent, ctx.cl, ctx.election.pk, voter.keys, target,
                    cancel, cast_rng, attacker);
                if (forged.sent) {
                    submit(forged.sent->vote, forged.sent->q, forged.sent->r);
                } else {
                    cancelled = true;
                }
            }
        }

        // --- verification stage --------------------------------------------
        if (!s.with_verification) continue;

        actors::VerificationOutcome outcome;
        outcome.variant = s.variant;
        if (cancelled) {
            // Malware claims success; there is nothing stored. The fabricated
            // QR payload leads to an unknown voteref and an alarm.
            msg::VoteRefToken fake{cast_rng.bytes16()};
            outcome.alarm = true;
            if (s.variant == ProtocolVariant::original) {
                auto resp = vfs.verification_response_original(fake);
                outcome.alarm = !resp.ok();
            } else {
                auto resp = vfs.verification_response_proposed(fake);
                outcome.alarm = !resp.ok();
            }
            outcome.accepted = !outcome.alarm;
        } else if (!voteref) {
            outcome.alarm = true;  // store rejected the ballot
        } else {
            msg::QrPayload qr = actors::make_qr_payload(*qr_r, *voteref);
            qr = msg::decode_qr(msg::encode_qr(qr));  // screen-to-camera channel
            if (s.variant == ProtocolVariant::original) {
                auto resp = vfs.verification_response_original(
                    msg::VoteRefToken{qr.voteref});
                auto display = actors::verifapp_verify_original(
                    qr, *resp.value, ctx.election.pk, verifapp);
                outcome = actors::voter_check_original(display, voter.intent);
            } else {
                auto resp = vfs.verification_response_proposed(
                    msg::VoteRefToken{qr.voteref});
                auto display = actors::verifapp_verify_proposed(
                    qr, *resp.value, ctx.election.pk, verifapp);
                outcome = actors::voter_check_proposed(
                    display.display, voters[v].q_right_value, voter.intent.beta,
                    s.t());
            }
        }

        out.accept.add(outcome.accepted);
        out.alarm.add(outcome.alarm);
        if (attacked) out.detection.add(outcome.alarm);
        if (s.variant == ProtocolVariant::proposed && !attacked) {
            out.alpha_eq_beta.add(outcome.matched_index &&
                                  *outcome.matched_index == voter.intent.beta);
        }

        if (s.record_trials) {
            std::ostringstream detail;
            detail << voter.intent.voter_id << " beta=" << voter.intent.beta;
            if (outcome.matched_index) detail << " alpha=" << *outcome.matched_index;
            if (cancelled) detail << " cancelled";
            out.rows.push_back(TrialRow{
                trial, outcome.accepted ? "accept" : "alarm", detail.str()});
        }
    }

    if (s.with_tally) {
        crypto::MeteredCrypto counting(out.counters.counting);
        out.tally = actors::counting_tally(vfs.ballots(), ctx.election.sk, registry,
                                           derive_seed(trial_seed, "mix"), counting);
    }
    out.store_attempts = vfs.store_attempts();
    out.store_rejects = vfs.store_rejects();
    return out;
}

struct FoolingTrialResult {
    ActorCounters counters;
    RateStats success;
    std::uint64_t attempts = 0;
    std::vector<TrialRow> rows;
};

FoolingTrialResult run_fooling_trial(const ElectionContext& ctx,
                                     std::uint64_t trial) {
    const Scenario& s = *ctx.scenario;
    Bytes32 trial_seed = derive_seed(s.seed, trial);

    FoolingTrialResult out;
    VoterSetup voter = make_voter(ctx, trial_seed, 0);
    DeterministicRng cast_rng(derive_seed(trial_seed, "cast-0"));
    crypto::MeteredCrypto voterapp(out.counters.voterapp);
    crypto::MeteredCrypto attacker(out.counters.attacker);

    // Honest cast; the malware observed everything the app did, including q
    // and the stored ciphertext, so it can compute the verification response
    // the VFS will send.
    auto cast = actors::voterapp_cast_proposed(voter.intent, ctx.cl,
                                               ctx.election.pk, voter.keys,
                                               cast_rng, voterapp);
    crypto::HashDigest key = attacker.hash(view(cast.vote.ciphertext.bytes));
    crypto::SymCiphertext e_sym = attacker.sym_encrypt(key, view(cast.q.q));

    std::uint32_t target = pick_target(s, voter.intent);
    DeterministicRng search_rng(derive_seed(trial_seed, "search"));
    adv::FoolingResult result = adv::fooling_search(
        ctx.election.pk, target, e_sym, cast.q.q_right(), s.t(),
        s.adversary->search_budget, search_rng, attacker);

    out.success.add(result.found);
    out.attempts = result.attempts;
    if (s.record_trials) {
        out.rows.push_back(TrialRow{trial, result.found ? "found" : "exhausted",
                                    "attempts=" + std::to_string(result.attempts)});
    }
    return out;
}

struct SnifferTrialResult {
    ActorCounters counters;
    std::map<std::string, RateStats> guesses;
    std::vector<TrialRow> rows;
};

SnifferTrialResult run_sniffer_trial(const ElectionContext& ctx,
                                     std::uint64_t trial) {
    const Scenario& s = *ctx.scenario;
    Bytes32 trial_seed = derive_seed(s.seed, trial);

    SnifferTrialResult out;
    actors::Registry registry;
    VoterSetup voter = make_voter(ctx, trial_seed, 0);
    registry.enroll(voter.keys);

    actors::Vfs vfs(s.variant, ctx.cl, registry, derive_seed(trial_seed, "voteref"),
                    out.counters.vfs, nullptr);
    crypto::MeteredCrypto voterapp(out.counters.voterapp);
    crypto::MeteredCrypto verifapp(out.counters.verifapp);
    DeterministicRng cast_rng(derive_seed(trial_seed, "cast-0"));

    adv::SnifferTranscript transcript;
    if (s.variant == ProtocolVariant::original) {
        auto cast = actors::voterapp_cast_original(
            voter.intent, ctx.cl, ctx.election.pk, voter.keys, cast_rng, voterapp);
        auto stored = vfs.store(cast.vote, std::nullopt);
        msg::QrPayload qr = actors::make_qr_payload(cast.r, stored.voteref);
        auto resp = vfs.verification_response_original(stored.voteref);
        auto display = actors::verifapp_verify_original(qr, *resp.value,
                                                        ctx.election.pk, verifapp);
        transcript = adv::capture_transcript_original(qr, *resp.value, display);
    } else {
        auto cast = actors::voterapp_cast_proposed(
            voter.intent, ctx.cl, ctx.election.pk, voter.keys, cast_rng, voterapp);
        auto stored = vfs.store(cast.vote, cast.q);
        msg::QrPayload qr = actors::make_qr_payload(cast.r, stored.voteref);
        auto resp = vfs.verification_response_proposed(stored.voteref);
        auto display = actors::verifapp_verify_proposed(qr, *resp.value,
                                                        ctx.election.pk, verifapp);
        transcript = adv::capture_transcript_proposed(qr, *resp.value, display);
    }

    if (s.leak_beta_in_transcript) {
        transcript.leaked_choice_index = voter.intent.beta;
    } else if (transcript.leaked_choice_index) {
        throw Error("taint: leaked choice index in a regular transcript");
    }

    DeterministicRng guess_rng(derive_seed(trial_seed, "guess"));
    std::ostringstream detail;
    detail << "beta=" << voter.intent.beta;
    for (adv::SnifferStrategy strat : adv::kAllSnifferStrategies) {
        std::size_t guess = adv::sniffer_guess(transcript, strat, guess_rng);
        bool correct = guess == voter.intent.beta;
        out.guesses[std::string(adv::strategy_name(strat))].add(correct);
        detail << ' ' << adv::strategy_name(strat) << '=' << guess;
    }
    if (s.record_trials) {
        out.rows.push_back(TrialRow{trial, "guessed", detail.str()});
    }
    return out;
}

}  // namespace

ExperimentReport run_scenario(const Scenario& scenario) {
    scenario.validate();

    ElectionContext ctx;
    ctx.scenario = &scenario;
    ctx.cl = msg::make_candidate_list(scenario.m);
    ctx.election =
        crypto::keygen_election(derive_seed(scenario.seed, "election-keys"));

    ExperimentReport report;
    report.scenario = scenario;

    const auto kind = scenario.adversary
                          ? std::optional<adv::AdversaryKind>(scenario.adversary->kind)
                          : std::nullopt;

    if (kind == adv::AdversaryKind::fooling_search) {
        auto results = run_trials<FoolingTrialResult>(
            scenario.trials, scenario.threads,
            [&](std::uint64_t i) { return run_fooling_trial(ctx, i); });
        RateStats success;
        for (const auto& r : results) {
            report.counters += r.counters;
            success += r.success;
            for (const auto& row : r.rows) report.trial_rows.push_back(row);
        }
        report.rates["fooling_success"] = success;
        const double p = std::ldexp(1.0, -scenario.t());  // 2^-t
        report.analytic["per_attempt_probability"] = p;
        report.analytic["expected_success_rate"] =
            1.0 - std::pow(1.0 - p, static_cast<double>(
                                        scenario.adversary->search_budget));
        report.analytic["paper_per_guess_bound"] =
            (1.0 / static_cast<double>(scenario.m)) * std::ldexp(1.0, -32);
    } else if (kind == adv::AdversaryKind::verifapp_sniffer) {
        auto results = run_trials<SnifferTrialResult>(
            scenario.trials, scenario.threads,
            [&](std::uint64_t i) { return run_sniffer_trial(ctx, i); });
        for (const auto& r : results) {
            report.counters += r.counters;
            for (const auto& [name, stats] : r.guesses) {
                report.rates["guess_" + name] += stats;
            }
            for (const auto& row : r.rows) report.trial_rows.push_back(row);
        }
        report.analytic["random_guess_rate"] =
            1.0 / static_cast<double>(scenario.m);
    } else {
        auto results = run_trials<ElectionTrialResult>(
            scenario.trials, scenario.threads,
            [&](std::uint64_t i) { return run_election_trial(ctx, i); });
        RateStats accept, alarm, detection, alpha_eq_beta;
        std::uint64_t attempts = 0, rejects = 0;
        actors::TallyResult tally;
        for (std::uint64_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            report.counters += r.counters;
            accept += r.accept;
            alarm += r.alarm;
            detection += r.detection;
            alpha_eq_beta += r.alpha_eq_beta;
            attempts += r.store_attempts;
            rejects += r.store_rejects;
            if (scenario.with_tally) {
                for (const auto& [cand, n] : r.tally.counts) tally.counts[cand] += n;
                tally.ballots_counted += r.tally.ballots_counted;
                tally.ballots_superseded += r.tally.ballots_superseded;
            }
            for (const auto& row : r.rows) report.trial_rows.push_back(row);
            if (scenario.record_events) {
                report.events.append_from(r.events,
                                          "trial=" + std::to_string(i) + " ");
            }
        }
        if (scenario.with_verification) {
            report.rates["accept"] = accept;
            report.rates["alarm"] = alarm;
            if (scenario.adversary) report.rates["detection"] = detection;
            if (scenario.variant == ProtocolVariant::proposed &&
                !scenario.adversary) {
                report.rates["alpha_eq_beta"] = alpha_eq_beta;
            }
        }
        if (scenario.with_tally) report.tally = tally;
        report.analytic["store_attempts"] = static_cast<double>(attempts);
        report.analytic["store_rejects"] = static_cast<double>(rejects);
        if (scenario.adversary &&
            scenario.variant == ProtocolVariant::proposed) {
            const double p = std::ldexp(1.0, -scenario.t());
            report.analytic["expected_detection_rate"] =
                1.0 - p * std::pow(1.0 - p, static_cast<double>(scenario.m - 1));
        }
    }
    return report;
}

}  // namespace ivote::sim
