#include "ivote/adversaries.hpp"

#include <algorithm>
#include <cmath>

namespace ivote::adv {

std::string_view adversary_kind_name(AdversaryKind k) {
    switch (k) {
        case AdversaryKind::student_substitution: return "student_substitution";
        case AdversaryKind::fooling_search: return "fooling_search";
        case AdversaryKind::verifapp_sniffer: return "verifapp_sniffer";
    }
    return "?";
}

AdversaryKind adversary_kind_from_name(std::string_view name) {
    if (name == "student_substitution") return AdversaryKind::student_substitution;
    if (name == "fooling_search") return AdversaryKind::fooling_search;
    if (name == "verifapp_sniffer") return AdversaryKind::verifapp_sniffer;
    throw ConfigError("unknown adversary kind: " + std::string(name));
}

void AdversaryConfig::validate() const {
    if (search_budget < 1) throw ConfigError("search_budget must be >= 1");
    if (truncation_bits != 8 && truncation_bits != 16 && truncation_bits != 24 &&
        truncation_bits != 32) {
        throw ConfigError("truncation_bits must be 8, 16, 24 or 32");
    }
}

// ---------------------------------------------------------------------------
// Student's Attack
// ---------------------------------------------------------------------------

namespace {

std::uint32_t checked_target(const msg::CandidateList& cl,
                             const actors::VoterIntent& intent,
                             std::uint32_t target) {
    if (!cl.index_of(target)) throw ConfigError("target candidate not in list");
    if (target == intent.candidate_id) {
        throw ConfigError("target candidate equals the voter's choice");
    }
    return target;
}

}  // namespace

StudentCastOriginal student_cast_original(const actors::VoterIntent& intent,
                                          const msg::CandidateList& cl,
                                          const crypto::PublicKey& pk_s,
                                          const crypto::VoterKeyPair& keys,
                                          std::uint32_t target_candidate_id,
                                          bool cancel, DeterministicRng& rng,
                                          crypto::MeteredCrypto& attacker) {
    checked_target(cl, intent, target_candidate_id);
    if (cancel) return {};  // vote silently dropped; voter is told it succeeded

    actors::CastOriginal cast;
    cast.r.bytes = rng.bytes32();
    cast.vote.ciphertext = attacker.asym_encrypt(pk_s, target_candidate_id, cast.r);
    cast.vote.signature = attacker.sign(keys, view(cast.vote.ciphertext.bytes));
    cast.vote.voter_id = keys.voter_id;
    return StudentCastOriginal{cast};
}

StudentCastProposed student_cast_proposed(const actors::VoterIntent& intent,
                                          const msg::CandidateList& cl,
                                          const crypto::PublicKey& pk_s,
                                          const crypto::VoterKeyPair& keys,
                                          std::uint32_t target_candidate_id,
                                          bool cancel, DeterministicRng& rng,
                                          crypto::MeteredCrypto& attacker) {
    checked_target(cl, intent, target_candidate_id);
    if (cancel) return {};

    actors::CastProposed cast;
    cast.r.bytes = rng.bytes32();
    cast.vote.ciphertext = attacker.asym_encrypt(pk_s, target_candidate_id, cast.r);
    cast.vote.signature = attacker.sign(keys, view(cast.vote.ciphertext.bytes));
    cast.vote.voter_id = keys.voter_id;
    cast.q.q = rng.bytes32();  // fresh random q, unrelated to the voter's characters
    return StudentCastProposed{cast};
}

// ---------------------------------------------------------------------------
// Fooling search
// ---------------------------------------------------------------------------

FoolingResult fooling_search(const crypto::PublicKey& pk_s,
                             std::uint32_t target_candidate_id,
                             const crypto::SymCiphertext& e_sym,
                             std::uint32_t q_right, int truncation_bits,
                             std::uint64_t budget, DeterministicRng& rng,
                             crypto::MeteredCrypto& attacker) {
    FoolingResult result;
    while (result.attempts < budget) {
        ++result.attempts;
        crypto::Randomness r_star{rng.bytes32()};
        crypto::AsymCiphertext forged =
            attacker.asym_encrypt(pk_s, target_candidate_id, r_star);
        crypto::HashDigest key = attacker.hash(view(forged.bytes));
        Bytes32 trial = attacker.sym_decrypt(key, e_sym);
        if (actors::tail_bits_match(trial, q_right, truncation_bits)) {
            result.found = true;
            result.r_star = r_star;
            result.forged = forged;
            return result;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Sniffer
// ---------------------------------------------------------------------------

SnifferTranscript capture_transcript_original(const msg::QrPayload& qr,
                                              const actors::Vfs::RespOriginal& resp,
                                              const actors::OriginalDisplay& display) {
    SnifferTranscript t;
    t.variant = actors::ProtocolVariant::original;
    t.qr = qr;
    t.cl = resp.cl;
    t.e_asym = resp.e_asym;
    t.reencryptions = display.reencryptions;
    t.displayed_index = display.matched_index;
    return t;
}

SnifferTranscript capture_transcript_proposed(const msg::QrPayload& qr,
                                              const actors::Vfs::RespProposed& resp,
                                              const actors::ProposedDisplay& display) {
    SnifferTranscript t;
    t.variant = actors::ProtocolVariant::proposed;
    t.qr = qr;
    t.cl = resp.cl;
    t.e_sym = resp.e_sym;
    t.reencryptions = display.reencryptions;
    t.display = display.display;
    return t;
}

std::string_view strategy_name(SnifferStrategy s) {
    switch (s) {
        case SnifferStrategy::uniform_random: return "uniform_random";
        case SnifferStrategy::frequency_analysis: return "frequency_analysis";
        case SnifferStrategy::entropy_rank: return "entropy_rank";
    }
    return "?";
}

namespace {

std::size_t argmax_with_ties(const std::vector<double>& scores,
                             DeterministicRng& rng) {
    double best = *std::max_element(scores.begin(), scores.end());
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] == best) ties.push_back(i + 1);
    }
    return ties[rng.below(ties.size())];
}

// Pearson statistic of the entry's high-nibble histogram against uniform.
// An entry carrying structured bytes sticks out; uniform entries tie up to
// noise.
double nibble_chi2(const Bytes32& q) {
    std::array<int, 16> bins{};
    for (auto b : q) ++bins[b >> 4];
    const double expected = 32.0 / 16.0;
    double chi2 = 0.0;
    for (int c : bins) {
        double d = c - expected;
        chi2 += d * d / expected;
    }
    return chi2;
}

// Printable-likeness: how many bytes are ASCII codes of display-alphabet
// symbols. Tail bytes count extra, since that is where voter-chosen
// characters would sit if they were embedded verbatim.
double printable_score(const Bytes32& q) {
    int total = 0, tail = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (msg::in_alphabet(static_cast<char>(q[i]))) {
            ++total;
            if (i >= 28) ++tail;
        }
    }
    return total + 3.0 * tail;
}

}  // namespace

std::size_t sniffer_guess(const SnifferTranscript& transcript, SnifferStrategy s,
                          DeterministicRng& rng) {
    // Anything on the screen is fair game for any strategy.
    if (transcript.leaked_choice_index) return *transcript.leaked_choice_index;
    if (transcript.variant == actors::ProtocolVariant::original &&
        transcript.displayed_index) {
        return *transcript.displayed_index;
    }

    const std::size_t m = transcript.cl.m();
    if (s == SnifferStrategy::uniform_random || !transcript.display) {
        return 1 + rng.below(m);
    }

    std::vector<double> scores;
    scores.reserve(m);
    for (const auto& entry : transcript.display->entries) {
        scores.push_back(s == SnifferStrategy::frequency_analysis
                             ? nibble_chi2(entry.q)
                             : printable_score(entry.q));
    }
    return argmax_with_ties(scores, rng);
}

}  // namespace ivote::adv
