#ifndef IVOTE_ADVERSARIES_HPP
#define IVOTE_ADVERSARIES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "ivote/actors.hpp"

// -----------------------------------------------------------------------------
// Threat model, realized as pluggable attacker behaviors:
//
//   student_substitution  malware in VoterApp casts a different candidate
//                         while reporting success for the voter's choice.
//   fooling_search        malicious VoterApp searching encryption randomness
//                         whose display entry imitates the voter's chosen
//                         characters.
//   verifapp_sniffer      software on the verification device that observes
//                         everything VerifApp receives, computes and shows,
//                         and tries to guess the vote.
// -----------------------------------------------------------------------------

namespace ivote::adv {

enum class AdversaryKind { student_substitution, fooling_search, verifapp_sniffer };

std::string_view adversary_kind_name(AdversaryKind k);
AdversaryKind adversary_kind_from_name(std::string_view name);

struct AdversaryConfig {
    AdversaryKind kind = AdversaryKind::student_substitution;
    std::optional<std::uint32_t> target_candidate;
    std::uint64_t search_budget = 1;
    int truncation_bits = 24;  // bits of q compared; desk scale uses 8
    bool cancel_instead_of_divert = false;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Student's Attack
// ---------------------------------------------------------------------------

struct StudentCastOriginal {
    std::optional<actors::CastOriginal> sent;  // nullopt: vote silently cancelled
};
struct StudentCastProposed {
    std::optional<actors::CastProposed> sent;
};

StudentCastOriginal student_cast_original(const actors::VoterIntent& intent,
                                          const msg::CandidateList& cl,
                                          const crypto::PublicKey& pk_s,
                                          const crypto::VoterKeyPair& keys,
                                          std::uint32_t target_candidate_id,
                                          bool cancel, DeterministicRng& rng,
                                          crypto::MeteredCrypto& attacker);

// The proposed-variant malware transmits a fresh random q: forwarding the
// true q would display the voter's characters at the substituted index and
// expose the attack in every run.
StudentCastProposed student_cast_proposed(const actors::VoterIntent& intent,
                                          const msg::CandidateList& cl,
                                          const crypto::PublicKey& pk_s,
                                          const crypto::VoterKeyPair& keys,
                                          std::uint32_t target_candidate_id,
                                          bool cancel, DeterministicRng& rng,
                                          crypto::MeteredCrypto& attacker);

// ---------------------------------------------------------------------------
// Fooling search
// ---------------------------------------------------------------------------

struct FoolingResult {
    bool found = false;
    std::uint64_t attempts = 0;
    crypto::Randomness r_star{};
    crypto::AsymCiphertext forged{};
};

/// Samples random r* until the trial decryption
/// SymDec_{H(AsymEnc(pk, target, r*))}(e_sym) agrees with the voter's q_right
/// on the last truncation_bits bits, or the budget runs out. Per-attempt
/// success probability is 2^-truncation_bits.
FoolingResult fooling_search(const crypto::PublicKey& pk_s,
                             std::uint32_t target_candidate_id,
                             const crypto::SymCiphertext& e_sym,
                             std::uint32_t q_right, int truncation_bits,
                             std::uint64_t budget, DeterministicRng& rng,
                             crypto::MeteredCrypto& attacker);

// ---------------------------------------------------------------------------
// Sniffer
// ---------------------------------------------------------------------------

// Everything observable on the verification device. The capture functions
// take only device-side values, so nothing here can depend on the voter's
// index or chosen characters; leaked_choice_index exists solely as the
// negative-control hook and stays empty in real captures.
struct SnifferTranscript {
    actors::ProtocolVariant variant = actors::ProtocolVariant::original;
    msg::QrPayload qr;
    msg::CandidateList cl;
    std::vector<crypto::AsymCiphertext> reencryptions;
    std::optional<crypto::AsymCiphertext> e_asym;     // original response
    std::optional<std::size_t> displayed_index;       // original screen: ell
    std::optional<crypto::SymCiphertext> e_sym;       // proposed response
    std::optional<msg::DisplayList> display;          // proposed screen
    std::optional<std::size_t> leaked_choice_index;   // test-only
};

SnifferTranscript capture_transcript_original(const msg::QrPayload& qr,
                                              const actors::Vfs::RespOriginal& resp,
                                              const actors::OriginalDisplay& display);

SnifferTranscript capture_transcript_proposed(const msg::QrPayload& qr,
                                              const actors::Vfs::RespProposed& resp,
                                              const actors::ProposedDisplay& display);

enum class SnifferStrategy { uniform_random, frequency_analysis, entropy_rank };

inline constexpr std::array<SnifferStrategy, 3> kAllSnifferStrategies = {
    SnifferStrategy::uniform_random, SnifferStrategy::frequency_analysis,
    SnifferStrategy::entropy_rank};

std::string_view strategy_name(SnifferStrategy s);

/// Guess the voter's candidate index (1-based) from a transcript. On
/// original-variant transcripts the vote is on the screen, so every strategy
/// reads it off and is right with probability 1.
std::size_t sniffer_guess(const SnifferTranscript& transcript, SnifferStrategy s,
                          DeterministicRng& rng);

}  // namespace ivote::adv

#endif
