#ifndef IVOTE_ACTORS_HPP
#define IVOTE_ACTORS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivote/counters.hpp"
#include "ivote/crypto.hpp"
#include "ivote/messages.hpp"
#include "ivote/rng.hpp"

// -----------------------------------------------------------------------------
// The five protocol roles, for both variants:
//
//   original   vote = Sign(AsymEnc(c, r)); verification returns the stored
//              ciphertext, VerifApp re-encrypts every candidate under the QR
//              randomness and shows the matching candidate in plain form.
//   proposed   the cast additionally carries q = q_left || q_right; the
//              verification response replaces the ciphertext with
//              E_sym = SymEnc_{H(E_asym)}(q), and VerifApp shows the ordered
//              list of trial decryptions q_j = SymDec_{H(E_asym^j)}(E_sym).
//              Only the voter can tell which entry is the real q.
//
// voter_check is deliberately a separate operation from verifapp_verify: the
// boundary between them is exactly what a compromised verification device
// can observe.
// -----------------------------------------------------------------------------

namespace ivote::actors {

enum class ProtocolVariant { original, proposed };

std::string_view variant_name(ProtocolVariant v);
ProtocolVariant variant_from_name(std::string_view name);

struct VoterIntent {
    std::string voter_id;
    std::size_t beta = 1;            // 1-based index into CL
    std::uint32_t candidate_id = 0;  // CL[beta].id
    std::string chosen_q_right;      // 4 alphabet characters; proposed only
};

// Append-only protocol event log with a logical clock.
class EventLog {
   public:
    struct Event {
        std::uint64_t ts;
        std::string actor;
        std::string event;
        std::string detail;
    };

    void append(std::string actor, std::string event, std::string detail);
    void append_from(const EventLog& other, const std::string& detail_prefix);
    const std::vector<Event>& events() const { return events_; }
    void write_jsonl(std::ostream& out) const;

   private:
    std::vector<Event> events_;
    std::uint64_t next_ts_ = 0;
};

// Eligible-voter registry with registered verification keys; stands in for
// the national ID-card PKI.
class Registry {
   public:
    void enroll(const crypto::VoterKeyPair& keys);
    bool eligible(const std::string& voter_id) const;
    const crypto::VerifyKey* key(const std::string& voter_id) const;
    std::size_t size() const { return keys_.size(); }

   private:
    std::map<std::string, crypto::VerifyKey> keys_;
};

// ---------------------------------------------------------------------------
// VoterApp
// ---------------------------------------------------------------------------

struct CastOriginal {
    msg::SignEncVote vote;
    crypto::Randomness r;  // retained locally for the QR payload
};

struct CastProposed {
    msg::SignEncVote vote;
    msg::VerificationParameter q;
    crypto::Randomness r;
};

CastOriginal voterapp_cast_original(const VoterIntent& intent,
                                    const msg::CandidateList& cl,
                                    const crypto::PublicKey& pk_s,
                                    const crypto::VoterKeyPair& keys,
                                    DeterministicRng& rng,
                                    crypto::MeteredCrypto& voterapp);

CastProposed voterapp_cast_proposed(const VoterIntent& intent,
                                    const msg::CandidateList& cl,
                                    const crypto::PublicKey& pk_s,
                                    const crypto::VoterKeyPair& keys,
                                    DeterministicRng& rng,
                                    crypto::MeteredCrypto& voterapp);

msg::QrPayload make_qr_payload(const crypto::Randomness& r,
                               const msg::VoteRefToken& voteref);

// ---------------------------------------------------------------------------
// VFS — forwarding and storage merged into one state bundle; the event log
// tags entries by sub-role so the split can be reintroduced later.
// ---------------------------------------------------------------------------

enum class StoreStatus { stored, bad_signature, ineligible_voter };

struct StoreResult {
    StoreStatus status = StoreStatus::stored;
    msg::VoteRefToken voteref{};
    bool ok() const { return status == StoreStatus::stored; }
};

enum class RespStatus { ok, unknown_token, consumed_token };

class Vfs {
   public:
    struct RespOriginal {
        crypto::AsymCiphertext e_asym;
        msg::CandidateList cl;
    };
    struct RespProposed {
        msg::CandidateList cl;
        crypto::SymCiphertext e_sym;
    };
    template <typename T>
    struct Response {
        RespStatus status = RespStatus::ok;
        std::optional<T> value;
        bool ok() const { return status == RespStatus::ok; }
    };

    Vfs(ProtocolVariant variant, msg::CandidateList cl, const Registry& registry,
        const Bytes32& token_seed, sim::OpCounters& counters,
        EventLog* log = nullptr);

    // The authenticated channel delivers (SignEncVote, q). q must be present
    // iff the election runs the proposed variant (ConfigError otherwise).
    StoreResult store(const msg::SignEncVote& vote,
                      const std::optional<msg::VerificationParameter>& q);

    // Single-use: the voteref is consumed by a successful response.
    Response<RespOriginal> verification_response_original(const msg::VoteRefToken& t);
    Response<RespProposed> verification_response_proposed(const msg::VoteRefToken& t);

    ProtocolVariant variant() const { return variant_; }
    const msg::CandidateList& candidate_list() const { return cl_; }
    const std::map<std::string, std::vector<msg::BallotRecord>>& ballots() const {
        return ballots_;
    }
    std::uint64_t store_attempts() const { return store_attempts_; }
    std::uint64_t store_rejects() const { return store_rejects_; }

    void write_store(std::ostream& out) const;

   private:
    const msg::BallotRecord* find(const msg::VoteRefToken& t) const;
    msg::BallotRecord* find(const msg::VoteRefToken& t);
    void log(std::string_view actor, std::string_view event, std::string detail);

    ProtocolVariant variant_;
    msg::CandidateList cl_;
    const Registry* registry_;
    DeterministicRng token_rng_;
    sim::OpCounters* counters_;
    EventLog* log_;
    std::map<std::string, std::vector<msg::BallotRecord>> ballots_;
    std::map<msg::VoteRefToken, std::pair<std::string, std::uint64_t>> token_index_;
    std::uint64_t store_attempts_ = 0;
    std::uint64_t store_rejects_ = 0;
    std::uint64_t clock_ = 0;
};

// ---------------------------------------------------------------------------
// VerifApp — everything below runs on the verification device and is
// therefore visible to a device-level sniffer.
// ---------------------------------------------------------------------------

struct OriginalDisplay {
    std::vector<crypto::AsymCiphertext> reencryptions;  // E^1..E^m
    std::optional<std::size_t> matched_index;           // ell, 1-based
    std::optional<msg::Candidate> displayed;            // c_ell in plain form
};

struct ProposedDisplay {
    std::vector<crypto::AsymCiphertext> reencryptions;
    msg::DisplayList display;  // q_1..q_m with 4-symbol truncations
};

OriginalDisplay verifapp_verify_original(const msg::QrPayload& payload,
                                         const Vfs::RespOriginal& resp,
                                         const crypto::PublicKey& pk_s,
                                         crypto::MeteredCrypto& verifapp);

ProposedDisplay verifapp_verify_proposed(const msg::QrPayload& payload,
                                         const Vfs::RespProposed& resp,
                                         const crypto::PublicKey& pk_s,
                                         crypto::MeteredCrypto& verifapp);

// ---------------------------------------------------------------------------
// Voter check — the human side of verification.
// ---------------------------------------------------------------------------

struct VerificationOutcome {
    ProtocolVariant variant = ProtocolVariant::original;
    bool accepted = false;
    bool alarm = false;
    std::optional<std::size_t> matched_index;  // alpha (proposed) / ell (original)
    std::optional<msg::Candidate> displayed;
};

VerificationOutcome voter_check_original(const OriginalDisplay& display,
                                         const VoterIntent& intent);

/// Models the human scan of the display list at a configurable comparison
/// width: the last `truncation_bits` bits of each q_j are compared with the
/// voter's q_right. Accept only on a unique match at the voter's own index;
/// no match, a match elsewhere, or multiple matches all raise the alarm.
VerificationOutcome voter_check_proposed(const msg::DisplayList& display,
                                         std::uint32_t q_right,
                                         std::size_t beta,
                                         int truncation_bits);

/// truncation_bits must be one of {8, 16, 24, 32}.
bool tail_bits_match(const Bytes32& value, std::uint32_t q_right, int truncation_bits);

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

struct TallyResult {
    std::map<std::uint32_t, std::uint64_t> counts;
    std::uint64_t ballots_counted = 0;
    std::uint64_t ballots_superseded = 0;
};

/// Keeps the highest-seq ballot per eligible voter, shuffles with the seeded
/// stand-in for the mixnet, decrypts, counts. The result is independent of
/// mix_seed. AuditError if any retained ballot fails to decrypt.
TallyResult counting_tally(
    const std::map<std::string, std::vector<msg::BallotRecord>>& store,
    const crypto::SecretKey& sk_s, const Registry& registry,
    const Bytes32& mix_seed, crypto::MeteredCrypto& counting);

}  // namespace ivote::actors

#endif
