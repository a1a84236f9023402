#ifndef IVOTE_MESSAGES_HPP
#define IVOTE_MESSAGES_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ivote/common.hpp"
#include "ivote/crypto.hpp"
#include "ivote/rng.hpp"

// -----------------------------------------------------------------------------
// Every message, identifier and encoding the actors exchange. All types are
// immutable values; all encodings are canonical (encode/decode are exact
// inverse pairs on their valid domains).
// -----------------------------------------------------------------------------

namespace ivote::msg {

struct Candidate {
    std::uint32_t id = 0;
    std::string label;
    bool operator==(const Candidate&) const = default;
};

// Ordered candidate list; the order carries index semantics, so it is fixed
// at construction and repeated verbatim in every message that carries it.
class CandidateList {
   public:
    CandidateList() = default;
    explicit CandidateList(std::vector<Candidate> candidates);

    std::size_t m() const { return candidates_.size(); }
    const std::vector<Candidate>& candidates() const { return candidates_; }
    // 1-based accessor matching the protocol's index convention.
    const Candidate& at_index(std::size_t index1) const;
    std::optional<std::size_t> index_of(std::uint32_t candidate_id) const;

    bool operator==(const CandidateList&) const = default;

   private:
    std::vector<Candidate> candidates_;
};

CandidateList make_candidate_list(std::size_t m);

// -----------------------------------------------------------------------------
// Verification-parameter display scheme.
//
// Voters pick 4 characters from a 64-symbol alphabet. Screens render any
// 32-byte value as 4 symbols by mapping each of the last 4 bytes through a
// fixed 256-entry table, alphabet[byte mod 64]. The alphabet is ordered so
// the table is a fixed point on ASCII letters, which keeps hand-written
// letter examples stable under rendering.
// -----------------------------------------------------------------------------

inline constexpr std::string_view kDisplayAlphabet =
    "+ABCDEFGHIJKLMNOPQRSTUVWXYZ/01234abcdefghijklmnopqrstuvwxyz56789";

bool in_alphabet(char c);
char display_symbol(std::uint8_t byte);

/// Rendering of the last 32 bits of q (byte positions 29..32) as 4 symbols.
/// Total: every byte renders.
std::string truncate_display(const Bytes32& q);

/// Canonical byte codec for voter-chosen characters: each character is its
/// ASCII code, one byte per character, big-endian in the 32-bit value.
/// AlphabetError when a character (or byte) is outside the alphabet.
std::uint32_t q_right_from_chars(std::string_view chars);
std::string q_right_to_chars(std::uint32_t value);

/// Uniform 32-bit value whose 4-symbol rendering equals `chars`: each byte is
/// drawn uniformly from the 4 preimages of its symbol under display_symbol.
/// This is what VoterApp transmits; wrong-key decryptions are uniform over
/// all 2^32 tails, so the transmitted tail must be too.
std::uint32_t sample_q_right_value(std::string_view chars, DeterministicRng& rng);

std::string random_q_right_chars(DeterministicRng& rng);

// q = q_left || q_right, 256 bits total.
struct VerificationParameter {
    Bytes32 q{};

    std::uint32_t q_right() const {
        return (std::uint32_t{q[28]} << 24) | (std::uint32_t{q[29]} << 16) |
               (std::uint32_t{q[30]} << 8) | std::uint32_t{q[31]};
    }
    bool operator==(const VerificationParameter&) const = default;
};

VerificationParameter make_verification_parameter(std::uint32_t q_right,
                                                  DeterministicRng& rng);

// -----------------------------------------------------------------------------
// voteref — opaque single-use receipt for a stored ballot.
// -----------------------------------------------------------------------------

struct VoteRefToken {
    Bytes16 token{};
    bool operator==(const VoteRefToken&) const = default;
    auto operator<=>(const VoteRefToken&) const = default;
};

struct VoteRef {
    VoteRefToken token;
    std::uint64_t issued_at = 0;  // logical timestamp
    bool consumed = false;
};

// -----------------------------------------------------------------------------
// QR payload — the only data that crosses from VoterApp's screen to
// VerifApp's camera. Byte layout is bit-exact: 0x01 || r[32] || voteref[16],
// then unpadded base64.
// -----------------------------------------------------------------------------

inline constexpr std::uint8_t kQrVersion = 0x01;
inline constexpr std::size_t kQrPayloadBytes = 49;

struct QrPayload {
    std::uint8_t version = kQrVersion;
    Bytes32 r{};
    Bytes16 voteref{};
    bool operator==(const QrPayload&) const = default;
};

std::string encode_qr(const QrPayload& payload);
QrPayload decode_qr(std::string_view text);

std::string base64_encode(ByteView data);
Bytes base64_decode(std::string_view text);

// -----------------------------------------------------------------------------
// Wire and storage records.
// -----------------------------------------------------------------------------

struct SignEncVote {
    crypto::AsymCiphertext ciphertext;
    crypto::Signature signature;
    std::string voter_id;
    bool operator==(const SignEncVote&) const = default;
};

struct BallotRecord {
    SignEncVote vote;
    std::optional<VerificationParameter> q;  // present iff proposed variant
    VoteRef voteref;
    std::uint64_t seq = 0;
};

struct DisplayEntry {
    Bytes32 q{};
    std::string chars;  // 4-symbol truncation
};

// Ordered m-tuple Q = {q_1..q_m}; entry order equals candidate-list order.
struct DisplayList {
    std::vector<DisplayEntry> entries;
};

// Line-oriented ballot store records:
//   voter_id,seq,hex(ciphertext),hex(signature),hex(q),hex(voteref)
// hex(q) is empty for the original variant.
void write_ballot_store(std::ostream& out, const std::vector<BallotRecord>& records);
std::vector<BallotRecord> read_ballot_store(std::istream& in);

}  // namespace ivote::msg

#endif
