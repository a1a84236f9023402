#include "ivote/messages.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>

namespace ivote::msg {

// ---------------------------------------------------------------------------
// Candidate list
// ---------------------------------------------------------------------------

CandidateList::CandidateList(std::vector<Candidate> candidates)
    : candidates_(std::move(candidates)) {
    if (candidates_.size() < 2) {
        throw ConfigError("candidate list needs at least 2 entries");
    }
    std::vector<std::uint32_t> ids;
    ids.reserve(candidates_.size());
    for (const auto& c : candidates_) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw ConfigError("duplicate candidate id");
    }
}

const Candidate& CandidateList::at_index(std::size_t index1) const {
    if (index1 < 1 || index1 > candidates_.size()) {
        throw RangeError("candidate index out of range");
    }
    return candidates_[index1 - 1];
}

std::optional<std::size_t> CandidateList::index_of(std::uint32_t candidate_id) const {
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
        if (candidates_[i].id == candidate_id) return i + 1;
    }
    return std::nullopt;
}

CandidateList make_candidate_list(std::size_t m) {
    std::vector<Candidate> cs;
    cs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        cs.push_back(Candidate{static_cast<std::uint32_t>(i + 1),
                               "candidate-" + std::to_string(i + 1)});
    }
    return CandidateList(std::move(cs));
}

// ---------------------------------------------------------------------------
// Display scheme
// ---------------------------------------------------------------------------

namespace {

// alphabet index for a character, -1 if absent
constexpr std::array<int, 256> build_index_table() {
    std::array<int, 256> t{};
    for (auto& v : t) v = -1;
    for (std::size_t i = 0; i < kDisplayAlphabet.size(); ++i) {
        t[static_cast<unsigned char>(kDisplayAlphabet[i])] = static_cast<int>(i);
    }
    return t;
}
constexpr std::array<int, 256> kAlphabetIndex = build_index_table();

}  // namespace

bool in_alphabet(char c) { return kAlphabetIndex[static_cast<unsigned char>(c)] >= 0; }

char display_symbol(std::uint8_t byte) { return kDisplayAlphabet[byte & 63]; }

std::string truncate_display(const Bytes32& q) {
    std::string out(4, '\0');
    for (int i = 0; i < 4; ++i) out[i] = display_symbol(q[28 + i]);
    return out;
}

std::uint32_t q_right_from_chars(std::string_view chars) {
    if (chars.size() != 4) throw LengthError("q_right needs exactly 4 characters");
    std::uint32_t v = 0;
    for (char c : chars) {
        if (!in_alphabet(c)) throw AlphabetError("character outside alphabet");
        v = (v << 8) | static_cast<std::uint8_t>(c);
    }
    return v;
}

std::string q_right_to_chars(std::uint32_t value) {
    std::string out(4, '\0');
    for (int i = 0; i < 4; ++i) {
        char c = static_cast<char>((value >> (8 * (3 - i))) & 0xFF);
        if (!in_alphabet(c)) throw AlphabetError("byte is not an alphabet character");
        out[i] = c;
    }
    return out;
}

std::uint32_t sample_q_right_value(std::string_view chars, DeterministicRng& rng) {
    if (chars.size() != 4) throw LengthError("q_right needs exactly 4 characters");
    std::uint32_t v = 0;
    for (char c : chars) {
        int idx = kAlphabetIndex[static_cast<unsigned char>(c)];
        if (idx < 0) throw AlphabetError("character outside alphabet");
        std::uint8_t byte =
            static_cast<std::uint8_t>(idx + 64 * rng.below(4));
        v = (v << 8) | byte;
    }
    return v;
}

std::string random_q_right_chars(DeterministicRng& rng) {
    std::string out(4, '\0');
    for (auto& c : out) c = kDisplayAlphabet[rng.below(64)];
    return out;
}

VerificationParameter make_verification_parameter(std::uint32_t q_right,
                                                  DeterministicRng& rng) {
    VerificationParameter p;
    rng.fill(std::span<std::uint8_t>(p.q.data(), 28));  // q_left, 224 bits
    p.q[28] = static_cast<std::uint8_t>((q_right >> 24) & 0xFF);
    p.q[29] = static_cast<std::uint8_t>((q_right >> 16) & 0xFF);
    p.q[30] = static_cast<std::uint8_t>((q_right >> 8) & 0xFF);
    p.q[31] = static_cast<std::uint8_t>(q_right & 0xFF);
    return p;
}

// ---------------------------------------------------------------------------
// Base64 (standard alphabet, no padding) and the QR payload
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kB64 =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<int, 256> build_b64_index() {
    std::array<int, 256> t{};
    for (auto& v : t) v = -1;
    for (std::size_t i = 0; i < kB64.size(); ++i) {
        t[static_cast<unsigned char>(kB64[i])] = static_cast<int>(i);
    }
    return t;
}
constexpr std::array<int, 256> kB64Index = build_b64_index();

}  // namespace

std::string base64_encode(ByteView data) {
    std::string out;
    out.reserve((data.size() * 4 + 2) / 3);
    std::size_t i = 0;
    while (i + 3 <= data.size()) {
        std::uint32_t n = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(kB64[(n >> 18) & 63]);
        out.push_back(kB64[(n >> 12) & 63]);
        out.push_back(kB64[(n >> 6) & 63]);
        out.push_back(kB64[n & 63]);
        i += 3;
    }
    std::size_t rem = data.size() - i;
    if (rem == 1) {
        std::uint32_t n = data[i] << 16;
        out.push_back(kB64[(n >> 18) & 63]);
        out.push_back(kB64[(n >> 12) & 63]);
    } else if (rem == 2) {
        std::uint32_t n = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(kB64[(n >> 18) & 63]);
        out.push_back(kB64[(n >> 12) & 63]);
        out.push_back(kB64[(n >> 6) & 63]);
    }
    return out;
}

Bytes base64_decode(std::string_view text) {
    if (text.size() % 4 == 1) throw LengthError("truncated base64");
    Bytes out;
    out.reserve(text.size() * 3 / 4);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        int v = kB64Index[static_cast<unsigned char>(c)];
        if (v < 0) throw AlphabetError("character outside base64 alphabet");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
        }
    }
    // leftover bits must be zero padding of the final group
    if (bits > 0 && (acc & ((1u << bits) - 1)) != 0) {
        throw DecodeError("non-canonical base64 tail");
    }
    return out;
}

std::string encode_qr(const QrPayload& payload) {
    std::array<std::uint8_t, kQrPayloadBytes> buf{};
    buf[0] = payload.version;
    std::copy(payload.r.begin(), payload.r.end(), buf.begin() + 1);
    std::copy(payload.voteref.begin(), payload.voteref.end(), buf.begin() + 33);
    return base64_encode(buf);
}

QrPayload decode_qr(std::string_view text) {
    Bytes raw = base64_decode(text);
    if (raw.size() != kQrPayloadBytes) {
        throw LengthError("QR payload must be 49 bytes, got " +
                          std::to_string(raw.size()));
    }
    if (raw[0] != kQrVersion) throw VersionError("unsupported QR payload version");
    QrPayload p;
    p.version = raw[0];
    std::copy(raw.begin() + 1, raw.begin() + 33, p.r.begin());
    std::copy(raw.begin() + 33, raw.end(), p.voteref.begin());
    return p;
}

// ---------------------------------------------------------------------------
// Ballot store serialization
// ---------------------------------------------------------------------------

void write_ballot_store(std::ostream& out, const std::vector<BallotRecord>& records) {
    for (const auto& rec : records) {
        out << rec.vote.voter_id << ',' << rec.seq << ','
            << to_hex(view(rec.vote.ciphertext.bytes)) << ','
            << to_hex(view(rec.vote.signature.bytes)) << ','
            << (rec.q ? to_hex(view(rec.q->q)) : std::string{}) << ','
            << to_hex(view(rec.voteref.token.token)) << '\n';
    }
}

std::vector<BallotRecord> read_ballot_store(std::istream& in) {
    std::vector<BallotRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<std::string, 6> fields;
        std::size_t field = 0, start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (field >= fields.size()) throw DecodeError("too many fields");
                fields[field++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (field != fields.size()) throw DecodeError("too few fields");

        BallotRecord rec;
        rec.vote.voter_id = fields[0];
        rec.vote.signature.signer_id = fields[0];
        rec.seq = std::stoull(fields[1]);
        rec.vote.ciphertext.bytes = fixed_from_hex<64>(fields[2]);
        rec.vote.signature.bytes = fixed_from_hex<64>(fields[3]);
        if (!fields[4].empty()) {
            VerificationParameter q;
            q.q = fixed_from_hex<32>(fields[4]);
            rec.q = q;
        }
        rec.voteref.token.token = fixed_from_hex<16>(fields[5]);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace ivote::msg
