#ifndef IVOTE_COMMON_HPP
#define IVOTE_COMMON_HPP

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ivote {

using Bytes = std::vector<std::uint8_t>;
using Bytes16 = std::array<std::uint8_t, 16>;
using Bytes32 = std::array<std::uint8_t, 32>;
using Bytes64 = std::array<std::uint8_t, 64>;
using ByteView = std::span<const std::uint8_t>;

// -----------------------------------------------------------------------------
// Error taxonomy. Codec and contract violations throw; protocol-level rejects
// (bad signature, replayed voteref, ...) are ordinary return values instead.
// -----------------------------------------------------------------------------
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LengthError : Error { using Error::Error; };
struct AlphabetError : Error { using Error::Error; };
struct VersionError : Error { using Error::Error; };
struct DecodeError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Integrity failure discovered during counting; names the offending record.
struct AuditError : Error {
    AuditError(std::string voter, std::uint64_t seq_, const std::string& what_)
        : Error("audit error at " + voter + "/" + std::to_string(seq_) + ": " + what_),
          voter_id(std::move(voter)),
          seq(seq_) {}
    std::string voter_id;
    std::uint64_t seq;
};

template <typename T>
inline ByteView view(const T& a) {
    return ByteView(a.data(), a.size());
}

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);  // DecodeError on odd length / bad digit

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view hex) {
    Bytes b = from_hex(hex);
    if (b.size() != N) throw LengthError("expected " + std::to_string(N) + " bytes");
    std::array<std::uint8_t, N> out{};
    std::copy(b.begin(), b.end(), out.begin());
    return out;
}

}  // namespace ivote

#endif
