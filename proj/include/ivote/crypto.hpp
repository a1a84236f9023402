#ifndef IVOTE_CRYPTO_HPP
#define IVOTE_CRYPTO_HPP

#include <cstdint>
#include <string>

#include "ivote/common.hpp"
#include "ivote/counters.hpp"

// -----------------------------------------------------------------------------
// crypto suite
//
// The protocol layer consumes exactly four primitives and never looks inside
// them:
//
//   asym    hashed ElGamal over ristretto255. Encryption randomness is an
//           explicit caller-supplied 256-bit value, so the same (pk, id, r)
//           always yields byte-identical ciphertext; with fresh uniform r the
//           scheme is IND-CPA. Ciphertexts are a fixed 64 bytes:
//           point(32) || pad-masked block(32), pad = SHA3-256(DH share).
//   hash    SHA3-256.
//   sym     AES-256-CTR with zero IV over one 32-byte block. Unauthenticated
//           and length-preserving on purpose: decryption succeeds under any
//           key and yields a pseudorandom block when the key is wrong. Keys
//           here are single-use hash digests, so the fixed IV is sound.
//   sign    Ed25519 detached signatures.
// -----------------------------------------------------------------------------

namespace ivote::crypto {

inline constexpr std::size_t kRandomnessBytes = 32;  // kappa = 256
inline constexpr std::size_t kDigestBytes = 32;      // t = 256
inline constexpr std::size_t kSymBlockBytes = 32;
inline constexpr std::size_t kAsymCiphertextBytes = 64;
inline constexpr std::uint64_t kMaxCandidateId = 0xFFFFFFFFull;

struct Randomness {
    Bytes32 bytes{};
    bool operator==(const Randomness&) const = default;
};

struct HashDigest {
    Bytes32 bytes{};
    bool operator==(const HashDigest&) const = default;
};

struct SymCiphertext {
    Bytes32 bytes{};
    bool operator==(const SymCiphertext&) const = default;
};

struct AsymCiphertext {
    std::array<std::uint8_t, kAsymCiphertextBytes> bytes{};
    bool operator==(const AsymCiphertext&) const = default;
};

struct PublicKey {
    Bytes32 bytes{};
    bool operator==(const PublicKey&) const = default;
};
struct SecretKey {
    Bytes32 bytes{};
};
struct ElectionKeyPair {
    PublicKey pk;
    SecretKey sk;
};

// Extension seam for threshold key generation; only the 1-of-1 single-dealer
// backend exists, anything else is a ConfigError.
struct KeygenConfig {
    int shares = 1;
    int threshold = 1;
};

struct VerifyKey {
    Bytes32 bytes{};
    bool operator==(const VerifyKey&) const = default;
};
struct SigningKey {
    Bytes64 bytes{};
};
struct VoterKeyPair {
    VerifyKey pk;
    SigningKey sk;
    std::string voter_id;
};

struct Signature {
    Bytes64 bytes{};
    std::string signer_id;
    bool operator==(const Signature&) const = default;
};

ElectionKeyPair keygen_election(const Bytes32& seed, const KeygenConfig& cfg = {});
VoterKeyPair keygen_voter(const Bytes32& seed, std::string voter_id);

/// Deterministic in (pk, candidate_id, r). RangeError for ids >= 2^32,
/// DecodeError for an invalid public key encoding.
AsymCiphertext asym_encrypt(const PublicKey& pk, std::uint64_t candidate_id,
                            const Randomness& r);
/// DecodeError when the ciphertext is not a well-formed encryption.
std::uint32_t asym_decrypt(const SecretKey& sk, const AsymCiphertext& ct);

HashDigest hash(ByteView data);

/// msg/ct must be exactly 32 bytes (LengthError otherwise). Decryption is
/// total in the key: a wrong key returns garbage, never an error.
SymCiphertext sym_encrypt(const HashDigest& key, ByteView msg);
Bytes32 sym_decrypt(const HashDigest& key, ByteView ct);
inline Bytes32 sym_decrypt(const HashDigest& key, const SymCiphertext& ct) {
    return sym_decrypt(key, view(ct.bytes));
}

Signature sign(const VoterKeyPair& keys, ByteView msg);
bool verify(const VerifyKey& pk, ByteView msg, const Signature& sig);

// -----------------------------------------------------------------------------
// MeteredCrypto — the only crypto entry point actors use. Each protocol role
// holds one bound to its own OpCounters block, so measured counts cannot
// drift from the calls actually made.
// -----------------------------------------------------------------------------
class MeteredCrypto {
   public:
    explicit MeteredCrypto(sim::OpCounters& counters) : counters_(&counters) {}

    AsymCiphertext asym_encrypt(const PublicKey& pk, std::uint64_t id,
                                const Randomness& r) {
        ++counters_->asym_enc;
        return crypto::asym_encrypt(pk, id, r);
    }
    std::uint32_t asym_decrypt(const SecretKey& sk, const AsymCiphertext& ct) {
        ++counters_->asym_dec;
        return crypto::asym_decrypt(sk, ct);
    }
    HashDigest hash(ByteView data) {
        ++counters_->hash;
        return crypto::hash(data);
    }
    SymCiphertext sym_encrypt(const HashDigest& key, ByteView msg) {
        ++counters_->sym_enc;
        return crypto::sym_encrypt(key, msg);
    }
    Bytes32 sym_decrypt(const HashDigest& key, const SymCiphertext& ct) {
        ++counters_->sym_dec;
        return crypto::sym_decrypt(key, ct);
    }
    Signature sign(const VoterKeyPair& keys, ByteView msg) {
        ++counters_->sign;
        return crypto::sign(keys, msg);
    }
    bool verify(const VerifyKey& pk, ByteView msg, const Signature& sig) {
        ++counters_->verify;
        return crypto::verify(pk, msg, sig);
    }

   private:
    sim::OpCounters* counters_;
};

}  // namespace ivote::crypto

#endif
