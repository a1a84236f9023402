#include "ivote/crypto.hpp"

#include <openssl/evp.h>
#include <sodium.h>

#include <cstring>
#include <memory>
#include <mutex>

namespace ivote::crypto {

namespace {

void ensure_sodium() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (sodium_init() < 0) throw Error("sodium_init failed");
    });
}

bool all_zero(ByteView b) {
    for (auto x : b)
        if (x != 0) return false;
    return true;
}

// Uniform scalar derived from 256 explicit randomness bits: expand with
// SHA-512, then reduce mod the group order.
Bytes32 scalar_from_bytes(const Bytes32& input) {
    std::array<std::uint8_t, 64> wide{};
    crypto_hash_sha512(wide.data(), input.data(), input.size());
    Bytes32 scalar{};
    crypto_core_ristretto255_scalar_reduce(scalar.data(), wide.data());
    return scalar;
}

struct MdDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

// One-block AES-256-CTR; encrypt and decrypt are the same XOR.
Bytes32 aes_ctr_block(const Bytes32& key, ByteView in) {
    std::array<std::uint8_t, 16> iv{};
    Bytes32 out{};
    int out_len = 0;
    std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter> ctx(EVP_CIPHER_CTX_new());
    if (!ctx ||
        EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr, key.data(),
                           iv.data()) != 1 ||
        EVP_EncryptUpdate(ctx.get(), out.data(), &out_len, in.data(),
                          static_cast<int>(in.size())) != 1 ||
        out_len != static_cast<int>(in.size())) {
        throw Error("AES-CTR failure");
    }
    return out;
}

}  // namespace

ElectionKeyPair keygen_election(const Bytes32& seed, const KeygenConfig& cfg) {
    ensure_sodium();
    if (cfg.shares != 1 || cfg.threshold != 1) {
        throw ConfigError("threshold keygen backend not available; requires shares = threshold = 1");
    }
    Bytes32 material = seed;
    Bytes32 sk{};
    for (;;) {
        sk = scalar_from_bytes(material);
        if (!all_zero(sk)) break;
        material = hash(view(material)).bytes;  // astronomically unlikely
    }
    ElectionKeyPair pair;
    pair.sk.bytes = sk;
    if (crypto_scalarmult_ristretto255_base(pair.pk.bytes.data(), sk.data()) != 0) {
        throw Error("ristretto255 base multiplication failed");
    }
    return pair;
}

VoterKeyPair keygen_voter(const Bytes32& seed, std::string voter_id) {
    ensure_sodium();
    VoterKeyPair keys;
    keys.voter_id = std::move(voter_id);
    if (crypto_sign_seed_keypair(keys.pk.bytes.data(), keys.sk.bytes.data(),
                                 seed.data()) != 0) {
        throw Error("ed25519 keygen failed");
    }
    return keys;
}

AsymCiphertext asym_encrypt(const PublicKey& pk, std::uint64_t candidate_id,
                            const Randomness& r) {
    ensure_sodium();
    if (candidate_id > kMaxCandidateId) {
        throw RangeError("candidate id outside plaintext space");
    }
    const Bytes32 k = scalar_from_bytes(r.bytes);

    Bytes32 c1{};
    Bytes32 shared{};
    if (all_zero(k)) {
        // k = 0: both points are the identity, which encodes as zeros.
    } else {
        if (crypto_scalarmult_ristretto255_base(c1.data(), k.data()) != 0) {
            throw Error("ristretto255 base multiplication failed");
        }
        if (crypto_scalarmult_ristretto255(shared.data(), k.data(),
                                           pk.bytes.data()) != 0) {
            throw DecodeError("invalid public key");
        }
    }

    Bytes32 pad = hash(view(shared)).bytes;
    AsymCiphertext ct;
    std::memcpy(ct.bytes.data(), c1.data(), 32);
    Bytes32 block{};
    block[0] = static_cast<std::uint8_t>((candidate_id >> 24) & 0xFF);
    block[1] = static_cast<std::uint8_t>((candidate_id >> 16) & 0xFF);
    block[2] = static_cast<std::uint8_t>((candidate_id >> 8) & 0xFF);
    block[3] = static_cast<std::uint8_t>(candidate_id & 0xFF);
    for (int i = 0; i < 32; ++i) {
        ct.bytes[32 + i] = block[i] ^ pad[i];
    }
    return ct;
}

std::uint32_t asym_decrypt(const SecretKey& sk, const AsymCiphertext& ct) {
    ensure_sodium();
    Bytes32 c1{};
    std::memcpy(c1.data(), ct.bytes.data(), 32);

    Bytes32 shared{};
    if (!all_zero(c1)) {
        if (crypto_scalarmult_ristretto255(shared.data(), sk.bytes.data(),
                                           c1.data()) != 0) {
            throw DecodeError("malformed ciphertext: invalid group element");
        }
    }
    Bytes32 pad = hash(view(shared)).bytes;
    Bytes32 block{};
    for (int i = 0; i < 32; ++i) {
        block[i] = ct.bytes[32 + i] ^ pad[i];
    }
    for (int i = 4; i < 32; ++i) {
        if (block[i] != 0) throw DecodeError("malformed ciphertext: bad padding");
    }
    return (std::uint32_t{block[0]} << 24) | (std::uint32_t{block[1]} << 16) |
           (std::uint32_t{block[2]} << 8) | std::uint32_t{block[3]};
}

HashDigest hash(ByteView data) {
    HashDigest out;
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, MdDeleter> ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha3_256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out.bytes.data(), &len) != 1 ||
        len != out.bytes.size()) {
        throw Error("SHA3-256 failure");
    }
    return out;
}

SymCiphertext sym_encrypt(const HashDigest& key, ByteView msg) {
    if (msg.size() != kSymBlockBytes) {
        throw LengthError("sym_encrypt expects a 32-byte message");
    }
    SymCiphertext ct;
    ct.bytes = aes_ctr_block(key.bytes, msg);
    return ct;
}

Bytes32 sym_decrypt(const HashDigest& key, ByteView ct) {
    if (ct.size() != kSymBlockBytes) {
        throw LengthError("sym_decrypt expects a 32-byte ciphertext");
    }
    return aes_ctr_block(key.bytes, ct);
}

Signature sign(const VoterKeyPair& keys, ByteView msg) {
    ensure_sodium();
    Signature sig;
    sig.signer_id = keys.voter_id;
    if (crypto_sign_detached(sig.bytes.data(), nullptr, msg.data(), msg.size(),
                             keys.sk.bytes.data()) != 0) {
        throw Error("ed25519 sign failed");
    }
    return sig;
}

bool verify(const VerifyKey& pk, ByteView msg, const Signature& sig) {
    ensure_sodium();
    return crypto_sign_verify_detached(sig.bytes.data(), msg.data(), msg.size(),
                                       pk.bytes.data()) == 0;
}

}  // namespace ivote::crypto
