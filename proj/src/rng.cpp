#include "ivote/rng.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <memory>

namespace ivote {

namespace {

struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
struct MdDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

Bytes32 sha3_256_local(ByteView data) {
    Bytes32 out{};
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, MdDeleter> ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha3_256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
        throw Error("SHA3-256 failure");
    }
    return out;
}

}  // namespace

DeterministicRng::DeterministicRng(const Bytes32& seed) : key_(seed) {}

void DeterministicRng::refill() {
    std::array<std::uint8_t, 16> iv{};
    // big-endian block counter in the low half of the IV
    for (int i = 0; i < 8; ++i) {
        iv[15 - i] = static_cast<std::uint8_t>((block_counter_ >> (8 * i)) & 0xFF);
    }
    std::array<std::uint8_t, 64> zeros{};
    std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter> ctx(EVP_CIPHER_CTX_new());
    int out_len = 0;
    if (!ctx ||
        EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr, key_.data(),
                           iv.data()) != 1 ||
        EVP_EncryptUpdate(ctx.get(), buf_.data(), &out_len, zeros.data(),
                          static_cast<int>(zeros.size())) != 1 ||
        out_len != static_cast<int>(zeros.size())) {
        throw Error("AES-CTR keystream failure");
    }
    block_counter_ += 4;  // 64 bytes = 4 AES blocks
    pos_ = 0;
}

void DeterministicRng::fill(std::span<std::uint8_t> out) {
    std::size_t written = 0;
    while (written < out.size()) {
        if (pos_ == buf_.size()) refill();
        std::size_t n = std::min(out.size() - written, buf_.size() - pos_);
        std::memcpy(out.data() + written, buf_.data() + pos_, n);
        pos_ += n;
        written += n;
    }
}

std::uint8_t DeterministicRng::byte() {
    std::uint8_t b;
    fill({&b, 1});
    return b;
}

Bytes16 DeterministicRng::bytes16() {
    Bytes16 out;
    fill(out);
    return out;
}

Bytes32 DeterministicRng::bytes32() {
    Bytes32 out;
    fill(out);
    return out;
}

std::uint32_t DeterministicRng::u32() {
    std::array<std::uint8_t, 4> b;
    fill(b);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

std::uint64_t DeterministicRng::u64() {
    std::array<std::uint8_t, 8> b;
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t DeterministicRng::below(std::uint64_t n) {
    if (n == 0) throw RangeError("below(0)");
    if ((n & (n - 1)) == 0) return u64() & (n - 1);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    for (;;) {
        std::uint64_t v = u64();
        if (v < limit) return v % n;
    }
}

bool DeterministicRng::bernoulli(double p) {
    // 53-bit uniform in [0,1)
    double u = static_cast<double>(u64() >> 11) * 0x1.0p-53;
    return u < p;
}

DeterministicRng DeterministicRng::child(std::string_view label) {
    return DeterministicRng(derive_seed(key_, label));
}

Bytes32 derive_seed(const Bytes32& root, std::uint64_t index) {
    std::array<std::uint8_t, 40> buf{};
    std::memcpy(buf.data(), root.data(), 32);
    for (int i = 0; i < 8; ++i) {
        buf[32 + i] = static_cast<std::uint8_t>((index >> (8 * i)) & 0xFF);
    }
    return sha3_256_local(buf);
}

Bytes32 derive_seed(const Bytes32& root, std::string_view label) {
    Bytes buf(root.begin(), root.end());
    buf.insert(buf.end(), label.begin(), label.end());
    return sha3_256_local(buf);
}

}  // namespace ivote
