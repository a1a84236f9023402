#include <set>

#include "doctest.h"
#include "ivote/crypto.hpp"
#include "ivote/rng.hpp"
#include "ivote/stats.hpp"

using namespace ivote;
using namespace ivote::crypto;

namespace {

Bytes32 seed_of(std::uint8_t fill) {
    Bytes32 s{};
    s.fill(fill);
    return s;
}

}  // namespace

TEST_CASE("election keygen is deterministic in the seed") {
    auto a = keygen_election(seed_of(1));
    auto b = keygen_election(seed_of(1));
    CHECK(a.pk.bytes == b.pk.bytes);
    CHECK(a.sk.bytes == b.sk.bytes);
    auto c = keygen_election(seed_of(2));
    CHECK(a.pk.bytes != c.pk.bytes);
}

TEST_CASE("1000 seeded keypairs are pairwise distinct") {
    DeterministicRng rng(seed_of(3));
    std::set<Bytes32> pks;
    for (int i = 0; i < 1000; ++i) {
        pks.insert(keygen_election(rng.bytes32()).pk.bytes);
    }
    CHECK(pks.size() == 1000);
}

TEST_CASE("threshold keygen stub accepts only 1-of-1") {
    KeygenConfig cfg;
    cfg.shares = 3;
    cfg.threshold = 2;
    CHECK_THROWS_AS(keygen_election(seed_of(4), cfg), ConfigError);
}

TEST_CASE("asym encryption is a deterministic function of (pk, id, r)") {
    auto pair = keygen_election(seed_of(5));
    Randomness r{seed_of(6)};
    CHECK(asym_encrypt(pair.pk, 3, r) == asym_encrypt(pair.pk, 3, r));
    CHECK(asym_encrypt(pair.pk, 3, r) != asym_encrypt(pair.pk, 4, r));
}

TEST_CASE("five candidates under a fixed r give pairwise distinct ciphertexts") {
    auto pair = keygen_election(seed_of(7));
    Randomness r{seed_of(8)};
    std::set<std::array<std::uint8_t, kAsymCiphertextBytes>> seen;
    for (std::uint32_t c = 0; c < 5; ++c) {
        seen.insert(asym_encrypt(pair.pk, c, r).bytes);
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("asym round trips, including plaintext-space boundaries") {
    auto pair = keygen_election(seed_of(9));
    DeterministicRng rng(seed_of(10));

    CHECK(asym_decrypt(pair.sk, asym_encrypt(pair.pk, 0, Randomness{rng.bytes32()})) == 0);
    CHECK(asym_decrypt(pair.sk, asym_encrypt(pair.pk, 1, Randomness{rng.bytes32()})) == 1);
    CHECK(asym_decrypt(pair.sk,
                       asym_encrypt(pair.pk, kMaxCandidateId,
                                    Randomness{rng.bytes32()})) == kMaxCandidateId);

    for (int i = 0; i < 64; ++i) {
        std::uint32_t id = rng.u32();
        Randomness r{rng.bytes32()};
        CHECK(asym_decrypt(pair.sk, asym_encrypt(pair.pk, id, r)) == id);
    }
}

TEST_CASE("asym rejects out-of-range plaintexts and malformed ciphertexts") {
    auto pair = keygen_election(seed_of(11));
    Randomness r{seed_of(12)};
    CHECK_THROWS_AS(asym_encrypt(pair.pk, 0x1'0000'0000ull, r), RangeError);

    AsymCiphertext bad;
    bad.bytes.fill(0xFF);  // not a canonical group-element encoding
    CHECK_THROWS_AS(asym_decrypt(pair.sk, bad), DecodeError);

    // valid point, corrupted padding region
    AsymCiphertext ct = asym_encrypt(pair.pk, 1, r);
    ct.bytes[50] ^= 0x01;
    CHECK_THROWS_AS(asym_decrypt(pair.sk, ct), DecodeError);
}

TEST_CASE("all asym ciphertexts share one fixed length") {
    CHECK(sizeof(AsymCiphertext{}.bytes) == 64);
}

TEST_CASE("hash is deterministic with 256-bit output") {
    CHECK(hash(ByteView{}).bytes.size() == 32);
    Bytes data{1, 2, 3};
    CHECK(hash(view(data)) == hash(view(data)));
}

TEST_CASE("appending a byte changes the digest, 1000 random inputs") {
    DeterministicRng rng(seed_of(13));
    for (int i = 0; i < 1000; ++i) {
        Bytes x(static_cast<std::size_t>(rng.below(64)));
        rng.fill(x);
        Bytes extended = x;
        extended.push_back(0x00);
        CHECK(hash(view(x)) != hash(view(extended)));
    }
}

TEST_CASE("sym encryption round trips and preserves length") {
    HashDigest key{seed_of(14)};
    Bytes32 q = seed_of(15);
    SymCiphertext ct = sym_encrypt(key, view(q));
    CHECK(ct.bytes.size() == 32);
    CHECK(sym_decrypt(key, ct) == q);
}

TEST_CASE("sym rejects wrong input lengths, never wrong keys") {
    HashDigest key{seed_of(16)};
    Bytes short_msg(31, 0);
    Bytes long_msg(33, 0);
    CHECK_THROWS_AS(sym_encrypt(key, view(short_msg)), LengthError);
    CHECK_THROWS_AS(sym_decrypt(key, view(long_msg)), LengthError);
}

TEST_CASE("wrong-key decryption is total and never reproduces q in full") {
    HashDigest key{seed_of(17)};
    Bytes32 q = seed_of(18);
    SymCiphertext ct = sym_encrypt(key, view(q));

    DeterministicRng rng(seed_of(19));
    int full_matches = 0;
    for (int i = 0; i < 100000; ++i) {
        HashDigest wrong{rng.bytes32()};
        if (sym_decrypt(wrong, ct) == q) ++full_matches;
    }
    CHECK(full_matches == 0);
}

TEST_CASE("wrong-key decryption matches the last 8 bits at rate 1/256") {
    // Monte-Carlo frequency oracle: 10^6 wrong keys, last-byte agreement
    // should sit within 3 sigma of 1/256.
    HashDigest key{seed_of(20)};
    Bytes32 q = seed_of(21);
    SymCiphertext ct = sym_encrypt(key, view(q));

    DeterministicRng rng(seed_of(22));
    sim::RateStats stats;
    for (int i = 0; i < 1000000; ++i) {
        HashDigest wrong{rng.bytes32()};
        stats.add(sym_decrypt(wrong, ct)[31] == q[31]);
    }
    CHECK(stats.within_sigma_of(1.0 / 256.0, 3.0));
}

TEST_CASE("signatures verify and any modification fails") {
    auto keys = keygen_voter(seed_of(23), "voter-1");
    Bytes msg{10, 20, 30, 40};
    Signature sig = sign(keys, view(msg));
    CHECK(verify(keys.pk, view(msg), sig));

    Bytes other = msg;
    other[0] ^= 1;
    CHECK_FALSE(verify(keys.pk, view(other), sig));

    Signature broken = sig;
    broken.bytes[5] ^= 1;
    CHECK_FALSE(verify(keys.pk, view(msg), broken));
}

TEST_CASE("signatures do not verify under another voter's key, 100 pairs") {
    DeterministicRng rng(seed_of(24));
    Bytes msg{1, 2, 3};
    for (int i = 0; i < 100; ++i) {
        auto a = keygen_voter(rng.bytes32(), "a");
        auto b = keygen_voter(rng.bytes32(), "b");
        Signature sig = sign(a, view(msg));
        CHECK(verify(a.pk, view(msg), sig));
        CHECK_FALSE(verify(b.pk, view(msg), sig));
    }
}

TEST_CASE("encryption determinism holds across random keys and inputs") {
    DeterministicRng rng(seed_of(25));
    for (int i = 0; i < 100; ++i) {
        auto pair = keygen_election(rng.bytes32());
        std::uint32_t id = rng.u32();
        Randomness r{rng.bytes32()};
        CHECK(asym_encrypt(pair.pk, id, r) == asym_encrypt(pair.pk, id, r));
    }
}

TEST_CASE("first-byte histograms of two plaintexts are indistinguishable (smoke)") {
    // Reduced-size version of the acceptance check: 2*10^4 samples per
    // plaintext, chi-square on first-byte histograms must not separate them.
    auto pair = keygen_election(seed_of(26));
    DeterministicRng rng(seed_of(27));
    std::vector<std::uint64_t> h1(256, 0), h2(256, 0);
    for (int i = 0; i < 20000; ++i) {
        ++h1[asym_encrypt(pair.pk, 1, Randomness{rng.bytes32()}).bytes[0]];
        ++h2[asym_encrypt(pair.pk, 2, Randomness{rng.bytes32()}).bytes[0]];
    }
    auto res = sim::chi_square_two_sample(h1, h2);
    CHECK(res.p_value > 0.01);
}

TEST_CASE("metered crypto counts every call") {
    sim::OpCounters counters;
    MeteredCrypto metered(counters);
    auto pair = keygen_election(seed_of(28));
    auto keys = keygen_voter(seed_of(29), "voter-1");
    Randomness r{seed_of(30)};

    auto ct = metered.asym_encrypt(pair.pk, 1, r);
    metered.asym_decrypt(pair.sk, ct);
    auto digest = metered.hash(view(ct.bytes));
    auto sym = metered.sym_encrypt(digest, view(seed_of(31)));
    metered.sym_decrypt(digest, sym);
    auto sig = metered.sign(keys, view(ct.bytes));
    metered.verify(keys.pk, view(ct.bytes), sig);

    CHECK(counters ==
          sim::OpCounters{.asym_enc = 1, .asym_dec = 1, .sym_enc = 1,
                          .sym_dec = 1, .hash = 1, .sign = 1, .verify = 1});
}
