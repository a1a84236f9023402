#ifndef IVOTE_RNG_HPP
#define IVOTE_RNG_HPP

#include <cstdint>
#include <string_view>

#include "ivote/common.hpp"

namespace ivote {

// -----------------------------------------------------------------------------
// DeterministicRng — seeded keystream generator (AES-256-CTR over a zero
// counter block). Every random choice in a scenario flows through one of
// these, so a run is a pure function of its root seed.
//
// Independent streams are derived by hashing, never by sharing state:
//   derive_seed(root, i)       per-trial seed, H(root || le64(i))
//   derive_seed(root, "label") named sub-stream
// -----------------------------------------------------------------------------
class DeterministicRng {
   public:
    explicit DeterministicRng(const Bytes32& seed);

    void fill(std::span<std::uint8_t> out);
    std::uint8_t byte();
    Bytes16 bytes16();
    Bytes32 bytes32();
    std::uint32_t u32();
    std::uint64_t u64();
    // Unbiased value in [0, n) via rejection sampling. n must be > 0.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p);

    DeterministicRng child(std::string_view label);

   private:
    void refill();

    Bytes32 key_;
    std::uint64_t block_counter_ = 0;
    std::array<std::uint8_t, 64> buf_{};
    std::size_t pos_ = 64;  // exhausted
};

Bytes32 derive_seed(const Bytes32& root, std::uint64_t index);
Bytes32 derive_seed(const Bytes32& root, std::string_view label);

}  // namespace ivote

#endif
