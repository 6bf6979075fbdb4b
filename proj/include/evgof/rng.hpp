#pragma once

#include <array>
#include <cstdint>

namespace evgof {

/// Philox4x32-10 counter-based pseudo-random generator.
///
/// Counter-based generation makes the stream a pure function of (key, counter),
/// which gives bit-reproducible results independent of thread scheduling.
/// Sub-streams for replicate k of a run with master seed s are obtained with
/// derive(s, k); derivation is itself one Philox block, so derived seeds do
/// not collide with the parent stream.
class Philox {
public:
    explicit Philox(std::uint64_t seed)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)) {}

    /// Next 64-bit word of the stream.
    std::uint64_t next_u64() {
        if (pos_ >= 4) refill();
        const std::uint64_t hi = buf_[pos_];
        const std::uint64_t lo = buf_[pos_ + 1];
        pos_ += 2;
        return (hi << 32) | lo;
    }

    /// Uniform draw in the open interval (0,1), 53-bit resolution.
    double uniform01() {
        const std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Deterministic sub-seed for stream index `stream` under `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        const auto out = block(static_cast<std::uint32_t>(seed),
                               static_cast<std::uint32_t>(seed >> 32),
                               {static_cast<std::uint32_t>(stream),
                                static_cast<std::uint32_t>(stream >> 32),
                                0x243F6A88u, 0x85A308D3u});
        return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    }

    /// One Philox4x32-10 block: encrypt `ctr` under (k0,k1).
    static std::array<std::uint32_t, 4> block(std::uint32_t k0, std::uint32_t k1,
                                              std::array<std::uint32_t, 4> ctr) {
        constexpr std::uint32_t M0 = 0xD2511F53u;
        constexpr std::uint32_t M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u;
        constexpr std::uint32_t W1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0,
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1,
                   static_cast<std::uint32_t>(p0)};
            k0 += W0;
            k1 += W1;
        }
        return ctr;
    }

private:
    void refill() {
        buf_ = block(key0_, key1_,
                     {static_cast<std::uint32_t>(counter_),
                      static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u});
        ++counter_;
        pos_ = 0;
    }

    std::uint32_t key0_;
    std::uint32_t key1_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace evgof
