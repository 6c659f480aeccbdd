#pragma once

#include <array>
#include <cstdint>

namespace tailgate {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output
// block is a pure function of (counter, key).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter ctr, Key key) noexcept {
        constexpr std::uint32_t kMulA = 0xD2511F53;
        constexpr std::uint32_t kMulB = 0xCD9E8D57;
        constexpr std::uint32_t kWeylA = 0x9E3779B9;
        constexpr std::uint32_t kWeylB = 0xBB67AE85;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{kMulA} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMulB} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        return ctr;
    }
};

inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Identifies one random stream. The stream's draws are a pure function of
// this pair; child() derives sub-streams (per trial block) deterministically.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    SeedSpec child(std::uint64_t index) const noexcept {
        return {master_seed, splitmix64(stream_id ^ splitmix64(index + 0x632be59bd9b4e019ULL))};
    }

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// Sequential view of one stream: key = master seed, counter = (draw index,
// stream id). Distinct stream ids address disjoint counter ranges.
class Stream {
public:
    explicit Stream(SeedSpec seed) noexcept
        : key_{static_cast<std::uint32_t>(seed.master_seed), static_cast<std::uint32_t>(seed.master_seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(seed.stream_id)),
          stream_hi_(static_cast<std::uint32_t>(seed.stream_id >> 32)) {}

    std::uint64_t next_u64() noexcept {
        if (avail_ == 0) refill();
        const std::uint64_t out = (std::uint64_t{block_[4 - avail_ + 1]} << 32) | block_[4 - avail_];
        avail_ -= 2;
        return out;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., n-1}, unbiased (Lemire's multiply-and-reject).
    std::uint64_t index(std::uint64_t n) noexcept {
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    void refill() noexcept {
        block_ = Philox4x32::apply({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                    stream_lo_, stream_hi_},
                                   key_);
        ++counter_;
        avail_ = 4;
    }

    Philox4x32::Key key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t counter_ = 0;
    Philox4x32::Counter block_{};
    int avail_ = 0;
};

}  // namespace tailgate
