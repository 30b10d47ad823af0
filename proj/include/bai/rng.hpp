#pragma once

#include <cstdint>
#include <limits>

namespace bai {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`: mix(master + (index + 1) * gamma), wrapping mod 2^64.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return splitmix64_mix(master + (index + 1) * kGoldenGamma);
}

/**
 * Counter-based random stream.
 *
 * Draw n of stream (master, index) is derive_stream_seed(key, n) with
 * key = derive_stream_seed(master, index), i.e. a SplitMix64 sequence started
 * at the stream key. Any draw can be recomputed from (master, index, n) alone,
 * so streams are independent of scheduling. A stream must be owned by one
 * worker at a time.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
        : master_(master_seed), index_(stream_index), key_(derive_stream_seed(master_seed, stream_index))
    {
    }

    std::uint64_t next_u64() noexcept { return derive_stream_seed(key_, counter_++); }

    /// Uniform on [0, 1) with 53 random bits.
    double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// 1 with probability p. p = 1 always yields 1 and p = 0 always yields 0.
    int bernoulli(double p) noexcept { return next_unit() < p ? 1 : 0; }

    std::uint64_t master_seed() const noexcept { return master_; }
    std::uint64_t stream_index() const noexcept { return index_; }
    std::uint64_t counter() const noexcept { return counter_; }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept { return next_u64(); }

private:
    std::uint64_t master_;
    std::uint64_t index_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace bai
