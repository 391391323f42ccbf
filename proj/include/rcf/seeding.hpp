#pragma once

#include <cstdint>
#include <random>

namespace rcf {

// Stateless 64-bit mixer (the splitmix64 finalizer). These constants are part of
// the reproducibility contract and are echoed in every JSON report.
inline constexpr std::uint64_t kMixGamma = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kMixMul1 = 0xBF58476D1CE4E5B9ULL;
inline constexpr std::uint64_t kMixMul2 = 0x94D049BB133111EBULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z ^= z >> 30;
    z *= kMixMul1;
    z ^= z >> 27;
    z *= kMixMul2;
    z ^= z >> 31;
    return z;
}

// Seed of trial `index` under `master`. Pure function; independent of thread layout.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return mix64(master + (index + 1) * kMixGamma);
}

// Sub-stream tags so that different estimators driven by the same master seed
// never share trial streams.
enum class Stream : std::uint64_t {
    trajectory = 1,
    direct = 2,
    mgf = 3,
    deviation = 4,
    mixing = 5,
    reference = 6,
    reverify = 7,
    check = 8,
};

constexpr std::uint64_t stream_seed(std::uint64_t master, Stream s) noexcept
{
    return mix64(master ^ mix64(static_cast<std::uint64_t>(s) * kMixGamma));
}

// Per-trial random source. std::mt19937_64 output is fully specified by the
// standard; the conversions to reals below are ours, so paths are bit-identical
// across standard libraries.
class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on the open interval (0,1), 53-bit grid offset by half a step.
    double uniform_open()
    {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace rcf
