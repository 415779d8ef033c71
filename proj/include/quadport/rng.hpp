#pragma once

#include "quadport/linalg.hpp"

#include <cstdint>
#include <random>

namespace quadport
{

/// Independent random stream keyed by (seed, domain, a, b).
///
/// The key is mixed with SplitMix64 into the seed of a std::mt19937_64.
/// Two streams with different keys are statistically independent, and a
/// given key always yields the same draws regardless of which thread or in
/// which order it is evaluated. Normal draws use Box-Muller on 53-bit
/// uniforms so results do not depend on the standard library's
/// distribution implementations.
class NormalStream
{
public:
    NormalStream(std::uint64_t seed, std::uint64_t domain = 0, std::uint64_t a = 0,
                 std::uint64_t b = 0);

    /// Uniform on the open interval (0, 1).
    double uniform();

    double normal();

    /// Vector of `n` iid standard normal draws.
    Vector normals(Index n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stream domains used by the experiment harness.
namespace stream_domain
{
inline constexpr std::uint64_t kPath = 1;
inline constexpr std::uint64_t kInitialState = 2;
inline constexpr std::uint64_t kBscTraining = 3;
inline constexpr std::uint64_t kBscInitialState = 4;
inline constexpr std::uint64_t kInnerExpectation = 5;
inline constexpr std::uint64_t kSeries = 6;
} // namespace stream_domain

} // namespace quadport
