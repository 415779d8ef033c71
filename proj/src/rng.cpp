#include "quadport/rng.hpp"

#include <cmath>
#include <numbers>

namespace quadport
{

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t domain, std::uint64_t a,
                           std::uint64_t b)
{
    std::uint64_t key = mix64(seed);
    key = mix64(key ^ domain);
    key = mix64(key ^ a);
    key = mix64(key ^ b);
    engine_.seed(key);
}

double NormalStream::uniform()
{
    for (;;)
    {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        if (u > 0.0)
            return u;
    }
}

double NormalStream::normal()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Vector NormalStream::normals(Index n)
{
    Vector z(n);
    for (Index i = 0; i < n; ++i)
        z(i) = normal();
    return z;
}

} // namespace quadport
