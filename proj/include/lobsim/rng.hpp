#pragma once
#include <cstdint>

namespace lobsim {

/// xoshiro256++ with splitmix64 seeding. All distribution methods are built
/// from explicit arithmetic on top of detmath, so a (seed, call sequence)
/// pair yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform();
    /// Uniform on (0, 1]; safe to pass to log().
    double uniform_pos();

    /// Standard normal (Marsaglia polar, one value cached).
    double normal();

    /// Gamma(shape, 1), shape > 0 (Marsaglia-Tsang, boosted for shape < 1).
    double gamma(double shape);

    /// Student t with dof degrees of freedom (any dof > 0), unit scale.
    double student_t(double dof);

    /// Derived stream: deterministic function of (seed, stream_id) only.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id);

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace lobsim
