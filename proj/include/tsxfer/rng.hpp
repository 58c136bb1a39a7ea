#pragma once

#include <cstdint>
#include <random>

namespace tsxfer {

/// Seeded generator used everywhere randomness is needed.
///
/// std::mt19937_64 has a bit-exact output sequence mandated by the standard.
/// The standard distributions do not, so bounded integers and unit reals are
/// derived here from the raw 64-bit stream to keep results identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform real in [0, 1) with 53 random bits.
    double unit();

private:
    std::mt19937_64 engine_;
};

}  // namespace tsxfer
