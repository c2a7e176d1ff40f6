#pragma once

#include <cstdint>

#include "nrange/matrix.hpp"

namespace nrange {

/// Counter-based pseudo-random source.
///
/// Output word i of stream (seed, stream) is a pure function of the triple
/// (seed, stream, i): a SplitMix64 finalizer applied to
/// key + (i + 1) * 0x9E3779B97F4A7C15, where key mixes seed and stream. No
/// platform-dependent state is involved, so sequences are identical
/// everywhere. Parallel samplers give draw i its own stream i instead of
/// sharing one generator.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;

    /// Standard real normal via Box-Muller (both outputs of a pair are used).
    double normal() noexcept;

    /// Standard complex normal, E|z|^2 = 1: Box-Muller pair as (re, im) / sqrt(2).
    Complex complex_normal() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// n x cols matrix of independent standard complex normals.
Matrix complex_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace nrange
