#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "lemlab/polynomial.hpp"

namespace lemlab {

/// How much work an area or integral estimate may spend.
struct SamplingBudget {
    enum class Method { automatic, exact, montecarlo, grid };

    Method method = Method::automatic;
    std::uint64_t samples = 1u << 20;       // Monte Carlo samples (rounded up to whole shards)
    std::uint64_t max_samples = 1u << 26;   // cap when a target error is requested
    std::optional<double> target_rel_err;   // stop once err <= target * value
    double grid_h = 0.0;                    // grid method spacing; 0 picks diameter / 1024
    std::uint64_t seed = 42;
};

/// Axis-aligned sampling box.
struct Box {
    Complex lower;   // lower-left corner
    double width = 0.0;
    double height = 0.0;

    double area() const noexcept { return width * height; }
    static Box around(Complex center, double radius) noexcept {
        return {center - Complex{radius, radius}, 2.0 * radius, 2.0 * radius};
    }
};

/// Samples per shard: a 32x32 jittered grid covering the whole box.
inline constexpr int kStrataPerSide = 32;
inline constexpr std::uint64_t kShardSize = kStrataPerSide * kStrataPerSide;

struct SampleMoments {
    double mean = 0.0;       // of the integrand
    double variance = 0.0;   // sample variance of the integrand
    std::uint64_t count = 0;
};

/// Stratified Monte Carlo moments of f over the box. Shard s draws from a
/// generator seeded by (seed, s), so the result depends only on
/// (seed, shard count), never on thread scheduling.
SampleMoments stratified_moments(const Box& box, std::uint64_t samples, std::uint64_t seed,
                                 const std::function<double(Complex)>& f);

/// Visits every stratified sample point in shard order.
void for_each_stratified_point(const Box& box, std::uint64_t samples, std::uint64_t seed,
                               const std::function<void(Complex)>& visit);

/// Per-case seed for sweeps and derived estimates.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace lemlab
