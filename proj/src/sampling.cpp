#include "lemlab/sampling.hpp"

#include <random>
#include <vector>

#include "lemlab/parallel.hpp"

namespace lemlab {

namespace {

std::mt19937_64 shard_engine(std::uint64_t seed, std::uint64_t shard) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
    return std::mt19937_64(seq);
}

// 53-bit uniform in [0, 1); fixed formula so streams are portable.
double unit(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

std::uint64_t shard_count(std::uint64_t samples) { return (samples + kShardSize - 1) / kShardSize; }

template <class Visit>
void visit_shard(const Box& box, std::uint64_t seed, std::uint64_t shard, Visit&& visit) {
    auto eng = shard_engine(seed, shard);
    const double sx = box.width / kStrataPerSide;
    const double sy = box.height / kStrataPerSide;
    for (int j = 0; j < kStrataPerSide; ++j)
        for (int i = 0; i < kStrataPerSide; ++i) {
            const double u = unit(eng);
            const double v = unit(eng);
            visit(box.lower + Complex{(i + u) * sx, (j + v) * sy});
        }
}

}  // namespace

SampleMoments stratified_moments(const Box& box, std::uint64_t samples, std::uint64_t seed,
                                 const std::function<double(Complex)>& f) {
    const auto shards = shard_count(samples);
    std::vector<double> sums(shards), squares(shards);
    parallel_for(shards, [&](std::size_t s) {
        CompensatedSum sum, sq;
        visit_shard(box, seed, s, [&](Complex z) {
            const double v = f(z);
            sum.add(v);
            sq.add(v * v);
        });
        sums[s] = sum.value();
        squares[s] = sq.value();
    });
    CompensatedSum total, total_sq;
    for (std::size_t s = 0; s < shards; ++s) {
        total.add(sums[s]);
        total_sq.add(squares[s]);
    }
    SampleMoments m;
    m.count = shards * kShardSize;
    const double n = static_cast<double>(m.count);
    m.mean = total.value() / n;
    m.variance = std::max(0.0, (total_sq.value() - n * m.mean * m.mean) / (n - 1.0));
    return m;
}

void for_each_stratified_point(const Box& box, std::uint64_t samples, std::uint64_t seed,
                               const std::function<void(Complex)>& visit) {
    const auto shards = shard_count(samples);
    for (std::uint64_t s = 0; s < shards; ++s) visit_shard(box, seed, s, visit);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    // splitmix64 finalizer over a golden-ratio stride
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace lemlab
