#pragma once

#include <cstdint>
#include <vector>

namespace cek {

// splitmix64 (Steele, Lea, Flood / Vigna). Chosen as the project-wide
// generator because its output is fixed by the algorithm alone, so seeded
// corpora are reproducible across compilers and platforms. All instance
// generators and test corpora derive their randomness from this stream.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi], inclusive. Lemire's multiply-shift reduction;
    // the tiny modulo bias is acceptable for test corpora and keeps the
    // draw at exactly one next() call, which the reproducibility contract
    // relies on.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        if (span == 0) return lo + static_cast<int64_t>(next());  // full range
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * span;
        return lo + static_cast<int64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform_unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derives an independent stream, used to give parallel corpus shards
    // their own deterministic sub-seeds.
    static uint64_t mix(uint64_t seed, uint64_t salt) {
        SplitMix64 s(seed ^ (0xa0761d6478bd642fULL * (salt + 1)));
        return s.next();
    }

private:
    uint64_t state_;
};

}  // namespace cek
