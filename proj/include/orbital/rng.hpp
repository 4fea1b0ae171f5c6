#pragma once
#include <cstdint>
#include <random>

namespace orbital {

// Reproducible per-stream RNG.  Stream i derives its generator state from
// (baseSeed, i) through a splitmix64 scramble, so distinct streams are
// decorrelated and replaying a stream reproduces its sequence exactly.
class RngStream {
  public:
    RngStream(std::uint64_t base_seed, std::uint64_t stream_index)
        : base_seed_(base_seed), stream_index_(stream_index),
          engine_(mix(base_seed, stream_index)) {}

    std::uint64_t base_seed() const { return base_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::mt19937_64& engine() { return engine_; }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    // Fresh stream derived from this one; used to re-draw singular
    // realizations without disturbing the parent sequence.
    RngStream substream(std::uint64_t n) const {
        return RngStream(mix(base_seed_, stream_index_), 0x9e3779b97f4a7c15ull + n);
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0xda942042e4dd58b5ull + 1));
    }

    std::uint64_t base_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace orbital
