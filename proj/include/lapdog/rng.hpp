#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace lapdog {

// Deterministic random source. splitmix64 core, so streams are reproducible
// across platforms and standard-library versions. Every consumer of
// randomness takes one of these explicitly; named substreams keep the
// augmentation / initialization / data-order draws independent of each other.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::size_t uniform_int(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        // Box-Muller; one fresh pair per call keeps the stream position
        // independent of call parity.
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300)
            u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586 * u2);
    }

    // Independent stream derived from this seed and a purpose label.
    Rng substream(const std::string &name) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : name) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return Rng(state_ ^ h ^ 0x5851f42d4c957f2dULL);
    }

  private:
    std::uint64_t state_;
};

} // namespace lapdog
