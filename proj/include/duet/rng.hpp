// rng.hpp
// Counter-based random streams (Philox4x32-10) for reproducible, shardable
// Monte Carlo. A stream is addressed by (seed, domain, point, chunk); draws
// from a stream depend only on that address and the draw position, so results
// are independent of execution order and worker count.

#pragma once

#include <array>
#include <cstdint>

namespace duet {

// One Philox4x32-10 block: 128-bit counter, 64-bit key -> 128 random bits.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// Stream domains keep independent uses of the same seed from colliding.
enum class StreamDomain : std::uint32_t {
    fringe_scan = 1,
    delay_scan = 2,
    bootstrap = 3,
    parity_shots = 4,
    test = 0x7e57
};

class RandomStream {
  public:
    RandomStream(std::uint64_t seed, StreamDomain domain, std::uint32_t point, std::uint32_t chunk)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          prefix_{static_cast<std::uint32_t>(domain), point, chunk} {}

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform double in [0, 1) with 53 random bits.
    double next_double();

    // Standard normal via Box-Muller (two uniforms per pair, cached).
    double next_gaussian();

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 3> prefix_;
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int cursor_ = 4;
    double gauss_spare_ = 0.0;
    bool has_gauss_spare_ = false;
};

// Number of Bernoulli(p) successes in n trials, drawn from the given stream.
std::uint64_t count_bernoulli(RandomStream& stream, std::uint64_t n, double p);

}  // namespace duet
