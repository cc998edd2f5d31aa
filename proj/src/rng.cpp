#include "duet/rng.hpp"

#include <cmath>

namespace duet {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> ctr = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return ctr;
}

void RandomStream::refill() {
    buffer_ = philox4x32({prefix_[0], prefix_[1], prefix_[2], block_}, key_);
    ++block_;
    cursor_ = 0;
}

std::uint32_t RandomStream::next_u32() {
    if (cursor_ >= 4) refill();
    return buffer_[cursor_++];
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
}

double RandomStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian() {
    if (has_gauss_spare_) {
        has_gauss_spare_ = false;
        return gauss_spare_;
    }
    // Avoid log(0): shift u1 into (0, 1].
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    gauss_spare_ = radius * std::sin(angle);
    has_gauss_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t count_bernoulli(RandomStream& stream, std::uint64_t n, double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (stream.next_double() < p) ++hits;
    }
    return hits;
}

}  // namespace duet
