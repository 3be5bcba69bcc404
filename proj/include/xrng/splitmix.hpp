#pragma once

#include <cstdint>

namespace xrng {

// SplitMix64, used only to expand a 64-bit seed into a full engine state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : x_(seed) {}

    std::uint64_t operator()() {
        std::uint64_t z = (x_ += 0x9e3779b97f4a7c15);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
        z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t x_;
};

}  // namespace xrng
