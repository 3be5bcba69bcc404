#pragma once

// Nonlinear output functions applied to the engine state before each step.

#include "xrng/engines.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace xrng {

enum class ScramblerKind { none, plus, star, plusplus, starstar };

// word_i / word_j index the logical (flattened) state. `none` returns word_i
// unchanged and is used for the bare engines.
struct ScramblerSpec {
    ScramblerKind kind = ScramblerKind::none;
    unsigned word_i = 0;
    unsigned word_j = 0;
    std::uint64_t S = 1;
    unsigned R = 0;
    std::uint64_t T = 1;

    friend bool operator==(const ScramblerSpec&, const ScramblerSpec&) = default;
};

inline std::string scrambler_suffix(ScramblerKind k) {
    switch (k) {
        case ScramblerKind::none: return "";
        case ScramblerKind::plus: return "plus";
        case ScramblerKind::star: return "star";
        case ScramblerKind::plusplus: return "plusplus";
        case ScramblerKind::starstar: return "starstar";
    }
    return "";
}

inline constexpr std::uint64_t scramble_plus(std::uint64_t x, std::uint64_t y, unsigned w = 64) {
    return (x + y) & word_mask(w);
}

inline constexpr std::uint64_t scramble_star(std::uint64_t x, std::uint64_t S, unsigned w = 64) {
    return (x * S) & word_mask(w);
}

// rotl(x + y, R) + x; the order of the arguments matters.
inline constexpr std::uint64_t scramble_plusplus(std::uint64_t x, std::uint64_t y, unsigned R,
                                                 unsigned w = 64) {
    return (rotl((x + y) & word_mask(w), R, w) + x) & word_mask(w);
}

inline constexpr std::uint64_t scramble_starstar(std::uint64_t x, std::uint64_t S, unsigned R,
                                                 std::uint64_t T, unsigned w = 64) {
    return (rotl((x * S) & word_mask(w), R, w) * T) & word_mask(w);
}

// (2^s + 1) x computed as x + (x << s).
inline constexpr std::uint64_t shift_add_multiply(std::uint64_t x, unsigned s, unsigned w = 64) {
    return (x + (x << s)) & word_mask(w);
}

inline void validate_scrambler(const ScramblerSpec& sc, unsigned w, unsigned k) {
    if (sc.word_i >= k || sc.word_j >= k) throw std::invalid_argument("scrambler word index out of range");
    const bool needs_rot = sc.kind == ScramblerKind::plusplus || sc.kind == ScramblerKind::starstar;
    if (needs_rot && (sc.R == 0 || sc.R >= w)) throw std::invalid_argument("rotation must satisfy 0 < R < w");
    const bool needs_s = sc.kind == ScramblerKind::star || sc.kind == ScramblerKind::starstar;
    if (needs_s && !(sc.S & 1)) throw std::invalid_argument("multiplier S must be odd");
    if (sc.kind == ScramblerKind::starstar && !(sc.T & 1)) throw std::invalid_argument("multiplier T must be odd");
}

// x = logical word i, y = logical word j of the current state.
inline constexpr std::uint64_t apply_scrambler(const ScramblerSpec& sc, std::uint64_t x, std::uint64_t y,
                                               unsigned w) {
    switch (sc.kind) {
        case ScramblerKind::none: return x;
        case ScramblerKind::plus: return scramble_plus(x, y, w);
        case ScramblerKind::star: return scramble_star(x, sc.S, w);
        case ScramblerKind::plusplus: return scramble_plusplus(x, y, sc.R, w);
        case ScramblerKind::starstar: return scramble_starstar(x, sc.S, sc.R, sc.T, w);
    }
    return x;
}

}  // namespace xrng
