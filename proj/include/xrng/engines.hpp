#pragma once

// Linear engines: xoroshiro (2w and kw forms), xoshiro (4w and 8w forms) and,
// as a reference point for the analysis tools, Marsaglia's two-word xorshift.
//
// Words are held in uint64_t regardless of the word size w; every operation
// masks to w bits, so toy engines with w = 2..12 run through the same code.

#include "xrng/gf2_matrix.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xrng {

constexpr std::size_t max_state_words = 16;

inline constexpr std::uint64_t word_mask(unsigned w) {
    return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
}

inline constexpr std::uint64_t rotl(std::uint64_t x, unsigned r, unsigned w = 64) {
    if (r == 0) return x;
    return ((x << r) | (x >> (w - r))) & word_mask(w);
}

// Checked variant used at API boundaries.
inline std::uint64_t rotl_checked(std::uint64_t x, unsigned r, unsigned w = 64) {
    if (r >= w) throw std::out_of_range("rotation amount must be smaller than the word size");
    return rotl(x & word_mask(w), r, w);
}

enum class EngineFamily { xoroshiro, xoshiro, xorshift };

struct EngineKind {
    EngineFamily family = EngineFamily::xoroshiro;
    unsigned w = 64;
    unsigned k = 2;

    unsigned state_bits() const { return w * k; }
    friend bool operator==(const EngineKind&, const EngineKind&) = default;
};

struct EngineParams {
    unsigned a = 0;
    unsigned b = 0;
    unsigned c = 0;  // unused by xoshiro

    friend bool operator==(const EngineParams&, const EngineParams&) = default;
};

struct EngineState {
    std::array<std::uint64_t, max_state_words> words{};
    // Index of the last logical word for the ring-buffer xoroshiro (k > 2).
    unsigned ring_ptr = 0;

    friend bool operator==(const EngineState&, const EngineState&) = default;
};

inline std::string family_name(EngineFamily f) {
    switch (f) {
        case EngineFamily::xoroshiro: return "xoroshiro";
        case EngineFamily::xoshiro: return "xoshiro";
        case EngineFamily::xorshift: return "xorshift";
    }
    return "?";
}

namespace detail {

struct NamedEngineParams {
    EngineKind kind;
    EngineParams params;
};

// Engine parameters from the published tables, plus the xorshift128
// reference engine.
inline const std::vector<NamedEngineParams>& named_engine_params() {
    static const std::vector<NamedEngineParams> table = {
        {{EngineFamily::xoroshiro, 64, 2}, {24, 16, 37}},
        {{EngineFamily::xoroshiro, 64, 2}, {49, 21, 28}},
        {{EngineFamily::xoshiro, 64, 4}, {17, 45, 0}},
        {{EngineFamily::xoshiro, 64, 8}, {11, 21, 0}},
        {{EngineFamily::xoroshiro, 64, 16}, {25, 27, 36}},
        {{EngineFamily::xoroshiro, 32, 2}, {26, 9, 13}},
        {{EngineFamily::xoshiro, 32, 4}, {9, 11, 0}},
        {{EngineFamily::xorshift, 64, 2}, {23, 18, 5}},
    };
    return table;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Step functions. Each one is the literal update of the corresponding
// reference code; `m` is the word mask.

inline void xoroshiro2_step(std::uint64_t* s, const EngineParams& p, unsigned w) {
    const std::uint64_t m = word_mask(w);
    const std::uint64_t s0 = s[0];
    std::uint64_t s1 = s[1];
    s1 ^= s0;
    s[0] = rotl(s0, p.a, w) ^ s1 ^ ((s1 << p.b) & m);
    s[1] = rotl(s1, p.c, w);
}

// Ring-buffer form: `ring` names the last logical word; logical word j lives
// at s[(ring + 1 + j) % k].
inline void xoroshiro_ring_step(std::uint64_t* s, unsigned& ring, unsigned k, const EngineParams& p,
                                unsigned w) {
    const std::uint64_t m = word_mask(w);
    const unsigned q = ring;
    ring = ring + 1 == k ? 0 : ring + 1;
    const std::uint64_t s0 = s[ring];
    std::uint64_t sl = s[q];
    sl ^= s0;
    s[q] = rotl(s0, p.a, w) ^ sl ^ ((sl << p.b) & m);
    s[ring] = rotl(sl, p.c, w);
}

// Pointer-free form of the same engine: words are physically shifted.
inline void xoroshiro_flat_step(std::uint64_t* s, unsigned k, const EngineParams& p, unsigned w) {
    const std::uint64_t m = word_mask(w);
    const std::uint64_t s0 = s[0];
    const std::uint64_t sl = s[k - 1] ^ s0;
    for (unsigned j = 0; j + 2 < k; ++j) s[j] = s[j + 1];
    s[k - 2] = rotl(s0, p.a, w) ^ sl ^ ((sl << p.b) & m);
    s[k - 1] = rotl(sl, p.c, w);
}

inline void xoshiro4_step(std::uint64_t* s, const EngineParams& p, unsigned w) {
    const std::uint64_t m = word_mask(w);
    const std::uint64_t t = (s[1] << p.a) & m;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], p.b, w);
}

inline void xoshiro8_step(std::uint64_t* s, const EngineParams& p, unsigned w) {
    const std::uint64_t m = word_mask(w);
    const std::uint64_t t = (s[1] << p.a) & m;
    s[2] ^= s[0];
    s[5] ^= s[1];
    s[1] ^= s[2];
    s[7] ^= s[3];
    s[3] ^= s[4];
    s[4] ^= s[5];
    s[0] ^= s[6];
    s[6] ^= s[7];
    s[6] ^= t;
    s[7] = rotl(s[7], p.b, w);
}

inline void xorshift2_step(std::uint64_t* s, const EngineParams& p, unsigned w) {
    const std::uint64_t m = word_mask(w);
    std::uint64_t s1 = s[0];
    const std::uint64_t s0 = s[1];
    s[0] = s0;
    s1 ^= (s1 << p.a) & m;
    s[1] = s1 ^ s0 ^ (s1 >> p.b) ^ (s0 >> p.c);
}

// ---------------------------------------------------------------------------

class Engine {
public:
    // Only parameter sets from the published tables are accepted.
    static Engine named(EngineKind kind, EngineParams params) {
        validate_shape(kind, params);
        for (const auto& e : detail::named_engine_params())
            if (e.kind == kind && e.params == params) return Engine(kind, params);
        throw std::invalid_argument("parameters are not a named full-period choice; use "
                                    "Engine::unchecked for analysis");
    }

    // Any structurally valid parameters, full period or not.
    static Engine unchecked(EngineKind kind, EngineParams params) {
        validate_shape(kind, params);
        return Engine(kind, params);
    }

    const EngineKind& kind() const { return kind_; }
    const EngineParams& params() const { return params_; }
    unsigned w() const { return kind_.w; }
    unsigned k() const { return kind_.k; }
    unsigned state_bits() const { return kind_.state_bits(); }
    std::uint64_t mask() const { return word_mask(kind_.w); }
    bool uses_ring() const { return kind_.family == EngineFamily::xoroshiro && kind_.k > 2; }

    friend bool operator==(const Engine&, const Engine&) = default;

    // Physical words in array order; ring pointer starts at 0 as in the
    // reference code.
    EngineState make_state(std::span<const std::uint64_t> words) const {
        if (words.size() != kind_.k) throw std::invalid_argument("state must have exactly k words");
        EngineState s;
        bool nonzero = false;
        for (unsigned i = 0; i < kind_.k; ++i) {
            if (words[i] & ~mask()) throw std::invalid_argument("state word exceeds word size");
            s.words[i] = words[i];
            nonzero |= words[i] != 0;
        }
        if (!nonzero) throw std::invalid_argument("the all-zero state is a fixed point");
        return s;
    }

    // State whose logical (flattened) view equals `logical`.
    EngineState state_from_logical(std::span<const std::uint64_t> logical,
                                   unsigned ring_ptr = 0) const {
        if (logical.size() != kind_.k) throw std::invalid_argument("state must have exactly k words");
        EngineState s;
        s.ring_ptr = uses_ring() ? ring_ptr % kind_.k : 0;
        bool nonzero = false;
        for (unsigned j = 0; j < kind_.k; ++j) {
            s.words[physical_index(s, j)] = logical[j] & mask();
            nonzero |= logical[j] != 0;
        }
        if (!nonzero) throw std::invalid_argument("the all-zero state is a fixed point");
        return s;
    }

    unsigned physical_index(const EngineState& s, unsigned logical_word) const {
        return uses_ring() ? (s.ring_ptr + 1 + logical_word) % kind_.k : logical_word;
    }

    std::uint64_t logical_word(const EngineState& s, unsigned j) const {
        return s.words[physical_index(s, j)];
    }

    std::vector<std::uint64_t> logical(const EngineState& s) const {
        std::vector<std::uint64_t> out(kind_.k);
        for (unsigned j = 0; j < kind_.k; ++j) out[j] = logical_word(s, j);
        return out;
    }

    void step(EngineState& s) const {
        switch (kind_.family) {
            case EngineFamily::xoroshiro:
                if (kind_.k == 2)
                    xoroshiro2_step(s.words.data(), params_, kind_.w);
                else
                    xoroshiro_ring_step(s.words.data(), s.ring_ptr, kind_.k, params_, kind_.w);
                break;
            case EngineFamily::xoshiro:
                if (kind_.k == 4)
                    xoshiro4_step(s.words.data(), params_, kind_.w);
                else
                    xoshiro8_step(s.words.data(), params_, kind_.w);
                break;
            case EngineFamily::xorshift:
                xorshift2_step(s.words.data(), params_, kind_.w);
                break;
        }
    }

    // Reference step on the flattened state (no ring pointer).
    void step_flat(std::span<std::uint64_t> logical) const {
        if (kind_.family == EngineFamily::xoroshiro && kind_.k > 2)
            xoroshiro_flat_step(logical.data(), kind_.k, params_, kind_.w);
        else {
            EngineState s;
            std::copy(logical.begin(), logical.end(), s.words.begin());
            step(s);
            std::copy_n(s.words.begin(), logical.size(), logical.begin());
        }
    }

    // M with step(s) = s * M on the flattened bit vector; word j occupies
    // bits [j*w, (j+1)*w). Block (i, j) maps input word i into output word j.
    BitMatrix matrix() const {
        const unsigned w = kind_.w, k = kind_.k;
        BitMatrix m(static_cast<std::size_t>(w) * k);
        const BitMatrix I = BitMatrix::identity(w);
        auto put = [&](unsigned i, unsigned j, const BitMatrix& blk) { m.xor_block(i * w, j * w, blk); };
        auto R = [&](unsigned r) { return rotation_matrix(w, r); };
        auto S = [&](unsigned s) { return shift_matrix(w, s); };
        const auto& p = params_;
        switch (kind_.family) {
            case EngineFamily::xoroshiro: {
                BitMatrix top = R(p.a);
                top ^= S(p.b);
                top ^= I;
                BitMatrix bottom = S(p.b);
                bottom ^= I;
                put(0, k - 2, top);
                put(0, k - 1, R(p.c));
                for (unsigned j = 0; j + 2 < k; ++j) put(j + 1, j, I);
                put(k - 1, k - 2, bottom);
                put(k - 1, k - 1, R(p.c));
                break;
            }
            case EngineFamily::xoshiro: {
                // Block layouts transcribed row by row from the published
                // matrices; 'I', 'S' (shift by a), 'R' (rotation by b), '0'.
                static const char* s4[] = {"III0", "IISR", "0II0", "I00R"};
                static const char* s8[] = {"III00000", "0I00IIS0", "0II00000", "000I00IR",
                                           "000II000", "0000II00", "I00000I0", "000000IR"};
                const char* const* rows = k == 4 ? s4 : s8;
                for (unsigned i = 0; i < k; ++i)
                    for (unsigned j = 0; j < k; ++j) switch (rows[i][j]) {
                            case 'I': put(i, j, I); break;
                            case 'S': put(i, j, S(p.a)); break;
                            case 'R': put(i, j, R(p.b)); break;
                            default: break;
                        }
                break;
            }
            case EngineFamily::xorshift: {
                BitMatrix left = S(p.a);
                left ^= I;
                BitMatrix right_b = right_shift_matrix(w, p.b);
                right_b ^= I;
                BitMatrix right_c = right_shift_matrix(w, p.c);
                right_c ^= I;
                put(1, 0, I);
                put(0, 1, mat_mul(left, right_b));
                put(1, 1, right_c);
                break;
            }
        }
        return m;
    }

private:
    Engine(EngineKind kind, EngineParams params) : kind_(kind), params_(params) {}

    static void validate_shape(const EngineKind& kind, const EngineParams& p) {
        if (kind.w < 2 || kind.w > 64) throw std::invalid_argument("word size must be in [2, 64]");
        switch (kind.family) {
            case EngineFamily::xoroshiro:
                if (kind.k < 2 || kind.k > max_state_words)
                    throw std::invalid_argument("xoroshiro needs 2 <= k <= 16");
                break;
            case EngineFamily::xoshiro:
                if (kind.k != 4 && kind.k != 8) throw std::invalid_argument("xoshiro is defined for k = 4, 8");
                break;
            case EngineFamily::xorshift:
                if (kind.k != 2) throw std::invalid_argument("xorshift engine supports k = 2 only");
                break;
        }
        auto in_range = [&](unsigned v) { return v > 0 && v < kind.w; };
        if (!in_range(p.a) || !in_range(p.b))
            throw std::invalid_argument("parameters must satisfy 0 < a, b < w");
        if (kind.family != EngineFamily::xoshiro && !in_range(p.c))
            throw std::invalid_argument("parameter c must satisfy 0 < c < w");
    }

    EngineKind kind_;
    EngineParams params_;
};

inline BitMatrix engine_matrix(EngineKind kind, EngineParams params) {
    return Engine::unchecked(kind, params).matrix();
}

// Flattened state as a bit vector of kw bits.
inline BitVector to_bits(const Engine& e, std::span<const std::uint64_t> logical) {
    BitVector v(words_for_bits(e.state_bits()), 0);
    for (unsigned j = 0; j < e.k(); ++j)
        for (unsigned b = 0; b < e.w(); ++b)
            if ((logical[j] >> b) & 1) set_bit(v, static_cast<std::size_t>(j) * e.w() + b, true);
    return v;
}

inline std::vector<std::uint64_t> from_bits(const Engine& e, std::span<const std::uint64_t> bits) {
    std::vector<std::uint64_t> out(e.k(), 0);
    for (unsigned j = 0; j < e.k(); ++j)
        for (unsigned b = 0; b < e.w(); ++b)
            if (get_bit(bits, static_cast<std::size_t>(j) * e.w() + b)) out[j] |= std::uint64_t{1} << b;
    return out;
}

}  // namespace xrng
