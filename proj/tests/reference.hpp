#pragma once

// Straight transcriptions of the public-domain reference generators, used as
// oracles for the table-driven production code. State layout matches the
// physical words of xrng::Generator with ring pointer 0.

#include "xrng/engines.hpp"
#include "xrng/gf2_matrix.hpp"
#include "xrng/scramblers.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ref {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
inline std::uint32_t rotl32(std::uint32_t x, int k) { return (x << k) | (x >> (32 - k)); }

struct S128 {
    std::uint64_t s[2];
    void step(int a, int b, int c) {
        const std::uint64_t s0 = s[0];
        std::uint64_t s1 = s[1];
        s1 ^= s0;
        s[0] = rotl(s0, a) ^ s1 ^ (s1 << b);
        s[1] = rotl(s1, c);
    }
};

struct S256 {
    std::uint64_t s[4];
    void step() {
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
    }
};

struct S512 {
    std::uint64_t s[8];
    void step() {
        const std::uint64_t t = s[1] << 11;
        s[2] ^= s[0];
        s[5] ^= s[1];
        s[1] ^= s[2];
        s[7] ^= s[3];
        s[3] ^= s[4];
        s[4] ^= s[5];
        s[0] ^= s[6];
        s[6] ^= s[7];
        s[6] ^= t;
        s[7] = rotl(s[7], 21);
    }
};

struct S1024 {
    std::uint64_t s[16];
    int p = 0;
    // returns {s0, s15} before the step
    std::pair<std::uint64_t, std::uint64_t> step() {
        const int q = p;
        const std::uint64_t s0 = s[p = (p + 1) & 15];
        std::uint64_t s15 = s[q];
        const std::pair<std::uint64_t, std::uint64_t> before{s0, s15};
        s15 ^= s0;
        s[q] = rotl(s0, 25) ^ s15 ^ (s15 << 27);
        s[p] = rotl(s15, 36);
        return before;
    }
};

struct S64 {
    std::uint32_t s[2];
    void step() {
        const std::uint32_t s0 = s[0];
        std::uint32_t s1 = s[1];
        s1 ^= s0;
        s[0] = rotl32(s0, 26) ^ s1 ^ (s1 << 9);
        s[1] = rotl32(s1, 13);
    }
};

struct S128x32 {
    std::uint32_t s[4];
    void step() {
        const std::uint32_t t = s[1] << 9;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl32(s[3], 11);
    }
};

using Next = std::function<std::uint64_t()>;

// Reference output function for a named generator seeded with `words`.
inline Next make(const std::string& name, const std::vector<std::uint64_t>& words) {
    constexpr std::uint64_t phi = 0x9e3779b97f4a7c13;
    constexpr std::uint32_t phi32 = 0x9E3779BB;
    auto load = [&words](auto& st) {
        for (std::size_t i = 0; i < words.size(); ++i) st.s[i] = static_cast<std::remove_reference_t<decltype(st.s[0])>>(words[i]);
    };
    const std::string base = name.substr(0, name.find_last_of("0123456789") + 1);
    const std::string suffix = name.substr(base.size());

    if (base == "xoroshiro128") {
        S128 st;
        load(st);
        const bool pp = suffix == "plusplus";
        return [st, suffix, pp]() mutable {
            const std::uint64_t s0 = st.s[0], s1 = st.s[1];
            std::uint64_t r = s0;
            if (suffix == "plus") r = s0 + s1;
            if (suffix == "star") r = s0 * phi;
            if (suffix == "starstar") r = rotl(s0 * 5, 7) * 9;
            if (pp) r = rotl(s0 + s1, 17) + s0;
            if (pp)
                st.step(49, 21, 28);
            else
                st.step(24, 16, 37);
            return r;
        };
    }
    if (base == "xoshiro256") {
        S256 st;
        load(st);
        return [st, suffix]() mutable {
            std::uint64_t r = st.s[0];
            if (suffix == "plus") r = st.s[0] + st.s[3];
            if (suffix == "plusplus") r = rotl(st.s[0] + st.s[3], 23) + st.s[0];
            if (suffix == "starstar") r = rotl(st.s[1] * 5, 7) * 9;
            st.step();
            return r;
        };
    }
    if (base == "xoshiro512") {
        S512 st;
        load(st);
        return [st, suffix]() mutable {
            std::uint64_t r = st.s[0];
            if (suffix == "plus") r = st.s[0] + st.s[2];
            if (suffix == "plusplus") r = rotl(st.s[0] + st.s[2], 17) + st.s[2];
            if (suffix == "starstar") r = rotl(st.s[1] * 5, 7) * 9;
            st.step();
            return r;
        };
    }
    if (base == "xoroshiro1024") {
        S1024 st;
        load(st);
        return [st, suffix]() mutable {
            const auto [s0, s15] = st.step();
            if (suffix == "plus") return s0 + s15;
            if (suffix == "plusplus") return rotl(s0 + s15, 23) + s15;
            if (suffix == "star") return s0 * phi;
            if (suffix == "starstar") return rotl(s0 * 5, 7) * 9;
            return s0;
        };
    }
    if (base == "xoroshiro64") {
        S64 st;
        load(st);
        return [st, suffix]() mutable {
            std::uint32_t r = st.s[0];
            if (suffix == "star") r = st.s[0] * phi32;
            if (suffix == "starstar") r = rotl32(st.s[0] * phi32, 5) * 5;
            st.step();
            return std::uint64_t{r};
        };
    }
    if (base == "xoshiro128") {
        S128x32 st;
        load(st);
        return [st, suffix]() mutable {
            std::uint32_t r = st.s[0];
            if (suffix == "plus") r = st.s[0] + st.s[3];
            if (suffix == "plusplus") r = rotl32(st.s[0] + st.s[3], 7) + st.s[0];
            if (suffix == "starstar") r = rotl32(st.s[1] * 5, 7) * 9;
            st.step();
            return std::uint64_t{r};
        };
    }
    if (base == "xorshift128") {
        std::uint64_t s[2] = {words[0], words[1]};
        return [s, suffix]() mutable {
            std::uint64_t s1 = s[0];
            const std::uint64_t s0 = s[1];
            const std::uint64_t r = suffix == "plus" ? s0 + s1 : s0;
            s[0] = s0;
            s1 ^= s1 << 23;
            s[1] = s1 ^ s0 ^ (s1 >> 18) ^ (s0 >> 5);
            return r;
        };
    }
    throw std::invalid_argument("no reference for " + name);
}

// Output function written out independently of the production scramblers.
inline std::uint64_t scramble(const xrng::ScramblerSpec& sc, std::uint64_t x, std::uint64_t y, unsigned w) {
    const std::uint64_t m = w == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
    auto rot = [&](std::uint64_t v, unsigned r) { return r == 0 ? v : ((v << r) | (v >> (w - r))) & m; };
    switch (sc.kind) {
        case xrng::ScramblerKind::none: return x;
        case xrng::ScramblerKind::plus: return (x + y) & m;
        case xrng::ScramblerKind::star: return (x * sc.S) & m;
        case xrng::ScramblerKind::plusplus: return (rot((x + y) & m, sc.R) + x) & m;
        case xrng::ScramblerKind::starstar: return (rot((x * sc.S) & m, sc.R) * sc.T) & m;
    }
    return 0;
}

// Generator driven by the engine matrix on the flattened state.
class MatrixGenerator {
public:
    MatrixGenerator(const xrng::Engine& e, const xrng::ScramblerSpec& sc, const xrng::BitMatrix& m,
                    std::vector<std::uint64_t> logical)
        : e_(e), sc_(sc), m_(m), v_(xrng::to_bits(e, logical)) {}

    std::uint64_t next() {
        const auto words = xrng::from_bits(e_, v_);
        const std::uint64_t out = scramble(sc_, words[sc_.word_i], words[sc_.word_j], e_.w());
        v_ = xrng::vec_mul(v_, m_);
        return out;
    }

    std::vector<std::uint64_t> logical() const { return xrng::from_bits(e_, v_); }

private:
    xrng::Engine e_;
    xrng::ScramblerSpec sc_;
    xrng::BitMatrix m_;
    xrng::BitVector v_;
};

inline std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
    z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
    return z ^ (z >> 31);
}

}  // namespace ref
