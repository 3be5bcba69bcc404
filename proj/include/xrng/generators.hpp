#pragma once

// Named generators (engine + scrambler), seeding, floating-point output and
// jump functions.

#include "xrng/bigint.hpp"
#include "xrng/engines.hpp"
#include "xrng/gf2.hpp"
#include "xrng/scramblers.hpp"
#include "xrng/splitmix.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace xrng {

struct GeneratorSpec {
    std::string name;
    Engine engine;
    ScramblerSpec scrambler;

    unsigned w() const { return engine.w(); }
};

namespace detail {

inline GeneratorSpec make_spec(std::string name, EngineFamily fam, unsigned w, unsigned k, EngineParams p,
                               ScramblerSpec sc) {
    Engine e = Engine::named({fam, w, k}, p);
    validate_scrambler(sc, w, k);
    return {std::move(name), e, sc};
}

}  // namespace detail

// Every named generator. Word indices refer to the logical state: for
// xoroshiro1024 word 0 is s[p+1] and word 15 is s[p] of the ring form.
inline const std::vector<GeneratorSpec>& registry() {
    using enum ScramblerKind;
    using F = EngineFamily;
    static const std::vector<GeneratorSpec> specs = [] {
        constexpr std::uint64_t phi64 = 0x9e3779b97f4a7c13;
        constexpr std::uint64_t phi32 = 0x9E3779BB;
        const EngineParams x128{24, 16, 37}, x128pp{49, 21, 28}, s256{17, 45, 0}, s512{11, 21, 0},
            x1024{25, 27, 36}, x64{26, 9, 13}, s128{9, 11, 0};
        std::vector<GeneratorSpec> v;
        auto add = [&](std::string n, F f, unsigned w, unsigned k, EngineParams p, ScramblerSpec sc) {
            v.push_back(detail::make_spec(std::move(n), f, w, k, p, sc));
        };
        // 64-bit
        add("xoroshiro128", F::xoroshiro, 64, 2, x128, {none, 0, 0});
        add("xoshiro256", F::xoshiro, 64, 4, s256, {none, 0, 0});
        add("xoshiro512", F::xoshiro, 64, 8, s512, {none, 0, 0});
        add("xoroshiro1024", F::xoroshiro, 64, 16, x1024, {none, 0, 0});
        add("xoroshiro128plus", F::xoroshiro, 64, 2, x128, {plus, 0, 1});
        add("xoshiro256plus", F::xoshiro, 64, 4, s256, {plus, 0, 3});
        add("xoshiro512plus", F::xoshiro, 64, 8, s512, {plus, 0, 2});
        add("xoroshiro1024plus", F::xoroshiro, 64, 16, x1024, {plus, 0, 15});
        add("xoroshiro128star", F::xoroshiro, 64, 2, x128, {star, 0, 0, phi64});
        add("xoroshiro1024star", F::xoroshiro, 64, 16, x1024, {star, 0, 0, phi64});
        add("xoroshiro128plusplus", F::xoroshiro, 64, 2, x128pp, {plusplus, 0, 1, 1, 17});
        add("xoshiro256plusplus", F::xoshiro, 64, 4, s256, {plusplus, 0, 3, 1, 23});
        add("xoshiro512plusplus", F::xoshiro, 64, 8, s512, {plusplus, 2, 0, 1, 17});
        add("xoroshiro1024plusplus", F::xoroshiro, 64, 16, x1024, {plusplus, 15, 0, 1, 23});
        add("xoroshiro128starstar", F::xoroshiro, 64, 2, x128, {starstar, 0, 0, 5, 7, 9});
        add("xoshiro256starstar", F::xoshiro, 64, 4, s256, {starstar, 1, 1, 5, 7, 9});
        add("xoshiro512starstar", F::xoshiro, 64, 8, s512, {starstar, 1, 1, 5, 7, 9});
        add("xoroshiro1024starstar", F::xoroshiro, 64, 16, x1024, {starstar, 0, 0, 5, 7, 9});
        // 32-bit
        add("xoroshiro64", F::xoroshiro, 32, 2, x64, {none, 0, 0});
        add("xoshiro128", F::xoshiro, 32, 4, s128, {none, 0, 0});
        add("xoroshiro64star", F::xoroshiro, 32, 2, x64, {star, 0, 0, phi32});
        add("xoshiro128plus", F::xoshiro, 32, 4, s128, {plus, 0, 3});
        add("xoshiro128plusplus", F::xoshiro, 32, 4, s128, {plusplus, 0, 3, 1, 7});
        add("xoroshiro64starstar", F::xoroshiro, 32, 2, x64, {starstar, 0, 0, phi32, 5, 5});
        add("xoshiro128starstar", F::xoshiro, 32, 4, s128, {starstar, 1, 1, 5, 7, 9});
        // Reference generators for comparison; the bare engine emits the
        // word the + scrambler adds to.
        add("xorshift128", F::xorshift, 64, 2, {23, 18, 5}, {none, 1, 1});
        add("xorshift128plus", F::xorshift, 64, 2, {23, 18, 5}, {plus, 1, 0});
        return v;
    }();
    return specs;
}

inline const GeneratorSpec& find_generator(std::string_view name) {
    for (const auto& s : registry())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown generator: " + std::string(name));
}

struct JumpPolynomial {
    GF2Poly poly;
    BigInt steps;
    EngineKind kind;
    EngineParams params;
};

namespace detail {

// Characteristic polynomials are computed once per engine.
inline GF2Poly cached_char_poly(const Engine& e) {
    using Key = std::tuple<int, unsigned, unsigned, unsigned, unsigned, unsigned>;
    static std::mutex mu;
    static std::map<Key, GF2Poly> cache;
    const Key key{static_cast<int>(e.kind().family), e.w(), e.k(), e.params().a, e.params().b, e.params().c};
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    GF2Poly p = char_poly(e.matrix());
    std::lock_guard lock(mu);
    return cache.emplace(key, std::move(p)).first->second;
}

template <EngineFamily Fam, bool Ring, ScramblerKind SK>
void fill_kernel(const Engine& e, const ScramblerSpec& sc, EngineState& st, std::span<std::uint64_t> out) {
    const unsigned w = e.w(), k = e.k();
    const EngineParams p = e.params();
    std::uint64_t* s = st.words.data();
    unsigned ring = st.ring_ptr;
    for (auto& o : out) {
        std::uint64_t x, y;
        if constexpr (Ring) {
            unsigned pi = ring + 1 + sc.word_i, pj = ring + 1 + sc.word_j;
            pi -= pi >= k ? k : 0;
            pi -= pi >= k ? k : 0;
            pj -= pj >= k ? k : 0;
            pj -= pj >= k ? k : 0;
            x = s[pi];
            y = s[pj];
        } else {
            x = s[sc.word_i];
            y = s[sc.word_j];
        }
        o = apply_scrambler(ScramblerSpec{SK, 0, 0, sc.S, sc.R, sc.T}, x, y, w);
        if constexpr (Fam == EngineFamily::xoroshiro) {
            if constexpr (Ring)
                xoroshiro_ring_step(s, ring, k, p, w);
            else
                xoroshiro2_step(s, p, w);
        } else if constexpr (Fam == EngineFamily::xoshiro) {
            if (k == 4)
                xoshiro4_step(s, p, w);
            else
                xoshiro8_step(s, p, w);
        } else {
            xorshift2_step(s, p, w);
        }
    }
    st.ring_ptr = ring;
}

template <EngineFamily Fam, bool Ring>
void fill_dispatch_scrambler(const Engine& e, const ScramblerSpec& sc, EngineState& st,
                             std::span<std::uint64_t> out) {
    switch (sc.kind) {
        case ScramblerKind::none: return fill_kernel<Fam, Ring, ScramblerKind::none>(e, sc, st, out);
        case ScramblerKind::plus: return fill_kernel<Fam, Ring, ScramblerKind::plus>(e, sc, st, out);
        case ScramblerKind::star: return fill_kernel<Fam, Ring, ScramblerKind::star>(e, sc, st, out);
        case ScramblerKind::plusplus: return fill_kernel<Fam, Ring, ScramblerKind::plusplus>(e, sc, st, out);
        case ScramblerKind::starstar: return fill_kernel<Fam, Ring, ScramblerKind::starstar>(e, sc, st, out);
    }
}

}  // namespace detail

class Generator {
public:
    Generator(GeneratorSpec spec, EngineState state) : spec_(std::move(spec)), state_(state) {
        bool nonzero = false;
        for (unsigned i = 0; i < spec_.engine.k(); ++i) nonzero |= state_.words[i] != 0;
        if (!nonzero) throw std::invalid_argument("the all-zero state is a fixed point");
    }

    Generator(GeneratorSpec spec, std::span<const std::uint64_t> words)
        : Generator(spec, spec.engine.make_state(words)) {}

    const GeneratorSpec& spec() const { return spec_; }
    const Engine& engine() const { return spec_.engine; }
    const EngineState& state() const { return state_; }
    std::vector<std::uint64_t> logical_state() const { return spec_.engine.logical(state_); }
    unsigned w() const { return spec_.w(); }

    std::uint64_t next() {
        const auto& e = spec_.engine;
        const auto& sc = spec_.scrambler;
        const std::uint64_t out =
            apply_scrambler(sc, e.logical_word(state_, sc.word_i), e.logical_word(state_, sc.word_j), e.w());
        e.step(state_);
        return out;
    }

    std::uint64_t operator()() { return next(); }

    // Upper 53 bits scaled into [0, 1).
    double next_double() {
        if (w() != 64) throw std::logic_error("next_double requires a 64-bit generator");
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    void fill(std::span<std::uint64_t> out) {
        const auto& e = spec_.engine;
        using F = EngineFamily;
        switch (e.kind().family) {
            case F::xoroshiro:
                if (e.uses_ring())
                    return detail::fill_dispatch_scrambler<F::xoroshiro, true>(e, spec_.scrambler, state_, out);
                return detail::fill_dispatch_scrambler<F::xoroshiro, false>(e, spec_.scrambler, state_, out);
            case F::xoshiro:
                return detail::fill_dispatch_scrambler<F::xoshiro, false>(e, spec_.scrambler, state_, out);
            case F::xorshift:
                return detail::fill_dispatch_scrambler<F::xorshift, false>(e, spec_.scrambler, state_, out);
        }
    }

    // Advances by jp.steps: the new state is the xor of s M^i over the set
    // coefficients i of the jump polynomial.
    void jump(const JumpPolynomial& jp) {
        const auto& e = spec_.engine;
        if (jp.kind != e.kind() || jp.params != e.params())
            throw std::invalid_argument("jump polynomial was built for a different engine");
        std::vector<std::uint64_t> acc(e.k(), 0);
        EngineState t = state_;
        const auto deg = jp.poly.degree();
        if (deg) {
            for (std::size_t i = 0; i <= *deg; ++i) {
                if (jp.poly.coeff(i))
                    for (unsigned j = 0; j < e.k(); ++j) acc[j] ^= e.logical_word(t, j);
                e.step(t);
            }
        }
        state_ = e.state_from_logical(acc, state_.ring_ptr);
    }

private:
    GeneratorSpec spec_;
    EngineState state_;
};

// State from k successive SplitMix64 outputs; for w = 32 each output fills
// two words, low half first.
inline Generator seed_from_u64(const GeneratorSpec& spec, std::uint64_t seed) {
    SplitMix64 sm(seed);
    const unsigned k = spec.engine.k();
    std::vector<std::uint64_t> words(k);
    if (spec.w() == 64) {
        for (auto& w : words) w = sm();
    } else if (spec.w() == 32) {
        for (unsigned i = 0; i < k; i += 2) {
            const std::uint64_t z = sm();
            words[i] = z & 0xffffffffu;
            if (i + 1 < k) words[i + 1] = z >> 32;
        }
    } else {
        for (auto& w : words) w = sm() & spec.engine.mask();
    }
    return Generator(spec, words);
}

inline GF2Poly engine_char_poly(const Engine& e) { return detail::cached_char_poly(e); }

inline JumpPolynomial compute_jump_poly(const Engine& e, const BigInt& steps) {
    if (steps < 0) throw std::domain_error("negative jump");
    const GF2Poly p = engine_char_poly(e);
    return {poly_mod_pow(GF2Poly::monomial(1), steps, p), steps, e.kind(), e.params()};
}

inline JumpPolynomial compute_jump_poly(const GeneratorSpec& spec, const BigInt& steps) {
    return compute_jump_poly(spec.engine, steps);
}

struct DefaultJumps {
    JumpPolynomial jump;
    JumpPolynomial long_jump;
};

// jump = 2^(n/2) steps, long_jump = 2^(3n/4) steps, n = state bits.
inline DefaultJumps default_jumps(const GeneratorSpec& spec) {
    const Engine& e = spec.engine;
    const unsigned n = e.state_bits();
    const GF2Poly p = engine_char_poly(e);
    return {{x_pow_pow2(n / 2, p), pow2(n / 2), e.kind(), e.params()},
            {x_pow_pow2(3 * n / 4, p), pow2(3 * n / 4), e.kind(), e.params()}};
}

}  // namespace xrng
