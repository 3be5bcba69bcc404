#include "xrng/engines.hpp"
#include "xrng/gf2.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace xrng;

namespace {

using F = EngineFamily;

std::vector<std::uint64_t> random_logical(const Engine& e, std::mt19937_64& rng) {
    std::vector<std::uint64_t> v(e.k());
    do {
        for (auto& x : v) x = rng() & e.mask();
    } while (std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; }));
    return v;
}

std::vector<Engine> named_engines() {
    std::vector<Engine> out;
    for (const auto& p : detail::named_engine_params()) out.push_back(Engine::named(p.kind, p.params));
    return out;
}

}  // namespace

TEST(Rotl, Basics) {
    EXPECT_EQ(rotl(1, 1), 2u);
    EXPECT_EQ(rotl(std::uint64_t{1} << 63, 1), 1u);
    EXPECT_EQ(rotl(0x1234, 0), 0x1234u);
    EXPECT_EQ(rotl(0b101, 1, 3), 0b011u);
    EXPECT_THROW(rotl_checked(1, 64), std::out_of_range);
}

TEST(Xoroshiro, HandTracedStep) {
    const Engine e = Engine::named({F::xoroshiro, 64, 2}, {24, 16, 37});
    EngineState s = e.make_state(std::vector<std::uint64_t>{1, 0});
    e.step(s);
    EXPECT_EQ(s.words[0], 0x1010001u);
    EXPECT_EQ(s.words[1], 0x2000000000u);
}

TEST(Xoshiro, HandTracedStep) {
    const Engine e = Engine::named({F::xoshiro, 64, 4}, {17, 45, 0});
    EngineState s = e.make_state(std::vector<std::uint64_t>{1, 0, 0, 0});
    e.step(s);
    // t = 0; s2 ^= s0; s1 ^= s2; s0 ^= s3 (= 0)
    EXPECT_EQ(s.words[0], 1u);
    EXPECT_EQ(s.words[1], 1u);
    EXPECT_EQ(s.words[2], 1u);
    EXPECT_EQ(s.words[3], 0u);

    const Engine e8 = Engine::named({F::xoshiro, 64, 8}, {11, 21, 0});
    EngineState t = e8.make_state(std::vector<std::uint64_t>{0, 1, 0, 0, 0, 0, 0, 0});
    e8.step(t);
    // s5 ^= s1 -> 1; s1 ^= s2 -> 1; s4 ^= s5 -> 1; s6 ^= t -> 1 << 11
    const std::vector<std::uint64_t> expect{0, 1, 0, 0, 1, 1, std::uint64_t{1} << 11, 0};
    for (unsigned i = 0; i < 8; ++i) EXPECT_EQ(t.words[i], expect[i]) << i;
}

TEST(Engine, ConstructionChecks) {
    EXPECT_THROW(Engine::named({F::xoroshiro, 64, 2}, {1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(Engine::unchecked({F::xoshiro, 64, 5}, {1, 2, 0}), std::invalid_argument);
    EXPECT_THROW(Engine::unchecked({F::xoroshiro, 8, 2}, {0, 2, 3}), std::invalid_argument);
    const Engine e = Engine::named({F::xoroshiro, 64, 2}, {24, 16, 37});
    EXPECT_THROW(e.make_state(std::vector<std::uint64_t>{0, 0}), std::invalid_argument);
    EXPECT_THROW(e.make_state(std::vector<std::uint64_t>{1}), std::invalid_argument);
    const Engine small = Engine::unchecked({F::xoroshiro, 5, 2}, {1, 3, 1});
    EXPECT_THROW(small.make_state(std::vector<std::uint64_t>{32, 0}), std::invalid_argument);
}

TEST(Engine, StepMatchesMatrixForNamedEngines) {
    std::mt19937_64 rng(11);
    for (const Engine& e : named_engines()) {
        const BitMatrix m = e.matrix();
        for (int i = 0; i < 10000; ++i) {
            const auto logical = random_logical(e, rng);
            EngineState s = e.state_from_logical(logical, static_cast<unsigned>(rng() % e.k()));
            e.step(s);
            const auto expect = from_bits(e, vec_mul(to_bits(e, logical), m));
            ASSERT_EQ(e.logical(s), expect) << family_name(e.kind().family) << e.state_bits();
        }
    }
}

TEST(Engine, StepMatchesMatrixForToyEngines) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        EngineKind kind;
        const int fam = static_cast<int>(rng() % 3);
        kind.w = 2 + static_cast<unsigned>(rng() % 15);
        if (fam == 0) {
            kind.family = F::xoroshiro;
            kind.k = 2 + static_cast<unsigned>(rng() % 6);
        } else if (fam == 1) {
            kind.family = F::xoshiro;
            kind.k = rng() & 1 ? 4 : 8;
        } else {
            kind.family = F::xorshift;
            kind.k = 2;
        }
        EngineParams p{1 + static_cast<unsigned>(rng() % (kind.w - 1)), 1 + static_cast<unsigned>(rng() % (kind.w - 1)),
                       1 + static_cast<unsigned>(rng() % (kind.w - 1))};
        if (fam == 1) p.c = 0;
        const Engine e = Engine::unchecked(kind, p);
        const BitMatrix m = e.matrix();
        for (int i = 0; i < 200; ++i) {
            const auto logical = random_logical(e, rng);
            EngineState s = e.state_from_logical(logical);
            e.step(s);
            ASSERT_EQ(e.logical(s), from_bits(e, vec_mul(to_bits(e, logical), m)));
        }
    }
}

TEST(Engine, RingAndFlatFormsAgree) {
    std::mt19937_64 rng(13);
    const Engine e = Engine::named({F::xoroshiro, 64, 16}, {25, 27, 36});
    auto flat = random_logical(e, rng);
    EngineState s = e.state_from_logical(flat);
    for (int i = 0; i < 1000; ++i) {
        e.step(s);
        e.step_flat(flat);
        ASSERT_EQ(e.logical(s), flat);
    }
    EXPECT_EQ(s.ring_ptr, 1000u % 16);
}

TEST(Engine, NamedMatricesInvertibleAndCharPolysPrimitive) {
    struct Row {
        EngineKind kind;
        EngineParams p;
        std::size_t weight;
    };
    // weights of the characteristic polynomials as tabulated for these engines
    const std::vector<Row> rows = {
        {{F::xoroshiro, 64, 2}, {24, 16, 37}, 53},  {{F::xoroshiro, 64, 2}, {49, 21, 28}, 63},
        {{F::xoshiro, 64, 4}, {17, 45, 0}, 115},    {{F::xoshiro, 64, 8}, {11, 21, 0}, 251},
        {{F::xoroshiro, 32, 2}, {26, 9, 13}, 31},   {{F::xoshiro, 32, 4}, {9, 11, 0}, 55},
    };
    for (const auto& r : rows) {
        const Engine e = Engine::named(r.kind, r.p);
        const BitMatrix m = e.matrix();
        EXPECT_TRUE(is_invertible(m));
        const GF2Poly p = char_poly(m);
        EXPECT_EQ(p.degree(), e.state_bits());
        EXPECT_EQ(poly_weight(p), r.weight);
        EXPECT_TRUE(is_primitive(p));
    }
}

TEST(Engine, MatrixOrderDividesMersenne) {
    const Engine e = Engine::named({F::xoroshiro, 64, 2}, {24, 16, 37});
    const BitMatrix m = e.matrix();
    EXPECT_TRUE((mat_pow(m, mersenne(128)) ^= BitMatrix::identity(128)).is_zero());
    EXPECT_FALSE((mat_pow(m, mersenne(128) / 3) ^= BitMatrix::identity(128)).is_zero());
}

TEST(Engine, ToyXorshiftCharPoly) {
    const Engine e = Engine::unchecked({F::xorshift, 3, 2}, {1, 2, 1});
    const GF2Poly p = char_poly(e.matrix());
    EXPECT_EQ(p, GF2Poly::from_exponents({6, 5, 3, 2, 0}));
    EXPECT_TRUE(is_primitive(p));
}

TEST(Engine, FullPeriodOnToySizes) {
    // every primitive toy engine returns to its start after exactly 2^n - 1 steps
    std::mt19937_64 rng(14);
    int checked = 0;
    for (unsigned w = 2; w <= 6; ++w)
        for (unsigned a = 1; a < w; ++a)
            for (unsigned b = 1; b < w; ++b)
                for (unsigned c = 1; c < w; ++c) {
                    const Engine e = Engine::unchecked({F::xoroshiro, w, 2}, {a, b, c});
                    const GF2Poly p = char_poly(e.matrix());
                    const auto start = random_logical(e, rng);
                    EngineState s = e.state_from_logical(start);
                    const std::uint64_t full = (std::uint64_t{1} << (2 * w)) - 1;
                    std::uint64_t t = 0;
                    do {
                        e.step(s);
                        ++t;
                    } while (e.logical(s) != start);
                    EXPECT_EQ(t == full, is_primitive(p)) << w << " " << a << " " << b << " " << c;
                    if (is_irreducible(p)) { EXPECT_EQ(full % t, 0u); }
                    ++checked;
                }
    EXPECT_GT(checked, 100);
}

TEST(Engine, FivebitCounterexampleHasFullPeriod) {
    const Engine e = Engine::unchecked({F::xoroshiro, 5, 2}, {1, 3, 1});
    EXPECT_TRUE(is_primitive(char_poly(e.matrix())));
    const Engine x = Engine::unchecked({F::xoshiro, 5, 8}, {2, 3, 0});
    EXPECT_TRUE(is_primitive(char_poly(x.matrix())));
}
