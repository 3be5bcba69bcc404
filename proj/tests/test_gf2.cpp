#include "xrng/gf2.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace xrng;

namespace {

GF2Poly random_poly(std::mt19937_64& rng, std::size_t degree) {
    GF2Poly p = GF2Poly::monomial(degree);
    for (std::size_t i = 0; i < degree; ++i)
        if (rng() & 1) p.set(i);
    return p;
}

GF2Poly naive_mul(const GF2Poly& a, const GF2Poly& b) {
    GF2Poly r;
    if (a.is_zero() || b.is_zero()) return r;
    for (std::size_t i = 0; i <= *a.degree(); ++i)
        for (std::size_t j = 0; j <= *b.degree(); ++j)
            if (a.coeff(i) && b.coeff(j)) r.flip(i + j);
    return r;
}

BitMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    BitMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m.set(r, c, rng() & 1);
    return m;
}

// Row-vector companion matrix: v C = next state of the LFSR with char poly p.
BitMatrix companion(const GF2Poly& p) {
    const std::size_t n = *p.degree();
    BitMatrix m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) m.set(i + 1, i, true);
    for (std::size_t i = 0; i < n; ++i) m.set(i, n - 1, p.coeff(i));
    return m;
}

// det(xI + M) by cofactor expansion over GF(2)[x]; tiny n only.
GF2Poly det_expand(const std::vector<std::vector<GF2Poly>>& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    GF2Poly sum;
    for (std::size_t c = 0; c < n; ++c) {
        if (a[0][c].is_zero()) continue;
        std::vector<std::vector<GF2Poly>> minor(n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t cc = 0; cc < n; ++cc)
                if (cc != c) minor[r - 1].push_back(a[r][cc]);
        sum ^= naive_mul(a[0][c], det_expand(minor));
    }
    return sum;
}

GF2Poly char_poly_by_determinant(const BitMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<GF2Poly>> a(n, std::vector<GF2Poly>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            if (m.get(r, c)) a[r][c] = GF2Poly::one();
            if (r == c) a[r][c] ^= GF2Poly::monomial(1);
        }
    return det_expand(a);
}

bool irreducible_by_trial_division(const GF2Poly& p) {
    const std::size_t n = *p.degree();
    for (std::size_t d = 1; d <= n / 2; ++d)
        for (std::uint64_t low = 0; low < (std::uint64_t{1} << d); ++low) {
            GF2Poly q = GF2Poly::from_words({low | (std::uint64_t{1} << d)});
            if ((p % q).is_zero()) return false;
        }
    return true;
}

std::uint64_t order_of_x(const GF2Poly& p) {
    const GF2Poly x = GF2Poly::monomial(1);
    GF2Poly acc = x % p;
    for (std::uint64_t t = 1; t < (std::uint64_t{1} << *p.degree()); ++t) {
        if (acc.is_one()) return t;
        acc = naive_mul(acc, x) % p;
    }
    return 0;
}

}  // namespace

TEST(Clmul, PortableAndHardwareAgreeWithBitLoop) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t a = rng(), b = rng();
        std::uint64_t lo = 0, hi = 0;
        for (unsigned j = 0; j < 64; ++j)
            if (b >> j & 1) {
                lo ^= a << j;
                if (j) hi ^= a >> (64 - j);
            }
        const auto p = detail::clmul(a, b, Clmul::portable);
        EXPECT_EQ(p.lo, lo);
        EXPECT_EQ(p.hi, hi);
        const auto h = detail::clmul(a, b, Clmul::automatic);
        EXPECT_EQ(h.lo, lo);
        EXPECT_EQ(h.hi, hi);
    }
}

TEST(GF2Poly, MultiplicationMatchesSchoolbook) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const GF2Poly a = random_poly(rng, rng() % 300), b = random_poly(rng, rng() % 300);
        EXPECT_EQ(mul(a, b, Clmul::portable), naive_mul(a, b));
        EXPECT_EQ(mul(a, b, Clmul::automatic), naive_mul(a, b));
    }
}

TEST(GF2Poly, DivisionIdentity) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const GF2Poly a = random_poly(rng, rng() % 400), m = random_poly(rng, 1 + rng() % 150);
        const auto [q, r] = divmod(a, m);
        EXPECT_EQ(naive_mul(q, m) ^ r, a);
        if (!r.is_zero()) { EXPECT_LT(*r.degree(), *m.degree()); }
    }
    EXPECT_THROW(divmod(GF2Poly::one(), GF2Poly{}), std::domain_error);
}

TEST(GF2Poly, GcdDividesBoth) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const GF2Poly c = random_poly(rng, 1 + rng() % 20);
        const GF2Poly a = naive_mul(c, random_poly(rng, rng() % 40));
        const GF2Poly b = naive_mul(c, random_poly(rng, rng() % 40));
        const GF2Poly g = gcd(a, b);
        EXPECT_TRUE((a % g).is_zero());
        EXPECT_TRUE((b % g).is_zero());
        EXPECT_TRUE((g % c).is_zero());
    }
}

TEST(GF2Poly, ModularPowerMatchesRepeatedMultiplication) {
    std::mt19937_64 rng(5);
    const GF2Poly m = random_poly(rng, 61);
    const GF2Poly base = random_poly(rng, 40);
    GF2Poly acc = GF2Poly::one();
    for (unsigned e = 0; e < 300; ++e) {
        EXPECT_EQ(poly_mod_pow(base, e, m), acc) << e;
        acc = naive_mul(acc, base) % m;
    }
    GF2Poly sq = GF2Poly::monomial(1);
    for (unsigned k = 0; k < 40; ++k) {
        EXPECT_EQ(x_pow_pow2(k, m), sq % m);
        sq = naive_mul(sq % m, sq % m) % m;
    }
}

TEST(GF2Poly, StringForm) {
    EXPECT_EQ(GF2Poly::from_exponents({6, 5, 3, 2, 0}).to_string(), "x^6+x^5+x^3+x^2+1");
    EXPECT_EQ(GF2Poly::from_exponents({6, 5, 3, 2, 0}).weight(), 5u);
    EXPECT_FALSE(GF2Poly{}.degree().has_value());
}

TEST(BerlekampMassey, MatchesShortestLfsrSearch) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t len = 1 + rng() % 14;
        std::vector<std::uint8_t> s(len);
        for (auto& b : s) b = rng() & 1;
        // smallest L with taps c_1..c_L: s_i = sum c_j s_{i-j} for i >= L;
        // L = len always works
        std::size_t best = len;
        for (std::size_t L = 0; L < len && best == len; ++L)
            for (std::uint64_t taps = 0; taps < (std::uint64_t{1} << L); ++taps) {
                bool ok = true;
                for (std::size_t i = L; i < len && ok; ++i) {
                    unsigned v = 0;
                    for (std::size_t j = 1; j <= L; ++j) v ^= (taps >> (j - 1) & 1) & s[i - j];
                    ok = v == s[i];
                }
                if (ok) {
                    best = L;
                    break;
                }
            }
        EXPECT_EQ(berlekamp_massey(s).complexity, best);
    }
}

TEST(BerlekampMassey, RecoversLfsrPolynomial) {
    // s_{i} = s_{i-5} ^ s_{i-3}: minimal polynomial x^5 + x^2 + 1
    std::vector<std::uint8_t> s{1, 0, 0, 0, 0};
    for (std::size_t i = 5; i < 80; ++i) s.push_back(s[i - 5] ^ s[i - 3]);
    const auto r = berlekamp_massey(s);
    EXPECT_EQ(r.complexity, 5u);
    EXPECT_EQ(minimal_polynomial(r), GF2Poly::from_exponents({5, 2, 0}));
}

TEST(BitMatrix, PowerMatchesRepeatedProduct) {
    std::mt19937_64 rng(7);
    const BitMatrix m = random_matrix(rng, 70);
    BitMatrix acc = BitMatrix::identity(70);
    for (unsigned e = 0; e < 40; ++e) {
        EXPECT_TRUE((mat_pow(m, e) ^= acc).is_zero());
        acc = mat_mul(acc, m);
    }
}

TEST(BitMatrix, VectorProductIsRowCombination) {
    std::mt19937_64 rng(8);
    const BitMatrix m = random_matrix(rng, 100);
    BitVector v(m.stride());
    for (auto& w : v) w = rng();
    v.back() &= (std::uint64_t{1} << 36) - 1;
    BitVector expect(m.stride(), 0);
    for (std::size_t r = 0; r < 100; ++r)
        if (get_bit(v, r)) m.xor_row_into(r, expect);
    EXPECT_EQ(vec_mul(v, m), expect);
}

TEST(BitMatrix, RankAndShifts) {
    EXPECT_EQ(rank(BitMatrix::identity(65)), 65u);
    EXPECT_EQ(rank(shift_matrix(64, 5)), 59u);
    EXPECT_TRUE(is_invertible(rotation_matrix(64, 13)));
    // x << 3 as a row vector product
    const BitMatrix s = shift_matrix(64, 3);
    BitVector v{0x8000'0000'0000'0123ULL};
    EXPECT_EQ(vec_mul(v, s)[0], 0x8000'0000'0000'0123ULL << 3);
    EXPECT_EQ(vec_mul(v, right_shift_matrix(64, 3))[0], 0x8000'0000'0000'0123ULL >> 3);
    EXPECT_EQ(vec_mul(v, rotation_matrix(64, 7))[0], std::rotl(0x8000'0000'0000'0123ULL, 7));
}

TEST(CharPoly, MatchesCofactorDeterminant) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 60; ++i) {
        const std::size_t n = 1 + rng() % 8;
        const BitMatrix m = random_matrix(rng, n);
        EXPECT_EQ(char_poly(m), char_poly_by_determinant(m)) << "n=" << n;
    }
}

TEST(CharPoly, DerogatoryMatrices) {
    EXPECT_EQ(char_poly(BitMatrix(5)), GF2Poly::monomial(5));
    GF2Poly xp1 = GF2Poly::from_exponents({1, 0}), expect = GF2Poly::one();
    for (int i = 0; i < 70; ++i) expect = naive_mul(expect, xp1);
    EXPECT_EQ(char_poly(BitMatrix::identity(70)), expect);
    // block diagonal with two equal companion blocks
    const GF2Poly p = GF2Poly::from_exponents({7, 1, 0});
    const BitMatrix c = companion(p);
    BitMatrix m(14);
    for (std::size_t r = 0; r < 7; ++r)
        for (std::size_t col = 0; col < 7; ++col) {
            m.set(r, col, c.get(r, col));
            m.set(r + 7, col + 7, c.get(r, col));
        }
    EXPECT_EQ(char_poly(m), naive_mul(p, p));
}

TEST(CharPoly, CompanionOfRandomPolynomial) {
    std::mt19937_64 rng(10);
    for (std::size_t n : {3u, 64u, 65u, 130u, 300u}) {
        const GF2Poly p = random_poly(rng, n);
        EXPECT_EQ(char_poly(companion(p)), p);
    }
}

TEST(Primitivity, AgreesWithBruteForceUpToDegree10) {
    for (std::size_t n = 1; n <= 10; ++n) {
        unsigned primitive = 0;
        for (std::uint64_t low = 0; low < (std::uint64_t{1} << n); ++low) {
            const GF2Poly p = GF2Poly::from_words({low | (std::uint64_t{1} << n)});
            const bool irr = irreducible_by_trial_division(p);
            EXPECT_EQ(is_irreducible(p), irr) << p.to_string();
            const bool prim = irr && order_of_x(p) == (std::uint64_t{1} << n) - 1;
            EXPECT_EQ(is_primitive(p), prim) << p.to_string();
            primitive += prim;
        }
        // phi(2^n - 1) / n
        const std::uint64_t m = (std::uint64_t{1} << n) - 1;
        std::uint64_t phi = m, r = m;
        for (std::uint64_t q = 2; q * q <= r; ++q)
            if (r % q == 0) {
                phi -= phi / q;
                while (r % q == 0) r /= q;
            }
        if (r > 1) phi -= phi / r;
        EXPECT_EQ(primitive, phi / n) << n;
    }
}

TEST(Primitivity, MersenneFactorTables) {
    for (unsigned n : {31u, 32u, 63u, 64u, 128u, 256u, 512u, 1024u}) {
        const auto f = mersenne_prime_factors(n);
        BigInt prod = 1, rest = mersenne(n);
        for (const auto& q : f) {
            EXPECT_TRUE(boost::multiprecision::miller_rabin_test(q, 25)) << q;
            while (rest % q == 0) rest /= q;
            prod *= q;
        }
        EXPECT_EQ(rest, 1) << n;
    }
    EXPECT_FALSE(mersenne_factorization_supported(100));
    EXPECT_THROW(mersenne_prime_factors(100), std::domain_error);
}

TEST(BigInt, Parsing) {
    EXPECT_EQ(parse_bigint("12345"), 12345);
    EXPECT_EQ(parse_bigint("0xff"), 255);
    EXPECT_EQ(parse_bigint("2^64"), pow2(64));
    EXPECT_EQ(parse_bigint("2^128-1"), mersenne(128));
    EXPECT_EQ(parse_bigint("2^10+3"), 1027);
}
