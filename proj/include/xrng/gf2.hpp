#pragma once

// Characteristic polynomials, primitivity and linear complexity over GF(2).

#include "xrng/bigint.hpp"
#include "xrng/gf2_matrix.hpp"
#include "xrng/gf2_poly.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace xrng {

struct LinearComplexityResult {
    std::size_t complexity = 0;
    // 1 + c_1 x + ... + c_L x^L with s_n = sum c_i s_{n-i}.
    GF2Poly connection_poly = GF2Poly::one();
};

namespace detail {

inline std::uint64_t window64(const std::vector<std::uint64_t>& v, std::size_t pos) {
    const std::size_t w = pos / 64, b = pos % 64;
    std::uint64_t lo = w < v.size() ? v[w] >> b : 0;
    if (b && w + 1 < v.size()) lo |= v[w + 1] << (64 - b);
    return lo;
}

inline void xor_shifted(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src,
                        std::size_t shift) {
    const std::size_t ws = shift / 64, bs = shift % 64;
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (!src[i]) continue;
        if (i + ws < dst.size()) dst[i + ws] ^= src[i] << bs;
        if (bs && i + ws + 1 < dst.size()) dst[i + ws + 1] ^= src[i] >> (64 - bs);
    }
}

}  // namespace detail

// Shortest LFSR generating `bits` (each element 0 or 1).
inline LinearComplexityResult berlekamp_massey(std::span<const std::uint8_t> bits) {
    const std::size_t n_bits = bits.size();
    const std::size_t words = words_for_bits(n_bits + 1) + 1;

    // Reversed sequence: rev bit j = s[N-1-j], so s_{n-i} sits at N-1-n+i.
    std::vector<std::uint64_t> rev(words_for_bits(n_bits) + 1, 0);
    for (std::size_t i = 0; i < n_bits; ++i)
        if (bits[i]) rev[(n_bits - 1 - i) / 64] |= std::uint64_t{1} << ((n_bits - 1 - i) % 64);

    std::vector<std::uint64_t> c(words, 0), b(words, 0), t;
    c[0] = b[0] = 1;
    std::size_t len = 0, m = 1;
    for (std::size_t n = 0; n < n_bits; ++n) {
        const std::size_t off = n_bits - 1 - n;
        std::uint64_t acc = 0;
        const std::size_t cw = words_for_bits(len + 1);
        for (std::size_t i = 0; i < cw; ++i) acc ^= c[i] & detail::window64(rev, off + 64 * i);
        // Bits of the window past s_0 read as zero, so no mask is needed.
        if (!(std::popcount(acc) & 1)) {
            ++m;
        } else if (2 * len <= n) {
            t = c;
            detail::xor_shifted(c, b, m);
            len = n + 1 - len;
            b = std::move(t);
            m = 1;
        } else {
            detail::xor_shifted(c, b, m);
            ++m;
        }
    }
    LinearComplexityResult r;
    r.complexity = len;
    c.resize(words_for_bits(len + 1));
    if (len % 64 != 63 && !c.empty()) c.back() &= (std::uint64_t{1} << ((len % 64) + 1)) - 1;
    r.connection_poly = GF2Poly::from_words(std::move(c));
    return r;
}

// Minimal polynomial x^L C(1/x) of the sequence described by a BM result.
inline GF2Poly minimal_polynomial(const LinearComplexityResult& r) {
    GF2Poly p;
    for (std::size_t i = 0; i <= r.complexity; ++i)
        if (r.connection_poly.coeff(i)) p.set(r.complexity - i);
    return p;
}

// P(M) by Horner's rule.
inline BitMatrix evaluate_at(const GF2Poly& p, const BitMatrix& m) {
    BitMatrix acc(m.size());
    auto d = p.degree();
    if (!d) return acc;
    for (std::size_t i = *d + 1; i-- > 0;) {
        acc = mat_mul(acc, m);
        if (p.coeff(i))
            for (std::size_t r = 0; r < m.size(); ++r) acc.flip(r, r);
    }
    return acc;
}

namespace detail {

// Similarity reduction to upper Hessenberg form followed by the standard
// determinant recurrence. Handles derogatory matrices, where the sequence
// method cannot reach full degree.
inline GF2Poly char_poly_hessenberg(BitMatrix a) {
    const std::size_t n = a.size();
    auto add_column = [&](std::size_t src, std::size_t dst) {
        for (std::size_t r = 0; r < n; ++r)
            if (a.get(r, src)) a.flip(r, dst);
    };
    auto swap_columns = [&](std::size_t x, std::size_t y) {
        for (std::size_t r = 0; r < n; ++r) {
            const bool bx = a.get(r, x), by = a.get(r, y);
            a.set(r, x, by);
            a.set(r, y, bx);
        }
    };
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t p = j + 1;
        while (p < n && !a.get(p, j)) ++p;
        if (p == n) continue;
        if (p != j + 1) {
            a.swap_rows(p, j + 1);
            swap_columns(p, j + 1);
        }
        for (std::size_t i = j + 2; i < n; ++i) {
            if (!a.get(i, j)) continue;
            auto src = a.row(j + 1);
            auto dst = a.row(i);
            for (std::size_t w = 0; w < a.stride(); ++w) dst[w] ^= src[w];
            add_column(i, j + 1);
        }
    }
    // p_m = (x + h_{m-1,m-1}) p_{m-1} + sum_i h_{m-1-i,m-1} prod(subdiag) p_{m-1-i}
    std::vector<GF2Poly> p(n + 1);
    p[0] = GF2Poly::one();
    for (std::size_t m = 1; m <= n; ++m) {
        GF2Poly next = p[m - 1].shifted(1);
        if (a.get(m - 1, m - 1)) next ^= p[m - 1];
        for (std::size_t i = 1; i < m; ++i) {
            if (!a.get(m - i, m - i - 1)) break;  // subdiagonal product vanished
            if (a.get(m - 1 - i, m - 1)) next ^= p[m - 1 - i];
        }
        p[m] = std::move(next);
    }
    return p[n];
}

}  // namespace detail

// det(M - xI). The result is checked against Cayley-Hamilton before being
// returned; a failure there means a bug, not bad input.
inline GF2Poly char_poly(const BitMatrix& m, bool verify = true) {
    const std::size_t n = m.size();
    std::mt19937_64 rng(0x5eed'c0ffeeULL + n);
    GF2Poly acc = GF2Poly::one();
    std::vector<std::uint8_t> seq(2 * n);
    for (int attempt = 0; attempt < 8 && acc.degree().value_or(0) < n; ++attempt) {
        BitVector u(m.stride()), v(m.stride());
        for (auto& w : u) w = rng();
        for (auto& w : v) w = rng();
        if (n % 64) {
            u.back() &= (std::uint64_t{1} << (n % 64)) - 1;
            v.back() &= (std::uint64_t{1} << (n % 64)) - 1;
        }
        for (std::size_t i = 0; i < 2 * n; ++i) {
            std::uint64_t dot = 0;
            for (std::size_t w = 0; w < u.size(); ++w) dot ^= u[w] & v[w];
            seq[i] = std::popcount(dot) & 1;
            u = vec_mul(u, m);
        }
        acc = lcm(acc, minimal_polynomial(berlekamp_massey(seq)));
    }
    GF2Poly p = acc.degree().value_or(0) == n ? acc : detail::char_poly_hessenberg(m);
    if (verify && !evaluate_at(p, m).is_zero())
        throw std::logic_error("characteristic polynomial failed Cayley-Hamilton check");
    return p;
}

inline std::size_t poly_weight(const GF2Poly& p) { return p.weight(); }

// ---------------------------------------------------------------------------
// Factorization of 2^n - 1.

namespace detail {

using u128 = unsigned __int128;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (n % p == 0) return n == p;
    std::uint64_t d = n - 1;
    int s = 0;
    while (!(d & 1)) d >>= 1, ++s;
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s && composite; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

inline std::uint64_t pollard_rho(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

inline void factor_u64(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    for (std::uint64_t p = 2; p < 1000; ++p)
        if (n % p == 0) {
            factor_u64(p, out);
            factor_u64(n / p, out);
            return;
        }
    const std::uint64_t d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

// Prime factors of the Fermat numbers F_0..F_9; 2^(2^k) - 1 = F_0 ... F_{k-1}.
inline const std::vector<std::vector<const char*>>& fermat_factors() {
    static const std::vector<std::vector<const char*>> table = {
        {"3"},
        {"5"},
        {"17"},
        {"257"},
        {"65537"},
        {"641", "6700417"},
        {"274177", "67280421310721"},
        {"59649589127497217", "5704689200685129054721"},
        {"1238926361552897",
         "93461639715357977769163558199606896584051237541638188580280321"},
        {"2424833", "7455602825647884208337395736200454918783366342657",
         "741640062627530801524787141901937474059940781097519023905821316144415759504705008"
         "092818711693940737"},
    };
    return table;
}

}  // namespace detail

inline bool mersenne_factorization_supported(std::size_t n) {
    return (n >= 1 && n <= 64) || n == 128 || n == 256 || n == 512 || n == 1024;
}

// Distinct prime factors of 2^n - 1.
inline std::vector<BigInt> mersenne_prime_factors(std::size_t n) {
    if (!mersenne_factorization_supported(n))
        throw std::domain_error("no factorization of 2^" + std::to_string(n) + "-1 available");
    std::vector<BigInt> out;
    if (n <= 64) {
        std::vector<std::uint64_t> f;
        detail::factor_u64(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1, f);
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
        for (auto p : f) out.emplace_back(p);
        return out;
    }
    const std::size_t k = std::countr_zero(n);
    for (std::size_t i = 0; i < k; ++i)
        for (const char* s : detail::fermat_factors()[i]) out.emplace_back(s);
    return out;
}

// Rabin's test.
inline bool is_irreducible(const GF2Poly& p) {
    auto d = p.degree();
    if (!d || *d == 0) return false;
    const std::size_t n = *d;
    if (n == 1) return true;
    const GF2Poly x = GF2Poly::monomial(1);
    if (x_pow_pow2(n, p) != x % p) return false;
    std::vector<std::uint64_t> primes;
    detail::factor_u64(n, primes);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (auto q : primes) {
        GF2Poly h = x_pow_pow2(n / q, p) ^ (x % p);
        if (!gcd(p, h).is_one()) return false;
    }
    return true;
}

// True iff x has multiplicative order 2^n - 1 modulo p (which forces p to be
// irreducible).
inline bool is_primitive(const GF2Poly& p) {
    auto d = p.degree();
    if (!d || *d == 0) return false;
    const std::size_t n = *d;
    const BigInt order = mersenne(static_cast<unsigned>(n));
    const auto factors = mersenne_prime_factors(n);
    const GF2Poly x = GF2Poly::monomial(1);
    if (!poly_mod_pow(x, order, p).is_one()) return false;
    for (const auto& q : factors)
        if (poly_mod_pow(x, order / q, p).is_one()) return false;
    return true;
}

}  // namespace xrng
