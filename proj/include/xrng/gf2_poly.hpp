#pragma once

// Polynomials over GF(2), packed 64 coefficients per word, coefficient i at
// bit (i % 64) of word (i / 64).

#include "xrng/bigint.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define XRNG_HAVE_X86_CLMUL 1
#endif

namespace xrng {

enum class Clmul { automatic, portable, hardware };

namespace detail {

struct Product128 {
    std::uint64_t lo;
    std::uint64_t hi;
};

inline Product128 clmul_portable(std::uint64_t a, std::uint64_t b) {
    std::uint64_t lo = 0, hi = 0;
    while (b) {
        const int i = std::countr_zero(b);
        b &= b - 1;
        lo ^= a << i;
        if (i) hi ^= a >> (64 - i);
    }
    return {lo, hi};
}

#ifdef XRNG_HAVE_X86_CLMUL
__attribute__((target("pclmul,sse4.1"))) inline Product128 clmul_hardware(std::uint64_t a,
                                                                        std::uint64_t b) {
    const __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
    const __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
    const __m128i r = _mm_clmulepi64_si128(va, vb, 0x00);
    return {static_cast<std::uint64_t>(_mm_cvtsi128_si64(r)),
            static_cast<std::uint64_t>(_mm_extract_epi64(r, 1))};
}

inline bool hardware_clmul_available() {
    static const bool ok = __builtin_cpu_supports("pclmul");
    return ok;
}
#else
inline Product128 clmul_hardware(std::uint64_t a, std::uint64_t b) { return clmul_portable(a, b); }
inline bool hardware_clmul_available() { return false; }
#endif

inline Product128 clmul(std::uint64_t a, std::uint64_t b, Clmul impl) {
    switch (impl) {
        case Clmul::portable:
            return clmul_portable(a, b);
        case Clmul::hardware:
            if (!hardware_clmul_available())
                throw std::runtime_error("carry-less multiply instruction not available");
            return clmul_hardware(a, b);
        case Clmul::automatic:
            break;
    }
    return hardware_clmul_available() ? clmul_hardware(a, b) : clmul_portable(a, b);
}

}  // namespace detail

class GF2Poly {
public:
    GF2Poly() = default;

    static GF2Poly one() { return monomial(0); }

    static GF2Poly monomial(std::size_t exponent) {
        GF2Poly p;
        p.set(exponent);
        return p;
    }

    static GF2Poly from_exponents(std::initializer_list<std::size_t> exps) {
        GF2Poly p;
        for (auto e : exps) p.flip(e);
        return p;
    }

    static GF2Poly from_words(std::vector<std::uint64_t> words) {
        GF2Poly p;
        p.words_ = std::move(words);
        p.trim();
        return p;
    }

    // Zero polynomial has no degree.
    std::optional<std::size_t> degree() const {
        if (words_.empty()) return std::nullopt;
        return (words_.size() - 1) * 64 + 63 - std::countl_zero(words_.back());
    }

    bool is_zero() const { return words_.empty(); }
    bool is_one() const { return words_.size() == 1 && words_[0] == 1; }

    bool coeff(std::size_t i) const {
        return i / 64 < words_.size() && ((words_[i / 64] >> (i % 64)) & 1);
    }

    void set(std::size_t i) {
        grow(i);
        words_[i / 64] |= std::uint64_t{1} << (i % 64);
    }

    void flip(std::size_t i) {
        grow(i);
        words_[i / 64] ^= std::uint64_t{1} << (i % 64);
        trim();
    }

    std::size_t weight() const {
        std::size_t n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    GF2Poly& operator^=(const GF2Poly& o) {
        if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
        for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] ^= o.words_[i];
        trim();
        return *this;
    }
    friend GF2Poly operator^(GF2Poly a, const GF2Poly& b) { return a ^= b; }
    friend GF2Poly operator+(GF2Poly a, const GF2Poly& b) { return a ^= b; }

    friend bool operator==(const GF2Poly&, const GF2Poly&) = default;

    // p(x) * x^s
    GF2Poly shifted(std::size_t s) const {
        if (is_zero()) return {};
        GF2Poly r;
        const std::size_t ws = s / 64, bs = s % 64;
        r.words_.assign(words_.size() + ws + 1, 0);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            r.words_[i + ws] ^= words_[i] << bs;
            if (bs) r.words_[i + ws + 1] ^= words_[i] >> (64 - bs);
        }
        r.trim();
        return r;
    }

    // x^n p(1/x) where n = degree(p).
    GF2Poly reciprocal() const {
        GF2Poly r;
        auto d = degree();
        if (!d) return r;
        for (std::size_t i = 0; i <= *d; ++i)
            if (coeff(i)) r.set(*d - i);
        return r;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = *degree() + 1; i-- > 0;) {
            if (!coeff(i)) continue;
            if (!s.empty()) s += "+";
            if (i == 0)
                s += "1";
            else if (i == 1)
                s += "x";
            else
                s += "x^" + std::to_string(i);
        }
        return s;
    }

    // Lowest coefficient first, as hex words most significant first.
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = words_.size(); i-- > 0;)
            for (int nib = 15; nib >= 0; --nib) s += digits[(words_[i] >> (4 * nib)) & 0xF];
        auto nz = s.find_first_not_of('0');
        return s.substr(nz);
    }

private:
    void grow(std::size_t i) {
        if (i / 64 >= words_.size()) words_.resize(i / 64 + 1, 0);
    }
    void trim() {
        while (!words_.empty() && words_.back() == 0) words_.pop_back();
    }

    friend GF2Poly mul(const GF2Poly&, const GF2Poly&, Clmul);
    friend std::pair<GF2Poly, GF2Poly> divmod(const GF2Poly&, const GF2Poly&);

    std::vector<std::uint64_t> words_;
};

inline GF2Poly mul(const GF2Poly& a, const GF2Poly& b, Clmul impl = Clmul::automatic) {
    if (a.is_zero() || b.is_zero()) return {};
    GF2Poly r;
    r.words_.assign(a.words_.size() + b.words_.size(), 0);
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
        if (!a.words_[i]) continue;
        for (std::size_t j = 0; j < b.words_.size(); ++j) {
            const auto p = detail::clmul(a.words_[i], b.words_[j], impl);
            r.words_[i + j] ^= p.lo;
            r.words_[i + j + 1] ^= p.hi;
        }
    }
    r.trim();
    return r;
}

inline GF2Poly operator*(const GF2Poly& a, const GF2Poly& b) { return mul(a, b); }

inline std::pair<GF2Poly, GF2Poly> divmod(const GF2Poly& a, const GF2Poly& m) {
    auto dm = m.degree();
    if (!dm) throw std::domain_error("polynomial division by zero");
    GF2Poly rem = a;
    GF2Poly quo;
    auto dr = rem.degree();
    if (!dr || *dr < *dm) return {quo, rem};
    quo.words_.assign((*dr - *dm) / 64 + 1, 0);

    auto& r = rem.words_;
    const auto& mw = m.words_;
    for (std::size_t pos = *dr + 1; pos-- > *dm;) {
        if (!((r[pos / 64] >> (pos % 64)) & 1)) continue;
        const std::size_t s = pos - *dm;
        quo.words_[s / 64] |= std::uint64_t{1} << (s % 64);
        const std::size_t ws = s / 64, bs = s % 64;
        for (std::size_t i = 0; i < mw.size(); ++i) {
            r[i + ws] ^= mw[i] << bs;
            if (bs && i + ws + 1 < r.size()) r[i + ws + 1] ^= mw[i] >> (64 - bs);
        }
    }
    rem.trim();
    quo.trim();
    return {quo, rem};
}

inline GF2Poly operator%(const GF2Poly& a, const GF2Poly& m) { return divmod(a, m).second; }
inline GF2Poly operator/(const GF2Poly& a, const GF2Poly& m) { return divmod(a, m).first; }

inline GF2Poly gcd(GF2Poly a, GF2Poly b) {
    while (!b.is_zero()) {
        a = a % b;
        std::swap(a, b);
    }
    return a;
}

inline GF2Poly lcm(const GF2Poly& a, const GF2Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return (a / gcd(a, b)) * b;
}

inline void require_modulus(const GF2Poly& m) {
    auto d = m.degree();
    if (!d || *d == 0) throw std::domain_error("modulus must have positive degree");
}

inline GF2Poly poly_mod_mul(const GF2Poly& a, const GF2Poly& b, const GF2Poly& m,
                            Clmul impl = Clmul::automatic) {
    require_modulus(m);
    return divmod(mul(a, b, impl), m).second;
}

inline GF2Poly poly_mod_pow(const GF2Poly& base, const BigInt& e, const GF2Poly& m,
                            Clmul impl = Clmul::automatic) {
    require_modulus(m);
    if (e < 0) throw std::domain_error("negative exponent");
    GF2Poly result = GF2Poly::one() % m;
    if (e == 0) return result;
    const GF2Poly b = base % m;
    const std::size_t top = boost::multiprecision::msb(e);
    for (std::size_t i = top + 1; i-- > 0;) {
        result = poly_mod_mul(result, result, m, impl);
        if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i)))
            result = poly_mod_mul(result, b, m, impl);
    }
    return result;
}

// x^(2^k) mod m by k squarings.
inline GF2Poly x_pow_pow2(std::size_t k, const GF2Poly& m, Clmul impl = Clmul::automatic) {
    require_modulus(m);
    GF2Poly r = GF2Poly::monomial(1) % m;
    for (std::size_t i = 0; i < k; ++i) r = poly_mod_mul(r, r, m, impl);
    return r;
}

}  // namespace xrng
