#pragma once

// Dense square matrices over GF(2), row-major with each row packed into
// 64-bit words. Vectors are rows: the product v*M is the xor of the rows of M
// selected by the one bits of v.

#include "xrng/bigint.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace xrng {

using BitVector = std::vector<std::uint64_t>;

inline std::size_t words_for_bits(std::size_t n) { return (n + 63) / 64; }

inline bool get_bit(std::span<const std::uint64_t> v, std::size_t i) {
    return (v[i / 64] >> (i % 64)) & 1;
}
inline void set_bit(std::span<std::uint64_t> v, std::size_t i, bool b) {
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    if (b)
        v[i / 64] |= m;
    else
        v[i / 64] &= ~m;
}
inline void flip_bit(std::span<std::uint64_t> v, std::size_t i) {
    v[i / 64] ^= std::uint64_t{1} << (i % 64);
}

class BitMatrix {
public:
    BitMatrix() = default;

    explicit BitMatrix(std::size_t n) : n_(n), stride_(words_for_bits(n)), bits_(n * stride_, 0) {
        if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
    }

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t size() const { return n_; }
    std::size_t stride() const { return stride_; }

    bool get(std::size_t r, std::size_t c) const { return get_bit(row(r), c); }
    void set(std::size_t r, std::size_t c, bool b) { set_bit(row(r), c, b); }
    void flip(std::size_t r, std::size_t c) { flip_bit(row(r), c); }

    std::span<std::uint64_t> row(std::size_t r) { return {bits_.data() + r * stride_, stride_}; }
    std::span<const std::uint64_t> row(std::size_t r) const {
        return {bits_.data() + r * stride_, stride_};
    }

    void xor_row_into(std::size_t src, std::span<std::uint64_t> dst) const {
        const std::uint64_t* s = bits_.data() + src * stride_;
        for (std::size_t i = 0; i < stride_; ++i) dst[i] ^= s[i];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        auto ra = row(a), rb = row(b);
        for (std::size_t i = 0; i < stride_; ++i) std::swap(ra[i], rb[i]);
    }

    bool is_zero() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

    BitMatrix& operator^=(const BitMatrix& o) {
        if (o.n_ != n_) throw std::invalid_argument("matrix dimension mismatch");
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= o.bits_[i];
        return *this;
    }

    // Places `block` (w x w) with its top-left corner at (r0, c0), xoring it in.
    void xor_block(std::size_t r0, std::size_t c0, const BitMatrix& block) {
        for (std::size_t r = 0; r < block.size(); ++r)
            for (std::size_t c = 0; c < block.size(); ++c)
                if (block.get(r, c)) flip(r0 + r, c0 + c);
    }

    BitMatrix transposed() const {
        BitMatrix t(n_);
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < n_; ++c)
                if (get(r, c)) t.set(c, r, true);
        return t;
    }

private:
    std::size_t n_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> bits_;
};

inline BitVector vec_mul(std::span<const std::uint64_t> v, const BitMatrix& m) {
    BitVector out(m.stride(), 0);
    for (std::size_t w = 0; w < m.stride(); ++w) {
        std::uint64_t bits = v[w];
        while (bits) {
            const std::size_t i = w * 64 + std::countr_zero(bits);
            bits &= bits - 1;
            m.xor_row_into(i, out);
        }
    }
    return out;
}

inline BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("matrix dimension mismatch");
    BitMatrix r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto out = r.row(i);
        auto in = a.row(i);
        for (std::size_t w = 0; w < a.stride(); ++w) {
            std::uint64_t bits = in[w];
            while (bits) {
                const std::size_t j = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                b.xor_row_into(j, out);
            }
        }
    }
    return r;
}

inline BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) { return mat_mul(a, b); }

inline BitMatrix mat_pow(const BitMatrix& m, const BigInt& e) {
    if (e < 0) throw std::domain_error("negative exponent");
    BitMatrix result = BitMatrix::identity(m.size());
    if (e == 0) return result;
    const std::size_t top = boost::multiprecision::msb(e);
    for (std::size_t i = top + 1; i-- > 0;) {
        result = mat_mul(result, result);
        if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i))) result = mat_mul(result, m);
    }
    return result;
}

inline std::size_t rank(BitMatrix m) {
    const std::size_t n = m.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < n; ++c) {
        std::size_t p = r;
        while (p < n && !m.get(p, c)) ++p;
        if (p == n) continue;
        m.swap_rows(p, r);
        for (std::size_t i = 0; i < n; ++i)
            if (i != r && m.get(i, c)) {
                auto src = m.row(r);
                auto dst = m.row(i);
                for (std::size_t w = 0; w < m.stride(); ++w) dst[w] ^= src[w];
            }
        ++r;
    }
    return r;
}

inline bool is_invertible(const BitMatrix& m) { return rank(m) == m.size(); }

// Left shift / left rotation of a w-bit row vector by one position.
inline BitMatrix shift_matrix(std::size_t w, std::size_t amount = 1) {
    BitMatrix s(w);
    for (std::size_t i = 0; i + amount < w; ++i) s.set(i, i + amount, true);
    return s;
}

inline BitMatrix rotation_matrix(std::size_t w, std::size_t amount = 1) {
    BitMatrix r(w);
    for (std::size_t i = 0; i < w; ++i) r.set(i, (i + amount) % w, true);
    return r;
}

// Right shift, used by the xorshift engines.
inline BitMatrix right_shift_matrix(std::size_t w, std::size_t amount) {
    BitMatrix s(w);
    for (std::size_t i = amount; i < w; ++i) s.set(i, i - amount, true);
    return s;
}

}  // namespace xrng
