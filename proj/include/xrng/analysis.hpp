#pragma once

// Small-scale structural analysis: orbits, equidistribution, escape from
// zeroland, linear complexity and algebraic normal forms.

#include "xrng/bigint.hpp"
#include "xrng/engines.hpp"
#include "xrng/generators.hpp"
#include "xrng/gf2.hpp"
#include "xrng/scramblers.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace xrng::analysis {

// Generator built from arbitrary (possibly toy) parameters.
inline GeneratorSpec custom_spec(std::string name, EngineKind kind, EngineParams params, ScramblerSpec sc = {}) {
    Engine e = Engine::unchecked(kind, params);
    validate_scrambler(sc, kind.w, kind.k);
    return {std::move(name), e, sc};
}

// Least t > 0 with step^t(s) = s, s = logical state (1, 0, ..., 0).
inline std::optional<std::uint64_t> orbit_period(const Engine& e, std::uint64_t max_steps) {
    std::vector<std::uint64_t> start(e.k(), 0);
    start[0] = 1;
    const EngineState s0 = e.state_from_logical(start);
    EngineState s = s0;
    for (std::uint64_t t = 1; t <= max_steps; ++t) {
        e.step(s);
        if (e.logical(s) == start) return t;
    }
    return std::nullopt;
}

struct EquidistributionResult {
    unsigned d = 0;
    bool equidistributed = false;
    std::uint64_t expected = 0;          // 2^(w(k-d)); the zero tuple expects one less
    std::vector<std::uint64_t> counts;   // indexed by o_0 + o_1 2^w + ...
};

// Histogram of the d-tuples of consecutive outputs starting from every
// nonzero state.
inline EquidistributionResult equidistribution_bruteforce(const GeneratorSpec& spec, unsigned d) {
    const unsigned w = spec.w(), k = spec.engine.k(), n = w * k;
    if (n > 20) throw std::invalid_argument("state space too large for exhaustive enumeration (w*k > 20)");
    if (d == 0 || w * d > 24) throw std::invalid_argument("dimension out of range");
    EquidistributionResult r;
    r.d = d;
    r.counts.assign(std::size_t{1} << (w * d), 0);
    r.expected = d <= k ? std::uint64_t{1} << (w * (k - d)) : 0;
    std::vector<std::uint64_t> logical(k);
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); ++x) {
        for (unsigned j = 0; j < k; ++j) logical[j] = (x >> (j * w)) & word_mask(w);
        Generator g(spec, spec.engine.state_from_logical(logical));
        std::uint64_t idx = 0;
        for (unsigned i = 0; i < d; ++i) idx |= g.next() << (i * w);
        ++r.counts[idx];
    }
    if (d > k) return r;
    r.equidistributed = r.counts[0] + 1 == r.expected;
    for (std::size_t i = 1; i < r.counts.size() && r.equidistributed; ++i)
        r.equidistributed = r.counts[i] == r.expected;
    return r;
}

// Word j is k-dimensionally equidistributed iff the map s -> (word j of s M^t)
// for t < k is invertible.
inline bool max_equidistribution_rank(const Engine& e, unsigned j) {
    const unsigned w = e.w(), k = e.k(), n = w * k;
    if (j >= k) throw std::invalid_argument("word index out of range");
    const BitMatrix m = e.matrix();
    BitMatrix p = BitMatrix::identity(n), a(n);
    for (unsigned t = 0; t < k; ++t) {
        for (unsigned r = 0; r < n; ++r)
            for (unsigned c = 0; c < w; ++c)
                if (p.get(r, j * w + c)) a.set(r, t * w + c, true);
        if (t + 1 < k) p = mat_mul(p, m);
    }
    return is_invertible(a);
}

struct EscapeOptions {
    unsigned values = 1000;
    unsigned window = 4;
    unsigned skip = 1;  // outputs discarded after seeding
};

struct EscapeResult {
    double mean = 0;
    double stddev = 0;
    std::vector<double> curve;  // seed-averaged ratio per window position
};

// Ratio of ones in a sliding window of consecutive outputs, averaged over all
// seeds with a single bit set; mean and (population) standard deviation of
// the resulting curve.
inline EscapeResult escape_zeroland(const GeneratorSpec& spec, const EscapeOptions& opt = {}) {
    const unsigned w = spec.w(), k = spec.engine.k(), n = w * k;
    if (opt.window == 0 || opt.values < opt.window) throw std::invalid_argument("window larger than sample");
    const std::size_t positions = opt.values - opt.window + 1;
    EscapeResult r;
    r.curve.assign(positions, 0.0);
    std::vector<std::uint64_t> out(opt.values);
    std::vector<std::uint64_t> seed(k);
    for (unsigned bit = 0; bit < n; ++bit) {
        std::fill(seed.begin(), seed.end(), 0);
        seed[bit / w] = std::uint64_t{1} << (bit % w);
        Generator g(spec, spec.engine.state_from_logical(seed));
        for (unsigned i = 0; i < opt.skip; ++i) g.next();
        g.fill(out);
        unsigned ones = 0;
        for (unsigned i = 0; i < opt.window; ++i) ones += std::popcount(out[i]);
        for (std::size_t i = 0;; ++i) {
            r.curve[i] += ones;
            if (i + 1 == positions) break;
            ones += std::popcount(out[i + opt.window]);
            ones -= std::popcount(out[i]);
        }
    }
    const double scale = 1.0 / (static_cast<double>(n) * opt.window * w);
    for (auto& c : r.curve) {
        c *= scale;
        r.mean += c;
    }
    r.mean /= static_cast<double>(positions);
    double var = 0;
    for (double c : r.curve) var += (c - r.mean) * (c - r.mean);
    r.stddev = std::sqrt(var / static_cast<double>(positions));
    return r;
}

// U(n, d) = sum_{j=1}^{d} C(n, j).
inline BigInt lin_complexity_bound(unsigned n, unsigned d) {
    if (d > n) throw std::invalid_argument("degree exceeds variable count");
    BigInt sum = 0, c = 1;
    for (unsigned j = 1; j <= d; ++j) {
        c = c * (n - j + 1) / j;
        sum += c;
    }
    return sum;
}

// Berlekamp-Massey on bit `bit` of the next `length` outputs of g.
inline LinearComplexityResult measure_bit_complexity(Generator g, unsigned bit, std::size_t length) {
    if (bit >= g.w()) throw std::invalid_argument("bit index out of range");
    std::vector<std::uint8_t> seq(length);
    for (auto& b : seq) b = static_cast<std::uint8_t>((g.next() >> bit) & 1);
    return berlekamp_massey(seq);
}

// Squarefree monomials as variable bitmasks (bit i = variable i).
struct AnfFunction {
    unsigned vars = 0;
    std::vector<std::uint32_t> monomials;

    std::size_t size() const { return monomials.size(); }

    unsigned degree() const {
        unsigned d = 0;
        for (auto m : monomials) d = std::max(d, static_cast<unsigned>(std::popcount(m)));
        return d;
    }

    bool contains(std::uint32_t mono) const {
        return std::find(monomials.begin(), monomials.end(), mono) != monomials.end();
    }

    bool evaluate(std::uint32_t x) const {
        bool v = false;
        for (auto m : monomials) v ^= (x & m) == m;
        return v;
    }
};

// Moebius transform of a truth table of length 2^m (entry x = f(x)).
inline AnfFunction anf_from_truth_table(std::span<const std::uint8_t> table) {
    const std::size_t len = table.size();
    if (len == 0 || (len & (len - 1))) throw std::invalid_argument("truth table length must be a power of two");
    const unsigned m = static_cast<unsigned>(std::countr_zero(len));
    if (m > 24) throw std::invalid_argument("at most 24 variables");
    std::vector<std::uint8_t> a(table.begin(), table.end());
    for (auto& v : a) v &= 1;
    for (std::size_t h = 1; h < len; h <<= 1)
        for (std::size_t i = 0; i < len; ++i)
            if (i & h) a[i] ^= a[i ^ h];
    AnfFunction f{m, {}};
    for (std::size_t i = 0; i < len; ++i)
        if (a[i]) f.monomials.push_back(static_cast<std::uint32_t>(i));
    return f;
}

// ANF of bit b of 3x over x_0..x_b.
inline AnfFunction anf_3x(unsigned b) {
    if (b > 22) throw std::invalid_argument("b must be at most 22");
    const std::size_t len = std::size_t{1} << (b + 1);
    std::vector<std::uint8_t> t(len);
    for (std::size_t x = 0; x < len; ++x) t[x] = static_cast<std::uint8_t>(((3 * x) >> b) & 1);
    return anf_from_truth_table(t);
}

inline std::size_t count_monomials_3x(unsigned b) { return anf_3x(b).size(); }

// (2 + [b odd]) 2^floor(b/2) - 1
inline std::uint64_t monomials_3x_closed_form(unsigned b) {
    return (2 + (b & 1)) * (std::uint64_t{1} << (b / 2)) - 1;
}

// ANF of bit b of x + y over x_0..x_b (variables 0..b) and y_0..y_b
// (variables b+1..2b+1).
inline AnfFunction anf_plus(unsigned b) {
    if (2 * (b + 1) > 24) throw std::invalid_argument("b must be at most 11");
    const unsigned m = b + 1;
    const std::size_t len = std::size_t{1} << (2 * m);
    std::vector<std::uint8_t> t(len);
    const std::size_t half = std::size_t{1} << m;
    for (std::size_t z = 0; z < len; ++z) {
        const std::size_t x = z & (half - 1), y = z >> m;
        t[z] = static_cast<std::uint8_t>(((x + y) >> b) & 1);
    }
    return anf_from_truth_table(t);
}

struct PlusCensus {
    std::size_t count = 0;
    unsigned degree = 0;
    bool full_degree_absent = true;
};

inline PlusCensus plus_scrambler_monomial_census(unsigned b) {
    const AnfFunction f = anf_plus(b);
    const std::uint32_t full = (std::uint32_t{1} << (2 * (b + 1))) - 1;
    return {f.size(), f.degree(), !f.contains(full)};
}

}  // namespace xrng::analysis
