#pragma once

// Hamming-weight-dependency test.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xrng::hwd {

enum class Mode { standard, transitional };

inline const char* mode_name(Mode m) { return m == Mode::standard ? "standard" : "transitional"; }

inline constexpr unsigned max_k = 16;
inline constexpr unsigned count_bits = 13;
inline constexpr unsigned sum_bits = 19;
inline constexpr std::uint32_t count_unit = 1u << sum_bits;
inline constexpr std::uint32_t sum_mask = count_unit - 1;
// ceil(2^32 / 3)
inline constexpr std::uint64_t inv3_fixed = 1431655766;

inline std::uint64_t pow3(unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= 3;
    return r;
}

namespace detail {

inline unsigned __int128 binom(unsigned n, unsigned k) {
    unsigned __int128 r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline void check_width(unsigned w) {
    if (w != 16 && w != 32 && w != 64) throw std::invalid_argument("test width must be 16, 32 or 64");
}

}  // namespace detail

// Largest ell such that P(|nu(x) - w/2| <= ell) <= 1/2.
inline unsigned choose_ell(unsigned w) {
    if (w < 2 || w % 2 || w > 64) throw std::invalid_argument("choose_ell needs an even width <= 64");
    const unsigned __int128 total = static_cast<unsigned __int128>(1) << w;
    unsigned __int128 mass = detail::binom(w, w / 2);
    if (2 * mass > total) throw std::domain_error("no ell satisfies the bound");
    unsigned ell = 0;
    while (ell + 1 <= w / 2) {
        const unsigned __int128 next = mass + 2 * detail::binom(w, w / 2 - ell - 1);
        if (2 * next > total) break;
        mass = next;
        ++ell;
    }
    return ell;
}

// Probability of the central trit for uniformly random w-bit values.
inline double central_probability(unsigned w, unsigned ell) {
    long double s = 0;
    for (unsigned i = w / 2 - ell; i <= w / 2 + ell; ++i) s += static_cast<long double>(detail::binom(w, i));
    return static_cast<double>(s / std::ldexp(1.0L, static_cast<int>(w)));
}

inline unsigned trit_of_weight(unsigned weight, unsigned w, unsigned ell) {
    if (weight + ell < w / 2) return 0;
    if (weight <= w / 2 + ell) return 1;
    return 2;
}

inline unsigned trit_of(std::uint64_t x, unsigned w, unsigned ell) {
    const std::uint64_t m = w == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
    return trit_of_weight(static_cast<unsigned>(std::popcount(x & m)), w, ell);
}

inline constexpr std::uint64_t div3_fixed(std::uint64_t s) { return (inv3_fixed * s) >> 32; }

inline std::uint64_t signature_update(std::uint64_t s, unsigned t, unsigned k) {
    return div3_fixed(s) + t * pow3(k - 1);
}

// Base-3 digits of a signature, digit of 3^0 first. The newest trit sits at
// 3^(k-1), so the rightmost character refers to the most recent value.
inline std::string signature_string(std::uint64_t s, unsigned k) {
    std::string out(k, '0');
    for (unsigned i = 0; i < k; ++i, s /= 3) out[i] = static_cast<char>('0' + s % 3);
    return out;
}

inline unsigned nonzero_trits(std::uint64_t s) {
    unsigned n = 0;
    for (; s; s /= 3) n += s % 3 != 0;
    return n;
}

// In-place k-th Kronecker power of the 3x3 orthonormal base matrix; sig = 3^(k-1).
inline void transform(double* v, std::size_t sig) {
    static const double r3 = std::sqrt(3.0), r2 = std::sqrt(2.0), r6 = std::sqrt(6.0);
    double* const p1 = v + sig;
    double* const p2 = p1 + sig;
    for (std::size_t i = 0; i < sig; ++i) {
        const double a = v[i], b = p1[i], c = p2[i];
        v[i] = (a + b + c) / r3;
        p1[i] = (a - c) / r2;
        p2[i] = (2 * b - a - c) / r6;
    }
    if (sig /= 3) {
        transform(v, sig);
        transform(p1, sig);
        transform(p2, sig);
    }
}

inline void transform(std::span<double> v) {
    std::size_t n = v.size(), sig = 1;
    if (n < 3) throw std::invalid_argument("transform length must be a power of 3 (>= 3)");
    while (sig * 3 < n) sig *= 3;
    if (sig * 3 != n) throw std::invalid_argument("transform length must be a power of 3 (>= 3)");
    transform(v.data(), sig);
}

// ln erfc(x) for x >= 0, usable far below the double range.
inline double log_erfc(double x) {
    if (x < 26.0) return std::log(std::erfc(x));
    const double x2 = x * x, inv = 1.0 / (2.0 * x2);
    double term = 1.0, series = 1.0;
    for (int n = 1; n < 8; ++n) {
        term *= -(2.0 * n - 1.0) * inv;
        series += term;
    }
    return -x2 - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series);
}

// ln of the two-sided normal p-value erfc(|z| / sqrt 2).
inline double log_normal_pvalue(double z) { return log_erfc(std::abs(z) / std::numbers::sqrt2); }

// ln(1 - (1 - p)^c) from ln p.
inline double log_compensate(double log_p, double c) {
    if (c <= 1) return log_p;
    if (log_p >= 0) return 0;
    const double p = std::exp(log_p);
    if (c * p < 1e-10) return std::log(c) + log_p;
    return std::log(-std::expm1(c * std::log1p(-p)));
}

struct Evaluation {
    double log_p = 0;  // natural log
    std::uint64_t signature = 0;
    unsigned category = 0;

    double p_value() const { return std::exp(log_p); }
};

// Counter set for one run. Small cells pack (count << 19) + weight sum and are
// drained into 64-bit cells at each flush.
class Counters {
public:
    Counters(unsigned w, unsigned k, unsigned ell)
        : w_(w), k_(k), ell_(ell), cells_(0), pow3k1_(0) {
        detail::check_width(w);
        if (k < 1 || k > max_k) throw std::invalid_argument("k must be in [1, 16]");
        if (ell > w / 2) throw std::invalid_argument("ell must not exceed w/2");
        cells_ = pow3(k);
        pow3k1_ = pow3(k - 1);
        small_.assign(cells_, 0);
        large_count_.assign(cells_, 0);
        large_sum_.assign(cells_, 0);
        for (unsigned c = 0; c <= w; ++c) {
            step_add_[c] = trit_of_weight(c, w, ell) * pow3k1_;
            cell_add_[c] = count_unit + c;
        }
    }

    unsigned w() const { return w_; }
    unsigned k() const { return k_; }
    unsigned ell() const { return ell_; }
    std::uint64_t cells() const { return cells_; }
    std::uint64_t signature() const { return sig_; }
    std::uint64_t values_seen() const { return seen_; }
    std::uint64_t pending() const { return pending_; }
    bool overflowed() const { return overflow_; }
    std::span<const std::uint64_t> large_counts() const { return large_count_; }
    std::span<const std::uint64_t> large_sums() const { return large_sum_; }

    std::uint64_t total_count() const {
        std::uint64_t t = 0;
        for (auto c : large_count_) t += c;
        return t;
    }

    // Values must already be reduced to w bits.
    void accumulate(std::span<const std::uint64_t> values) {
        std::size_t i = 0;
        for (; i < values.size() && seen_ < k_; ++i, ++seen_)
            sig_ = div3_fixed(sig_) + step_add_[std::popcount(values[i])];
        const std::size_t start = i;
        std::uint64_t sig = sig_;
        std::uint32_t* const small = small_.data();
        const std::uint64_t* const step_add = step_add_.data();
        const std::uint32_t* const cell_add = cell_add_.data();
        for (; i < values.size(); ++i) {
            const unsigned c = static_cast<unsigned>(std::popcount(values[i]));
            small[sig] += cell_add[c];
            sig = div3_fixed(sig) + step_add[c];
        }
        pending_ += values.size() - start;
        seen_ += values.size() - start;
        sig_ = sig;
    }

    // Drains small cells; false on a counter overflow.
    bool flush() {
        std::uint64_t total = 0;
        for (std::uint64_t i = 0; i < cells_; ++i) {
            const std::uint32_t cell = small_[i];
            if (!cell) continue;
            const std::uint32_t n = cell >> sum_bits;
            total += n;
            large_count_[i] += n;
            large_sum_[i] += cell & sum_mask;
            small_[i] = 0;
        }
        if (total != pending_) overflow_ = true;
        pending_ = 0;
        return !overflow_;
    }

    // Normalize, transform, categorize and compensate.
    Evaluation evaluate(unsigned categories) const {
        if (categories < 1 || categories > k_) throw std::invalid_argument("category count must be in [1, k]");
        std::vector<double> v(cells_);
        const double mean = w_ / 2.0, var = w_ / 4.0;
        for (std::uint64_t i = 0; i < cells_; ++i) {
            const double n = static_cast<double>(large_count_[i]);
            v[i] = n == 0 ? 0.0 : (static_cast<double>(large_sum_[i]) - n * mean) / std::sqrt(n * var);
        }
        transform(v);
        std::vector<double> best(categories + 1, 0.0);
        std::vector<std::uint64_t> arg(categories + 1, 0);
        for (std::uint64_t i = 1; i < cells_; ++i) {
            const unsigned cat = std::min(nonzero_trits(i), categories);
            const double a = std::abs(v[i]);
            if (a > best[cat] || arg[cat] == 0) {
                best[cat] = a;
                arg[cat] = i;
            }
        }
        const auto sizes = category_sizes(k_, categories);
        Evaluation ev{0.0, 0, 0};
        bool first = true;
        for (unsigned c = 1; c <= categories; ++c) {
            if (!arg[c]) continue;
            const double lp = log_compensate(log_normal_pvalue(best[c]), static_cast<double>(sizes[c]));
            if (first || lp < ev.log_p) {
                ev = {lp, arg[c], c};
                first = false;
            }
        }
        ev.log_p = log_compensate(ev.log_p, categories);
        return ev;
    }

    // sizes[c] = number of nonzero indices in category c (index 0 unused).
    static std::vector<std::uint64_t> category_sizes(unsigned k, unsigned categories) {
        std::vector<std::uint64_t> sizes(categories + 1, 0);
        for (unsigned j = 1; j <= k; ++j)
            sizes[std::min(j, categories)] += static_cast<std::uint64_t>(detail::binom(k, j)) << j;
        return sizes;
    }

private:
    unsigned w_, k_, ell_;
    std::uint64_t cells_, pow3k1_;
    std::vector<std::uint32_t> small_;
    std::vector<std::uint64_t> large_count_, large_sum_;
    std::array<std::uint64_t, 65> step_add_{};
    std::array<std::uint32_t, 65> cell_add_{};
    std::uint64_t sig_ = 0, seen_ = 0, pending_ = 0;
    bool overflow_ = false;
};

// ---------------------------------------------------------------------------
// Batch sizing.

struct BatchSizeOptions {
    std::uint32_t overflow_bound = 1u << count_bits;
    std::uint64_t direct_steps = std::uint64_t{1} << 20;  // exact iteration up to here
    unsigned snapshots = 10;  // also keep distributions at direct_steps / 2^i
    double prune = 1e-150;
};

namespace detail {

// Passage-count distribution, lumped at b. Entries below prune are dropped.
struct CountDist {
    std::size_t lo = 0;
    std::vector<double> mass;  // mass[i] = P(c = lo + i)

    double overflow(std::size_t b) const {
        return lo + mass.size() == b + 1 && !mass.empty() ? mass.back() : 0.0;
    }
};

inline CountDist convolve(const CountDist& a, const CountDist& b, std::size_t bound, double prune) {
    const std::size_t lo = std::min(a.lo + b.lo, bound);
    const std::size_t hi = std::min(a.lo + a.mass.size() - 1 + b.lo + b.mass.size() - 1, bound);
    std::vector<double> out(hi - lo + 1, 0.0);
    for (std::size_t i = 0; i < a.mass.size(); ++i) {
        const double x = a.mass[i];
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.mass.size(); ++j)
            out[std::min(a.lo + i + b.lo + j, bound) - lo] += x * b.mass[j];
    }
    std::size_t first = 0, last = out.size();
    while (first + 1 < last && out[first] < prune) ++first;
    // the lumped overflow cell is kept whatever its size
    while (last - 1 > first && out[last - 1] < prune && lo + last - 1 != bound) --last;
    CountDist r;
    r.lo = lo + first;
    r.mass.assign(out.begin() + static_cast<std::ptrdiff_t>(first), out.begin() + static_cast<std::ptrdiff_t>(last));
    return r;
}

}  // namespace detail

// Largest T whose probability of more than 2^13 - 1 passages through the
// all-central signature stays within target. States x[c][s]: c passages so
// far (lumped at b), s = current run of central trits capped at k - 1. Up to
// direct_steps the chain is iterated exactly; beyond that, blocks are assumed
// to restart from the steady state and their count distributions are
// convolved (doubling, then binary descent over the stored blocks).
inline std::uint64_t batch_size(unsigned k, double p, double target, const BatchSizeOptions& opt = {}) {
    if (k < 1 || k > 19) throw std::invalid_argument("k must be in [1, 19]");
    if (!(p > 0 && p < 1)) throw std::invalid_argument("p must lie in (0, 1)");
    if (!(target > 0 && target < 1)) throw std::invalid_argument("target must lie in (0, 1)");
    if (opt.direct_steps == 0) throw std::invalid_argument("direct_steps must be positive");
    const std::size_t b = opt.overflow_bound, K = k;
    const double q = 1 - p;
    std::vector<double> x((b + 1) * K, 0.0);
    for (std::size_t s = 0; s + 1 < K; ++s) x[s] = q * std::pow(p, static_cast<double>(s));
    x[K - 1] = std::pow(p, static_cast<double>(K - 1));
    std::size_t clo = 0, chi = 0;
    auto row = [&](std::size_t c) { return x.data() + c * K; };
    auto row_mass = [&](std::size_t c) {
        double t = 0;
        for (std::size_t s = 0; s < K; ++s) t += row(c)[s];
        return t;
    };
    auto snapshot = [&] {
        detail::CountDist d;
        d.lo = clo;
        for (std::size_t c = clo; c <= chi; ++c) d.mass.push_back(row_mass(c));
        return d;
    };

    // blocks[i] covers block_steps[i] steps, largest first
    std::vector<detail::CountDist> small_blocks;
    std::vector<std::uint64_t> small_steps;
    for (std::uint64_t t = 1; t <= opt.direct_steps; ++t) {
        const std::size_t top = std::min(chi + 1, b);
        for (std::size_t c = top + 1; c-- > clo;) {
            double* r = row(c);
            const double below = c > clo ? row(c - 1)[K - 1] : 0.0;
            double tot = 0;
            for (std::size_t s = 0; s < K; ++s) tot += r[s];
            const double self_loop = c == b ? r[K - 1] : 0.0;
            if (K == 1) {
                r[0] = q * tot + p * (below + self_loop);
            } else {
                const double last = p * (r[K - 2] + below + self_loop);
                for (std::size_t s = K - 1; s-- > 1;) r[s] = p * r[s - 1];
                r[K - 1] = last;
                r[0] = q * tot;
            }
        }
        chi = top;
        while (chi > clo && chi != b && row_mass(chi) < opt.prune) {
            std::fill_n(row(chi), K, 0.0);
            --chi;
        }
        while (clo < chi && row_mass(clo) < opt.prune) {
            std::fill_n(row(clo), K, 0.0);
            ++clo;
        }
        if (chi == b && row_mass(b) > target) return t - 1;
        for (unsigned i = 1; i <= opt.snapshots; ++i)
            if ((opt.direct_steps >> i) == t && (opt.direct_steps >> i) << i == opt.direct_steps) {
                small_blocks.push_back(snapshot());
                small_steps.push_back(t);
            }
    }

    std::vector<detail::CountDist> powers{snapshot()};
    while (powers.back().overflow(b) <= target) {
        if (powers.size() > 40) throw std::domain_error("batch size exceeds 2^40 blocks");
        powers.push_back(detail::convolve(powers.back(), powers.back(), b, opt.prune));
    }
    // candidate blocks for the descent, largest first
    std::vector<const detail::CountDist*> blocks;
    std::vector<std::uint64_t> steps;
    for (std::size_t i = powers.size() - 1; i-- > 0;) {
        blocks.push_back(&powers[i]);
        steps.push_back(opt.direct_steps << i);
    }
    for (std::size_t i = small_blocks.size(); i-- > 0;) {
        blocks.push_back(&small_blocks[i]);
        steps.push_back(small_steps[i]);
    }
    // blocks[0] (if any) is the largest block that stays within target
    detail::CountDist acc = *blocks[0];
    std::uint64_t total = steps[0];
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        auto cand = detail::convolve(acc, *blocks[i], b, opt.prune);
        if (cand.overflow(b) <= target) {
            acc = std::move(cand);
            total += steps[i];
        }
    }
    return total;
}

// The chain follows the most probable trit; for w = 16 (ell = 0) that is a
// tail trit, not the central one.
inline std::uint64_t batch_size_for(unsigned w, unsigned k, const BatchSizeOptions& opt = {}) {
    const double pc = central_probability(w, choose_ell(w));
    return batch_size(k, std::max(pc, (1 - pc) / 2), 1e-100 / static_cast<double>(pow3(k)), opt);
}

namespace detail {

// batch_size_for(w, k) with default options, k = 1..16.
inline constexpr std::uint64_t batch_table_64[16] = {14748, 28322, 56622, 116271, 242788, 512044, 1085440, 2310144,
                                                      4925440, 10510336, 22434816, 47902720, 102294528, 218459136,
                                                      466555904, 996426752};
inline constexpr std::uint64_t batch_table_32[16] = {16906,      37855,      88687,      213364,    520784,    1280000,
                                                      3160064,    7815168,    19341312,   47884288,  118568960, 293613568,
                                                      727106560,  1800643584, 4459239424, 11043222528};
inline constexpr std::uint64_t batch_table_16[16] = {16967, 38148, 89750, 216821, 531391, 1311744, 3251200, 8070144,
                                                      20051968, 49838080, 123889664, 307994624, 765714432,
                                                      1903692800, 4732934144, 11767008256};

}  // namespace detail

inline std::uint64_t default_batch_size(unsigned w, unsigned k) {
    if (k >= 1 && k <= 16) {
        if (w == 64) return detail::batch_table_64[k - 1];
        if (w == 32) return detail::batch_table_32[k - 1];
        if (w == 16) return detail::batch_table_16[k - 1];
    }
    return batch_size_for(w, k);
}


// ---------------------------------------------------------------------------
// Streaming run.

// Writes up to out.size() words of the source width; 0 means exhausted.
using WordSource = std::function<std::size_t(std::span<std::uint64_t>)>;

struct Source {
    WordSource fill;
    unsigned width = 64;  // 32 or 64
};

struct Config {
    unsigned w = 64;
    unsigned k = 8;
    std::optional<unsigned> ell;         // default: choose_ell(w)
    std::optional<unsigned> categories;  // default: k/2 + 1
    std::optional<std::uint64_t> batch;  // default: default_batch_size(w, k)
    double p_threshold = 1e-20;
    double byte_limit = 1e12;
    Mode mode = Mode::standard;
    std::uint64_t first_checkpoint = 10'000'000;  // values; doubles afterwards
    std::size_t buffer_words = 1 << 14;
};

enum class Status { passed, failed, inconclusive };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::passed: return "passed";
        case Status::failed: return "failed";
        case Status::inconclusive: return "inconclusive";
    }
    return "";
}

struct Checkpoint {
    std::uint64_t values = 0;
    std::uint64_t bytes = 0;
    std::uint64_t counted = 0;  // sum of all large counts after the flush
    double log_p = 0;
    std::string signature;
    unsigned category = 0;

    double p_value() const { return std::exp(log_p); }
};

struct Report {
    Status status = Status::inconclusive;
    std::uint64_t values = 0;
    std::uint64_t bytes = 0;
    double log_p = 0;
    std::string signature;
    unsigned category = 0;
    bool overflow = false;
    unsigned w = 0, k = 0, ell = 0, categories = 0;
    std::uint64_t batch = 0;
    Mode mode = Mode::standard;
    std::vector<Checkpoint> history;

    double p_value() const { return std::exp(log_p); }
    double log10_p() const { return log_p / std::numbers::ln10; }
};

// Breaks source words into w-bit test values (low piece first) or joins
// consecutive 32-bit words (first word low) when w = 64; optionally applies
// the transitional map t = v ^ ((v << 1) | carry), carry = top bit of the
// previous value.
class ValueStream {
public:
    ValueStream(unsigned source_width, unsigned w, Mode mode) : sw_(source_width), w_(w), mode_(mode) {
        detail::check_width(w);
        if (sw_ != 32 && sw_ != 64) throw std::invalid_argument("source width must be 32 or 64");
        mask_ = w_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w_) - 1;
    }

    // Appends the values derived from `words` to out.
    void convert(std::span<const std::uint64_t> words, std::vector<std::uint64_t>& out) {
        const std::size_t start = out.size();
        if (sw_ == w_) {
            out.insert(out.end(), words.begin(), words.end());
        } else if (sw_ > w_) {
            const unsigned pieces = sw_ / w_;
            for (auto x : words)
                for (unsigned i = 0; i < pieces; ++i) out.push_back((x >> (i * w_)) & mask_);
        } else {
            for (auto x : words) {
                if (half_) {
                    out.push_back(low_ | (x << 32));
                    half_ = false;
                } else {
                    low_ = x & 0xffffffffu;
                    half_ = true;
                }
            }
        }
        if (mode_ == Mode::transitional) {
            for (std::size_t i = start; i < out.size(); ++i) {
                const std::uint64_t v = out[i];
                out[i] = (v ^ ((v << 1) | carry_)) & mask_;
                carry_ = (v >> (w_ - 1)) & 1;
            }
        }
    }

private:
    unsigned sw_, w_;
    Mode mode_;
    std::uint64_t mask_;
    std::uint64_t carry_ = 0, low_ = 0;
    bool half_ = false;
};

// Source over anything with fill(span<uint64_t>) and w(); g must outlive it.
template <class G>
Source make_source(G& g) {
    return {[&g](std::span<std::uint64_t> out) {
                g.fill(out);
                return out.size();
            },
            g.w()};
}

inline Report run(const Source& source, const Config& cfg) {
    detail::check_width(cfg.w);
    const unsigned ell = cfg.ell.value_or(choose_ell(cfg.w));
    const unsigned cats = cfg.categories.value_or(cfg.k / 2 + 1);
    if (cats < 1 || cats > cfg.k) throw std::invalid_argument("category count must be in [1, k]");
    const std::uint64_t batch = cfg.batch.value_or(default_batch_size(cfg.w, cfg.k));
    if (batch == 0) throw std::invalid_argument("batch size must be positive");
    if (!(cfg.byte_limit > 0)) throw std::invalid_argument("byte limit must be positive");
    if (cfg.first_checkpoint == 0) throw std::invalid_argument("first checkpoint must be positive");

    Counters ctr(cfg.w, cfg.k, ell);
    ValueStream stream(source.width, cfg.w, cfg.mode);
    const std::uint64_t bytes_per_value = cfg.w / 8;
    const auto limit = static_cast<std::uint64_t>(cfg.byte_limit / static_cast<double>(bytes_per_value));
    const double log_threshold = std::log(cfg.p_threshold);

    Report rep;
    rep.w = cfg.w;
    rep.k = cfg.k;
    rep.ell = ell;
    rep.categories = cats;
    rep.batch = batch;
    rep.mode = cfg.mode;

    std::vector<std::uint64_t> words(std::max<std::size_t>(cfg.buffer_words, 1));
    std::vector<std::uint64_t> values;
    std::uint64_t consumed = 0, next_cp = cfg.first_checkpoint;

    auto checkpoint = [&]() -> bool {
        if (!ctr.flush()) return false;
        const Evaluation ev = ctr.evaluate(cats);
        Checkpoint cp{consumed, consumed * bytes_per_value, ctr.total_count(), ev.log_p,
                      signature_string(ev.signature, cfg.k), ev.category};
        rep.history.push_back(cp);
        rep.log_p = cp.log_p;
        rep.signature = cp.signature;
        rep.category = cp.category;
        return true;
    };
    auto finish = [&](Status st) {
        rep.status = st;
        rep.values = consumed;
        rep.bytes = consumed * bytes_per_value;
        return rep;
    };
    auto overflowed = [&] {
        rep.overflow = true;
        rep.log_p = std::log(1e-100);
        rep.signature.clear();
        rep.category = 0;
        return finish(Status::failed);
    };

    while (consumed < limit) {
        values.clear();
        const std::size_t got = source.fill(words);
        if (got == 0) {
            if (!checkpoint()) return overflowed();
            return finish(rep.log_p < log_threshold ? Status::failed : Status::inconclusive);
        }
        stream.convert(std::span<const std::uint64_t>(words.data(), got), values);
        std::size_t pos = 0;
        while (pos < values.size() && consumed < limit) {
            std::uint64_t chunk = values.size() - pos;
            chunk = std::min(chunk, batch - ctr.pending());
            chunk = std::min(chunk, next_cp - consumed);
            chunk = std::min(chunk, limit - consumed);
            ctr.accumulate(std::span<const std::uint64_t>(values.data() + pos, chunk));
            pos += chunk;
            consumed += chunk;
            if (ctr.pending() >= batch && !ctr.flush()) return overflowed();
            if (consumed == next_cp || consumed == limit) {
                if (!checkpoint()) return overflowed();
                if (rep.log_p < log_threshold) return finish(Status::failed);
                if (consumed == next_cp) next_cp *= 2;
            }
        }
    }
    return finish(Status::passed);
}

}  // namespace xrng::hwd
