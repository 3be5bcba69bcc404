// Command-line front end: generation, HWD testing, jumps and analysis.

#include "xrng/xrng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using namespace xrng;

enum Exit { ok = 0, io_error = 1, usage = 2, stat_fail = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t parse_u64(const std::string& s) {
    try {
        std::size_t pos = 0;
        std::uint64_t v;
        if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
            v = std::stoull(s.substr(2), &pos, 16), pos += 2;
        else
            v = std::stoull(s, &pos, 10);
        if (pos != s.size() || s.front() == '-') throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("not a 64-bit integer: " + s);
    }
}

// Integer counts may be written as 1e9.
std::uint64_t parse_count(const std::string& s) {
    if (s.find_first_of("eE.") != std::string::npos && s.find("0x") == std::string::npos) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(s, &pos);
            if (pos != s.size() || d < 0 || d > 1.8e19) throw std::invalid_argument(s);
            return static_cast<std::uint64_t>(d);
        } catch (const std::exception&) {
            throw UsageError("not a count: " + s);
        }
    }
    return parse_u64(s);
}

std::string hex_word(std::uint64_t x, unsigned w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*llx", static_cast<int>(w / 4), static_cast<unsigned long long>(x));
    return buf;
}

std::vector<std::uint64_t> parse_state(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok.rfind("0x", 0) != 0 && tok.rfind("0X", 0) != 0) tok = "0x" + tok;
        out.push_back(parse_u64(tok));
    }
    return out;
}

const GeneratorSpec& lookup(const std::string& name) {
    try {
        return find_generator(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// --seed / --state handling shared by several subcommands.
struct SeedOpts {
    std::string seed = "0";
    std::string state;

    void add(CLI::App* app) {
        app->add_option("--seed", seed, "64-bit seed (decimal or 0x-hex), expanded with SplitMix64");
        app->add_option("--state", state, "full physical state as comma-separated hex words (overrides --seed)");
    }

    Generator make(const GeneratorSpec& spec) const {
        if (!state.empty()) {
            try {
                return Generator(spec, parse_state(state));
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("bad --state: ") + e.what());
            }
        }
        return seed_from_u64(spec, parse_u64(seed));
    }
};

// Engine/scrambler given by parameters rather than by name.
struct CustomOpts {
    std::string algo;
    std::string family = "xoroshiro";
    unsigned w = 0, k = 2, a = 0, b = 0, c = 0;
    std::string scrambler = "none";
    unsigned i = 0, j = 0, R = 0;
    std::string S = "1", T = "1";

    void add(CLI::App* app, bool with_scrambler) {
        app->add_option("--algo", algo, "named generator");
        app->add_option("--family", family, "xoroshiro | xoshiro | xorshift")->check(CLI::IsMember({"xoroshiro", "xoshiro", "xorshift"}));
        app->add_option("--w", w, "word size");
        app->add_option("--k", k, "state words");
        app->add_option("--a", a);
        app->add_option("--b", b);
        app->add_option("--c", c);
        if (with_scrambler) {
            app->add_option("--scrambler", scrambler, "none | plus | star | plusplus | starstar")
                ->check(CLI::IsMember({"none", "plus", "star", "plusplus", "starstar"}));
            app->add_option("--i", i, "first scrambled word (logical index)");
            app->add_option("--j", j, "second scrambled word (logical index)");
            app->add_option("--S", S, "first multiplier");
            app->add_option("--R", R, "rotation");
            app->add_option("--T", T, "second multiplier");
        }
    }

    GeneratorSpec spec() const {
        if (!algo.empty()) return lookup(algo);
        if (w == 0) throw UsageError("give --algo or a custom engine (--family --w --k --a --b [--c])");
        const EngineFamily f = family == "xoshiro"    ? EngineFamily::xoshiro
                               : family == "xorshift" ? EngineFamily::xorshift
                                                      : EngineFamily::xoroshiro;
        const ScramblerKind sk = scrambler == "plus"       ? ScramblerKind::plus
                                 : scrambler == "star"     ? ScramblerKind::star
                                 : scrambler == "plusplus" ? ScramblerKind::plusplus
                                 : scrambler == "starstar" ? ScramblerKind::starstar
                                                           : ScramblerKind::none;
        try {
            return analysis::custom_spec("custom", {f, w, k}, {a, b, c},
                                         {sk, i, j, parse_u64(S), R, parse_u64(T)});
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        } catch (const std::out_of_range& e) {
            throw UsageError(e.what());
        }
    }
};

void write_all(const void* data, std::size_t n) {
    if (n && std::fwrite(data, 1, n, stdout) != n) throw IoError(std::string("write failed: ") + std::strerror(errno));
}

int cmd_gen(const std::string& algo, const SeedOpts& seed, const std::string& count, const std::string& format) {
    const GeneratorSpec& spec = lookup(algo);
    Generator g = seed.make(spec);
    std::uint64_t remaining = parse_count(count);
    const unsigned w = spec.w(), bytes = w / 8;
    std::vector<std::uint64_t> buf(8192);
    std::vector<unsigned char> raw;
    json values = json::array();
    while (remaining) {
        const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, buf.size()));
        g.fill(std::span(buf.data(), n));
        if (format == "raw") {
            raw.resize(n * bytes);
            for (std::size_t i = 0; i < n; ++i)
                for (unsigned b = 0; b < bytes; ++b) raw[i * bytes + b] = static_cast<unsigned char>(buf[i] >> (8 * b));
            write_all(raw.data(), raw.size());
        } else if (format == "hex") {
            std::string text;
            for (std::size_t i = 0; i < n; ++i) text += hex_word(buf[i], w) + '\n';
            write_all(text.data(), text.size());
        } else {
            for (std::size_t i = 0; i < n; ++i) values.push_back(hex_word(buf[i], w));
        }
        remaining -= n;
    }
    if (format == "json") {
        const std::string text = json{{"algo", algo}, {"w", w}, {"values", values}}.dump() + "\n";
        write_all(text.data(), text.size());
    }
    if (std::fflush(stdout) != 0) throw IoError("flush failed");
    return ok;
}

json report_json(const hwd::Report& r) {
    json hist = json::array();
    for (const auto& c : r.history)
        hist.push_back({{"values", c.values},
                        {"bytes", c.bytes},
                        {"p_value", c.p_value()},
                        {"log10_p", c.log_p / std::numbers::ln10},
                        {"signature", c.signature},
                        {"category", c.category}});
    return {{"status", hwd::status_name(r.status)},
            {"bytes", r.bytes},
            {"values", r.values},
            {"p_value", r.p_value()},
            {"log10_p", r.log10_p()},
            {"signature", r.signature},
            {"category", r.category},
            {"overflow", r.overflow},
            {"mode", hwd::mode_name(r.mode)},
            {"w", r.w},
            {"k", r.k},
            {"ell", r.ell},
            {"categories", r.categories},
            {"batch", r.batch},
            {"history", hist}};
}

struct HwdOpts {
    std::string algo;
    bool from_stdin = false;
    SeedOpts seed;
    unsigned w = 64, k = 8;
    std::string mode = "standard";
    double limit = 1e12;
    double threshold = 1e-20;
    std::optional<unsigned> categories;
    std::optional<std::uint64_t> batch;
    bool as_json = false;
    bool quiet = false;
};

int cmd_hwd(const HwdOpts& o) {
    if (o.algo.empty() == !o.from_stdin) throw UsageError("give exactly one of --algo or --stdin");
    hwd::Config cfg;
    cfg.w = o.w;
    cfg.k = o.k;
    cfg.mode = o.mode == "transitional" ? hwd::Mode::transitional : hwd::Mode::standard;
    cfg.byte_limit = o.limit;
    cfg.p_threshold = o.threshold;
    cfg.categories = o.categories;
    cfg.batch = o.batch;
    if (const char* env = std::getenv("XRNG_HWD_FIRST_CHECKPOINT")) cfg.first_checkpoint = parse_count(env);

    hwd::Report rep;
    try {
        if (o.from_stdin) {
            std::vector<unsigned char> bytes;
            hwd::Source src{[&bytes](std::span<std::uint64_t> out) -> std::size_t {
                                bytes.resize(out.size() * 8);
                                const std::size_t got = std::fread(bytes.data(), 1, bytes.size(), stdin);
                                if (got < bytes.size() && std::ferror(stdin)) throw IoError("read error on stdin");
                                const std::size_t words = got / 8;
                                for (std::size_t i = 0; i < words; ++i) {
                                    std::uint64_t x = 0;
                                    for (unsigned b = 0; b < 8; ++b) x |= std::uint64_t{bytes[i * 8 + b]} << (8 * b);
                                    out[i] = x;
                                }
                                return words;
                            },
                            64};
            rep = hwd::run(src, cfg);
        } else {
            Generator g = o.seed.make(lookup(o.algo));
            rep = hwd::run(hwd::make_source(g), cfg);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    if (o.as_json) {
        std::cout << report_json(rep).dump(2) << "\n";
    } else {
        if (!o.quiet)
            for (const auto& c : rep.history)
                std::cout << "bytes " << c.bytes << "  p = " << c.p_value() << "  signature " << c.signature
                          << "  category " << c.category << "\n";
        std::cout << "status " << hwd::status_name(rep.status) << "  bytes " << rep.bytes << "  p = " << rep.p_value()
                  << " (log10 " << rep.log10_p() << ")";
        if (rep.overflow)
            std::cout << "  counter overflow";
        else
            std::cout << "  signature " << rep.signature << "  category " << rep.category;
        std::cout << "\n";
    }
    if (!std::cout) throw IoError("write failed");
    return rep.status == hwd::Status::failed ? stat_fail : ok;
}

int cmd_jump(const std::string& algo, const SeedOpts& seed, const std::string& steps, bool long_jump,
             const std::string& format) {
    const GeneratorSpec& spec = lookup(algo);
    Generator g = seed.make(spec);
    if (!steps.empty()) {
        BigInt n;
        try {
            n = parse_bigint(steps);
        } catch (const std::exception&) {
            throw UsageError("bad --steps: " + steps);
        }
        if (n < 0) throw UsageError("--steps must be nonnegative");
        g.jump(compute_jump_poly(spec, n));
    } else {
        const DefaultJumps j = default_jumps(spec);
        g.jump(long_jump ? j.long_jump : j.jump);
    }
    // physical layout with ring pointer 0, accepted back by --state
    const EngineState st = spec.engine.state_from_logical(g.logical_state(), 0);
    std::vector<std::string> words;
    for (unsigned i = 0; i < spec.engine.k(); ++i) words.push_back(hex_word(st.words[i], spec.w()));
    if (format == "json") {
        std::cout << json{{"algo", algo}, {"state", words}}.dump() << "\n";
    } else {
        for (std::size_t i = 0; i < words.size(); ++i) std::cout << (i ? "," : "") << words[i];
        std::cout << "\n";
    }
    return std::cout ? ok : io_error;
}

void emit(const json& j, bool as_json, const std::vector<std::pair<std::string, std::string>>& rows) {
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.first.size());
    for (const auto& r : rows) std::cout << r.first << std::string(width - r.first.size() + 2, ' ') << r.second << "\n";
}

std::string fmt(double x, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, x);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xoshiro/xoroshiro generators, Hamming-weight-dependency test and linear-engine analysis"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "write generator output to stdout");
    std::string gen_algo, gen_count = "1", gen_format = "raw";
    SeedOpts gen_seed;
    gen->add_option("--algo", gen_algo, "generator name")->required();
    gen_seed.add(gen);
    gen->add_option("--values", gen_count, "number of outputs (default 1; accepts 1e6)");
    gen->add_option("--format", gen_format, "raw | hex | json")->check(CLI::IsMember({"raw", "hex", "json"}));

    // hwd
    auto* hw = app.add_subcommand("hwd", "Hamming-weight-dependency test");
    HwdOpts ho;
    hw->add_option("--algo", ho.algo, "generator name");
    hw->add_flag("--stdin", ho.from_stdin, "read a little-endian byte stream from stdin");
    ho.seed.add(hw);
    hw->add_option("--w", ho.w, "test value width (16, 32, 64)")->check(CLI::IsMember({16, 32, 64}));
    hw->add_option("--k", ho.k, "signature length (1..16)")->check(CLI::Range(1, 16));
    hw->add_option("--mode", ho.mode, "standard | transitional")->check(CLI::IsMember({"standard", "transitional"}));
    hw->add_option("--limit", ho.limit, "byte limit");
    hw->add_option("--threshold", ho.threshold, "stop when p falls below this");
    hw->add_option("--categories", ho.categories, "category count C (default k/2+1)");
    hw->add_option("--batch", ho.batch, "values per batch (default: precomputed safe size)");
    hw->add_flag("--json", ho.as_json, "JSON report");
    hw->add_flag("--quiet", ho.quiet, "only the final line");

    // jump
    auto* jp = app.add_subcommand("jump", "print the state after a jump");
    std::string jp_algo, jp_steps, jp_format = "hex";
    bool jp_long = false;
    SeedOpts jp_seed;
    jp->add_option("--algo", jp_algo, "generator name")->required();
    jp_seed.add(jp);
    auto* steps_opt = jp->add_option("--steps", jp_steps, "jump distance (decimal, 0x-hex, 2^N[+-c]); default 2^(n/2)");
    jp->add_flag("--long", jp_long, "long jump, 2^(3n/4) steps")->excludes(steps_opt);
    jp->add_option("--format", jp_format, "hex | json")->check(CLI::IsMember({"hex", "json"}));

    // analyze
    auto* an = app.add_subcommand("analyze", "structural analysis");
    an->require_subcommand(1);
    an->fallthrough();
    bool an_json = false;
    an->add_flag("--json", an_json, "JSON output");

    auto* a_cp = an->add_subcommand("charpoly", "characteristic polynomial, weight, primitivity");
    CustomOpts cp_o;
    bool cp_print = false;
    cp_o.add(a_cp, false);
    a_cp->add_flag("--print", cp_print, "print the polynomial");

    auto* a_per = an->add_subcommand("period", "orbit length by stepping");
    CustomOpts per_o;
    std::string per_max = "268435456";
    per_o.add(a_per, false);
    a_per->add_option("--max-steps", per_max, "step budget");

    auto* a_eq = an->add_subcommand("equidist", "exhaustive d-dimensional equidistribution");
    CustomOpts eq_o;
    unsigned eq_d = 1;
    bool eq_rank = false;
    unsigned eq_word = 0;
    eq_o.add(a_eq, true);
    a_eq->add_option("--d", eq_d, "dimension");
    a_eq->add_flag("--max-rank", eq_rank, "rank test for k-dimensional equidistribution of one word instead");
    a_eq->add_option("--word", eq_word, "word index for --max-rank");

    auto* a_es = an->add_subcommand("escape", "escape from zeroland");
    CustomOpts es_o;
    analysis::EscapeOptions es_opt;
    es_o.add(a_es, true);
    a_es->add_option("--values", es_opt.values, "outputs per seed");
    a_es->add_option("--window", es_opt.window, "window width in words");
    a_es->add_option("--skip", es_opt.skip, "outputs discarded after seeding");

    auto* a_lc = an->add_subcommand("lincomplexity", "Berlekamp-Massey on one output bit");
    CustomOpts lc_o;
    SeedOpts lc_seed;
    unsigned lc_bit = 0, lc_degree = 0;
    std::string lc_len = "4096";
    lc_o.add(a_lc, true);
    lc_seed.add(a_lc);
    a_lc->add_option("--bit", lc_bit, "output bit");
    a_lc->add_option("--length", lc_len, "sequence length");
    a_lc->add_option("--degree", lc_degree, "also print the bound U(n, degree)");

    auto* a_anf = an->add_subcommand("anf", "algebraic normal form of scrambler bits");
    std::string anf_kind = "plus";
    unsigned anf_b = 0;
    bool anf_print = false;
    a_anf->add_option("--kind", anf_kind, "plus (bit b of x+y) | 3x (bit b of 3x)")->check(CLI::IsMember({"plus", "3x"}));
    a_anf->add_option("--b", anf_b, "bit index");
    a_anf->add_flag("--print", anf_print, "list the monomials");

    auto* a_bs = an->add_subcommand("batchsize", "safe HWD batch size");
    unsigned bs_k = 8, bs_w = 64;
    bool bs_compute = false;
    a_bs->add_option("--k", bs_k)->check(CLI::Range(1, 19));
    a_bs->add_option("--w", bs_w)->check(CLI::IsMember({16, 32, 64}));
    a_bs->add_flag("--compute", bs_compute, "recompute instead of using the built-in table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_algo, gen_seed, gen_count, gen_format);
        if (hw->parsed()) return cmd_hwd(ho);
        if (jp->parsed()) return cmd_jump(jp_algo, jp_seed, jp_steps, jp_long, jp_format);

        if (a_cp->parsed()) {
            const GeneratorSpec spec = cp_o.spec();
            const GF2Poly p = engine_char_poly(spec.engine);
            const unsigned n = spec.engine.state_bits();
            json j{{"degree", *p.degree()}, {"weight", poly_weight(p)}};
            std::vector<std::pair<std::string, std::string>> rows{{"degree", std::to_string(*p.degree())},
                                                                  {"weight", std::to_string(poly_weight(p))}};
            if (mersenne_factorization_supported(n)) {
                const bool prim = is_primitive(p);
                j["primitive"] = prim;
                rows.push_back({"primitive", prim ? "true" : "false"});
            } else {
                const bool irr = is_irreducible(p);
                j["irreducible"] = irr;
                rows.push_back({"irreducible", irr ? "true" : "false"});
                rows.push_back({"primitive", "unknown (2^n-1 not factored)"});
            }
            if (cp_print) {
                j["polynomial"] = p.to_string();
                rows.push_back({"polynomial", p.to_string()});
            }
            emit(j, an_json, rows);
            return ok;
        }
        if (a_per->parsed()) {
            const GeneratorSpec spec = per_o.spec();
            const auto t = analysis::orbit_period(spec.engine, parse_count(per_max));
            json j{{"state_bits", spec.engine.state_bits()}};
            if (t)
                j["period"] = *t;
            else
                j["period"] = nullptr;
            emit(j, an_json,
                 {{"state bits", std::to_string(spec.engine.state_bits())},
                  {"period", t ? std::to_string(*t) : "exceeds budget"}});
            return ok;
        }
        if (a_eq->parsed()) {
            const GeneratorSpec spec = eq_o.spec();
            if (eq_rank) {
                const bool r = analysis::max_equidistribution_rank(spec.engine, eq_word);
                emit({{"word", eq_word}, {"max_dimension", r}}, an_json,
                     {{"word", std::to_string(eq_word)},
                      {"k-dimensionally equidistributed", r ? "true" : "false"}});
                return ok;
            }
            const auto r = analysis::equidistribution_bruteforce(spec, eq_d);
            emit({{"d", eq_d}, {"equidistributed", r.equidistributed}, {"expected", r.expected}}, an_json,
                 {{"d", std::to_string(eq_d)}, {"equidistributed", r.equidistributed ? "true" : "false"}});
            return ok;
        }
        if (a_es->parsed()) {
            const auto r = analysis::escape_zeroland(es_o.spec(), es_opt);
            emit({{"mean", r.mean}, {"stddev", r.stddev}}, an_json, {{"mean", fmt(r.mean)}, {"stddev", fmt(r.stddev)}});
            return ok;
        }
        if (a_lc->parsed()) {
            const GeneratorSpec spec = lc_o.spec();
            const auto r = analysis::measure_bit_complexity(lc_seed.make(spec), lc_bit, parse_count(lc_len));
            json j{{"bit", lc_bit}, {"complexity", r.complexity}};
            std::vector<std::pair<std::string, std::string>> rows{{"bit", std::to_string(lc_bit)},
                                                                  {"complexity", std::to_string(r.complexity)}};
            if (lc_degree) {
                const auto u = analysis::lin_complexity_bound(spec.engine.state_bits(), lc_degree).str();
                j["bound"] = u;
                rows.push_back({"bound U(n,d)", u});
            }
            emit(j, an_json, rows);
            return ok;
        }
        if (a_anf->parsed()) {
            const auto f = anf_kind == "3x" ? analysis::anf_3x(anf_b) : analysis::anf_plus(anf_b);
            json j{{"monomials", f.size()}, {"degree", f.degree()}};
            std::vector<std::pair<std::string, std::string>> rows{{"monomials", std::to_string(f.size())},
                                                                  {"degree", std::to_string(f.degree())}};
            if (anf_print) {
                const unsigned half = anf_b + 1;
                std::string text;
                json list = json::array();
                for (auto m : f.monomials) {
                    std::string term;
                    for (unsigned v = 0; v < f.vars; ++v)
                        if (m >> v & 1) {
                            const bool y = anf_kind == "plus" && v >= half;
                            term += (y ? "y" : "x") + std::to_string(y ? v - half : v);
                        }
                    if (term.empty()) term = "1";
                    list.push_back(term);
                    text += (text.empty() ? "" : " + ") + term;
                }
                j["anf"] = list;
                rows.push_back({"anf", text});
            }
            emit(j, an_json, rows);
            return ok;
        }
        if (a_bs->parsed()) {
            const std::uint64_t t = bs_compute ? hwd::batch_size_for(bs_w, bs_k) : hwd::default_batch_size(bs_w, bs_k);
            emit({{"w", bs_w}, {"k", bs_k}, {"batch", t}}, an_json,
                 {{"w", std::to_string(bs_w)}, {"k", std::to_string(bs_k)}, {"batch", std::to_string(t)}});
            return ok;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
