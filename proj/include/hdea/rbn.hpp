#pragma once

/// @file rbn.hpp
/// @brief Random Boolean networks and RBNK fitness.
///
/// A network has R nodes, each with B input connections (self-loops allowed)
/// and a truth table of 2^B bits. The table index is built from the inputs'
/// states in stored order, first input most significant. All nodes update
/// synchronously. Node indices are 0-based everywhere, including on disk.
///
/// RBNK fitness reads N designated trait nodes after T synchronous updates
/// from a random start state and scores the readout on an NK landscape.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "nk_landscape.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace hdea {

struct RbnNode {
    std::vector<std::size_t> inputs;
    std::vector<std::uint8_t> function;

    friend bool operator==(const RbnNode&, const RbnNode&) = default;
};

struct NetworkState {
    std::vector<std::uint8_t> bits;

    NetworkState() = default;
    explicit NetworkState(std::size_t r) : bits(r, 0) {}
    explicit NetworkState(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

    std::size_t size() const noexcept { return bits.size(); }

    friend bool operator==(const NetworkState&, const NetworkState&) = default;
    friend auto operator<=>(const NetworkState&, const NetworkState&) = default;
};

/// Boolean network genome. Stored flat (wiring and truth tables in two
/// contiguous arrays) so that copying during reproduction stays cheap.
class RbnGenome {
public:
    static constexpr std::size_t max_b = 16;

    RbnGenome() = default;

    explicit RbnGenome(std::span<const RbnNode> nodes) {
        if (nodes.empty()) throw ParameterError("RbnGenome: network must have at least one node");
        r_ = nodes.size();
        b_ = nodes.front().inputs.size();
        if (b_ == 0 || b_ > max_b) throw ParameterError("RbnGenome: B must be in [1, 16]");
        inputs_.reserve(r_ * b_);
        functions_.reserve(r_ * width());
        for (std::size_t i = 0; i < r_; ++i) {
            const auto& node = nodes[i];
            if (node.inputs.size() != b_) throw ParameterError("RbnGenome: node " + std::to_string(i) + " must have B inputs");
            if (node.function.size() != width())
                throw ParameterError("RbnGenome: node " + std::to_string(i) + " must have 2^B function bits");
            for (auto in : node.inputs) {
                if (in >= r_) throw ParameterError("RbnGenome: input index out of range at node " + std::to_string(i));
                inputs_.push_back(static_cast<std::uint32_t>(in));
            }
            for (auto bit : node.function) {
                if (bit > 1) throw ParameterError("RbnGenome: function bits must be 0 or 1");
                functions_.push_back(bit);
            }
        }
    }

    std::size_t r() const noexcept { return r_; }
    std::size_t b() const noexcept { return b_; }
    std::size_t width() const noexcept { return std::size_t{1} << b_; }
    std::size_t locus_count() const noexcept { return r_; }

    std::size_t input(std::size_t node, std::size_t j) const noexcept { return inputs_[node * b_ + j]; }
    std::uint8_t function_bit(std::size_t node, std::size_t idx) const noexcept {
        return functions_[node * width() + idx];
    }

    void set_input(std::size_t node, std::size_t j, std::size_t source) {
        if (source >= r_) throw ParameterError("RbnGenome::set_input: source out of range");
        inputs_[node * b_ + j] = static_cast<std::uint32_t>(source);
    }
    void flip_function_bit(std::size_t node, std::size_t idx) noexcept { functions_[node * width() + idx] ^= 1U; }

    RbnNode node(std::size_t i) const {
        RbnNode out;
        for (std::size_t j = 0; j < b_; ++j) out.inputs.push_back(input(i, j));
        out.function.assign(functions_.begin() + static_cast<std::ptrdiff_t>(i * width()),
                            functions_.begin() + static_cast<std::ptrdiff_t>((i + 1) * width()));
        return out;
    }

    std::vector<RbnNode> nodes() const {
        std::vector<RbnNode> out;
        out.reserve(r_);
        for (std::size_t i = 0; i < r_; ++i) out.push_back(node(i));
        return out;
    }

    /// Nodes [0, cut) from head, [cut, R) from tail.
    static RbnGenome splice(const RbnGenome& head, const RbnGenome& tail, std::size_t cut) {
        RbnGenome out = head;
        std::copy(tail.inputs_.begin() + static_cast<std::ptrdiff_t>(cut * tail.b_), tail.inputs_.end(),
                  out.inputs_.begin() + static_cast<std::ptrdiff_t>(cut * out.b_));
        std::copy(tail.functions_.begin() + static_cast<std::ptrdiff_t>(cut * tail.width()), tail.functions_.end(),
                  out.functions_.begin() + static_cast<std::ptrdiff_t>(cut * out.width()));
        return out;
    }

    /// One synchronous update written into next (resized as needed).
    void step_into(std::span<const std::uint8_t> state, std::vector<std::uint8_t>& next) const {
        next.resize(r_);
        const std::size_t w = width();
        const std::uint32_t* in = inputs_.data();
        const std::uint8_t* fn = functions_.data();
        for (std::size_t i = 0; i < r_; ++i, in += b_, fn += w) {
            std::size_t idx = 0;
            for (std::size_t j = 0; j < b_; ++j) idx = (idx << 1) | state[in[j]];
            next[i] = fn[idx];
        }
    }

    friend bool operator==(const RbnGenome&, const RbnGenome&) = default;

private:
    std::size_t r_ = 0;
    std::size_t b_ = 0;
    std::vector<std::uint32_t> inputs_;
    std::vector<std::uint8_t> functions_;
};

/// Random network drawn from the given stream: inputs uniform with
/// replacement over [0, R), truth-table bits fair coins.
inline RbnGenome random_rbn(std::size_t r, std::size_t b, Rng& rng) {
    if (r == 0) throw ParameterError("generate_rbn: r must be positive");
    if (b == 0 || b > r) throw ParameterError("generate_rbn: b must satisfy 1 <= b <= r");
    if (b > RbnGenome::max_b) throw ParameterError("generate_rbn: b exceeds supported maximum of 16");
    std::vector<RbnNode> nodes(r);
    for (auto& node : nodes) {
        node.inputs.resize(b);
        for (auto& in : node.inputs) in = uniform_index(rng, r);
        node.function.resize(std::size_t{1} << b);
        for (auto& bit : node.function) bit = coin_flip(rng) ? 1 : 0;
    }
    return RbnGenome(nodes);
}

inline RbnGenome generate_rbn(std::size_t r, std::size_t b, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return random_rbn(r, b, rng);
}

inline NetworkState step(const RbnGenome& genome, const NetworkState& state) {
    if (state.size() != genome.r()) throw ParameterError("step: state length does not match R");
    NetworkState next;
    genome.step_into(state.bits, next.bits);
    return next;
}

inline NetworkState run_for(const RbnGenome& genome, const NetworkState& state0, std::size_t t) {
    if (t == 0) throw ParameterError("run_for: t must be at least 1");
    if (state0.size() != genome.r()) throw ParameterError("run_for: state length does not match R");
    std::vector<std::uint8_t> cur = state0.bits;
    std::vector<std::uint8_t> next;
    for (std::size_t c = 0; c < t; ++c) {
        genome.step_into(cur, next);
        cur.swap(next);
    }
    return NetworkState(std::move(cur));
}

struct TraitMap {
    std::vector<std::size_t> trait_nodes;

    std::size_t size() const noexcept { return trait_nodes.size(); }

    friend bool operator==(const TraitMap&, const TraitMap&) = default;
};

/// n distinct nodes out of [0, r), uniformly without replacement, in draw order.
inline TraitMap assign_traits(std::size_t r, std::size_t n, std::uint64_t seed) {
    if (r == 0 || n == 0) throw ParameterError("assign_traits: r and n must be positive");
    if (n > r) throw ParameterError("assign_traits: n must satisfy n <= r");
    Rng rng = make_rng(seed);
    std::vector<std::size_t> pool(r);
    for (std::size_t i = 0; i < r; ++i) pool[i] = i;
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t pick = a + uniform_index(rng, r - a);
        std::swap(pool[a], pool[pick]);
    }
    pool.resize(n);
    return TraitMap{std::move(pool)};
}

namespace detail {

inline void check_rbnk_dims(const RbnGenome& genome, const NkLandscape& landscape, const TraitMap& traits,
                            std::size_t t, std::size_t trials) {
    if (traits.size() != landscape.n())
        throw ParameterError("evaluate_rbnk: trait count " + std::to_string(traits.size()) +
                             " does not match landscape n " + std::to_string(landscape.n()));
    for (auto node : traits.trait_nodes)
        if (node >= genome.r()) throw ParameterError("evaluate_rbnk: trait node out of range for network");
    if (t == 0 || trials == 0) throw ParameterError("evaluate_rbnk: t and trials must be positive");
}

} // namespace detail

/// NK score of each random-start trial, in trial order.
inline std::vector<double> rbnk_trial_scores(const RbnGenome& genome, const NkLandscape& landscape,
                                             const TraitMap& traits, std::size_t t, std::size_t trials, Rng& rng) {
    detail::check_rbnk_dims(genome, landscape, traits, t, trials);
    std::vector<double> scores;
    scores.reserve(trials);
    std::vector<std::uint8_t> cur(genome.r());
    std::vector<std::uint8_t> next(genome.r());
    std::vector<std::uint8_t> readout(traits.size());
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (auto& s : cur) s = coin_flip(rng) ? 1 : 0;
        for (std::size_t c = 0; c < t; ++c) {
            genome.step_into(cur, next);
            cur.swap(next);
        }
        for (std::size_t j = 0; j < traits.size(); ++j) readout[j] = cur[traits.trait_nodes[j]];
        scores.push_back(landscape.evaluate_unchecked(readout));
    }
    return scores;
}

/// Mean NK score over `trials` random start states, each run for t cycles.
inline double evaluate_rbnk(const RbnGenome& genome, const NkLandscape& landscape, const TraitMap& traits,
                            std::size_t t, std::size_t trials, Rng& rng) {
    const auto scores = rbnk_trial_scores(genome, landscape, traits, t, trials, rng);
    double sum = 0.0;
    for (double s : scores) sum += s;
    return sum / static_cast<double>(scores.size());
}

inline double evaluate_rbnk(const RbnGenome& genome, const NkLandscape& landscape, const TraitMap& traits,
                            std::size_t t, std::size_t trials, std::uint64_t rng_seed) {
    Rng rng = make_rng(rng_seed);
    return evaluate_rbnk(genome, landscape, traits, t, trials, rng);
}

// ---------------------------------------------------------------------------
// Network file format (0-based node indices):
//
//   rbn 1
//   r <R>
//   b <B>
//   node <i> <in_1> ... <in_B> <truth table as 2^B chars of 0/1>
//
// Trait map file format:
//
//   trait-map 1
//   r <R>
//   traits <node_1> ... <node_N>

inline void write_rbn(std::ostream& os, const RbnGenome& g) {
    os << "rbn 1\nr " << g.r() << "\nb " << g.b() << '\n';
    for (std::size_t i = 0; i < g.r(); ++i) {
        os << "node " << i;
        for (std::size_t j = 0; j < g.b(); ++j) os << ' ' << g.input(i, j);
        os << ' ';
        for (std::size_t x = 0; x < g.width(); ++x) os << static_cast<char>('0' + g.function_bit(i, x));
        os << '\n';
    }
}

inline RbnGenome read_rbn(std::istream& is) {
    std::size_t line_no = 0;
    std::string buf;
    std::vector<std::string_view> w;
    if (!detail::next_record(is, line_no, buf, w) || w.size() != 2 || w[0] != "rbn" || w[1] != "1")
        throw ParseError(line_no, "expected header 'rbn 1'");
    const auto r = static_cast<std::size_t>(detail::expect_keyed_u64(is, line_no, buf, "r"));
    const auto b = static_cast<std::size_t>(detail::expect_keyed_u64(is, line_no, buf, "b"));
    if (r == 0 || b == 0 || b > RbnGenome::max_b) throw ParseError(line_no, "invalid r/b");
    const std::size_t width = std::size_t{1} << b;
    std::vector<RbnNode> nodes(r);
    for (std::size_t i = 0; i < r; ++i) {
        if (!detail::next_record(is, line_no, buf, w)) throw ParseError(line_no, "unexpected end of file in nodes");
        std::uint64_t idx = 0;
        if (w.size() != b + 3 || w[0] != "node" || !text::parse_u64(w[1], idx) || idx != i)
            throw ParseError(line_no, "expected 'node " + std::to_string(i) + "' followed by B inputs and a truth table");
        for (std::size_t j = 0; j < b; ++j) {
            std::uint64_t in = 0;
            if (!text::parse_u64(w[j + 2], in) || in >= r) throw ParseError(line_no, "bad input index");
            nodes[i].inputs.push_back(static_cast<std::size_t>(in));
        }
        const auto table = w[b + 2];
        if (table.size() != width) throw ParseError(line_no, "truth table must have 2^B bits");
        for (char c : table) {
            if (c != '0' && c != '1') throw ParseError(line_no, "truth table may only contain 0 and 1");
            nodes[i].function.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    }
    return RbnGenome(nodes);
}

inline void write_traits(std::ostream& os, const TraitMap& traits, std::size_t r) {
    os << "trait-map 1\nr " << r << "\ntraits";
    for (auto t : traits.trait_nodes) os << ' ' << t;
    os << '\n';
}

/// Returns the map together with the R it was drawn for.
inline std::pair<TraitMap, std::size_t> read_traits(std::istream& is) {
    std::size_t line_no = 0;
    std::string buf;
    std::vector<std::string_view> w;
    if (!detail::next_record(is, line_no, buf, w) || w.size() != 2 || w[0] != "trait-map" || w[1] != "1")
        throw ParseError(line_no, "expected header 'trait-map 1'");
    const auto r = static_cast<std::size_t>(detail::expect_keyed_u64(is, line_no, buf, "r"));
    if (!detail::next_record(is, line_no, buf, w) || w.empty() || w[0] != "traits")
        throw ParseError(line_no, "expected 'traits' line");
    TraitMap map;
    for (std::size_t j = 1; j < w.size(); ++j) {
        std::uint64_t v = 0;
        if (!text::parse_u64(w[j], v) || v >= r) throw ParseError(line_no, "bad trait node index");
        for (auto prev : map.trait_nodes)
            if (prev == v) throw ParseError(line_no, "duplicate trait node");
        map.trait_nodes.push_back(static_cast<std::size_t>(v));
    }
    if (map.trait_nodes.empty()) throw ParseError(line_no, "trait map is empty");
    return {std::move(map), r};
}

} // namespace hdea
