#pragma once

/// @file operators.hpp
/// @brief Mutation, one-point crossover, and haploid-diploid gametogenesis.
///
/// Operators are overloaded per genome kind and otherwise generic over the
/// `Genome` concept, so the evolutionary loops are written once for both the
/// binary NK task and the Boolean-network RBNK task.

#include <array>
#include <concepts>
#include <cstddef>
#include <string>
#include <utility>

#include "errors.hpp"
#include "nk_landscape.hpp"
#include "rbn.hpp"
#include "rng.hpp"

namespace hdea {

enum class MutationMode {
    exact_one, ///< exactly one locus mutated per genome copy
    per_locus, ///< each locus mutated independently with probability 1/L
};

struct VariationOptions {
    bool crossover = true;
    bool mutation = true;
    MutationMode mutation_mode = MutationMode::exact_one;
};

// --- splicing --------------------------------------------------------------

/// Loci [0, cut) from head, [cut, L) from tail.
inline BitGenome splice(const BitGenome& head, const BitGenome& tail, std::size_t cut) {
    BitGenome out = head;
    std::copy(tail.bits.begin() + static_cast<std::ptrdiff_t>(cut), tail.bits.end(),
              out.bits.begin() + static_cast<std::ptrdiff_t>(cut));
    return out;
}

inline RbnGenome splice(const RbnGenome& head, const RbnGenome& tail, std::size_t cut) {
    return RbnGenome::splice(head, tail, cut);
}

inline bool same_shape(const BitGenome& a, const BitGenome& b) noexcept { return a.size() == b.size(); }
inline bool same_shape(const RbnGenome& a, const RbnGenome& b) noexcept { return a.r() == b.r() && a.b() == b.b(); }

// --- mutation --------------------------------------------------------------

inline void mutate_locus(BitGenome& g, std::size_t locus, Rng&) { g.bits[locus] ^= 1U; }

/// Either flips one truth-table bit of the node or rewires one of its inputs
/// to a uniform source (which may be the current one), with equal probability.
inline void mutate_locus(RbnGenome& g, std::size_t node, Rng& rng) {
    if (coin_flip(rng)) {
        g.flip_function_bit(node, uniform_index(rng, g.width()));
    } else {
        const std::size_t j = uniform_index(rng, g.b());
        g.set_input(node, j, uniform_index(rng, g.r()));
    }
}

template <typename G>
concept Genome = std::copyable<G> && std::equality_comparable<G> && requires(G& g, const G& cg, Rng& rng, std::size_t i) {
    { cg.locus_count() } -> std::convertible_to<std::size_t>;
    { splice(cg, cg, i) } -> std::same_as<G>;
    { same_shape(cg, cg) } -> std::convertible_to<bool>;
    mutate_locus(g, i, rng);
};

template <Genome G>
void mutate_in_place(G& g, MutationMode mode, Rng& rng) {
    const std::size_t len = g.locus_count();
    if (len == 0) throw ParameterError("mutate: genome is empty");
    if (mode == MutationMode::exact_one) {
        mutate_locus(g, uniform_index(rng, len), rng);
        return;
    }
    const double rate = 1.0 / static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i)
        if (bernoulli(rng, rate)) mutate_locus(g, i, rng);
}

/// Copy with exactly one uniformly chosen bit flipped.
inline BitGenome mutate_bit(const BitGenome& g, Rng& rng) {
    BitGenome out = g;
    mutate_in_place(out, MutationMode::exact_one, rng);
    return out;
}

/// Copy with exactly one uniformly chosen node mutated.
inline RbnGenome mutate_rbn(const RbnGenome& g, Rng& rng) {
    RbnGenome out = g;
    mutate_in_place(out, MutationMode::exact_one, rng);
    return out;
}

// --- crossover -------------------------------------------------------------

/// Complementary children for a fixed cut in [1, L-1].
template <Genome G>
std::pair<G, G> crossover_at(const G& p1, const G& p2, std::size_t cut) {
    if (!same_shape(p1, p2)) throw ParameterError("crossover: parents differ in dimensions");
    const std::size_t len = p1.locus_count();
    if (len < 2) throw ParameterError("crossover: genomes need at least 2 loci");
    if (cut < 1 || cut > len - 1) throw ParameterError("crossover: cut must lie in [1, L-1]");
    return {splice(p1, p2, cut), splice(p2, p1, cut)};
}

template <Genome G>
std::size_t draw_cut(const G& g, Rng& rng) {
    const std::size_t len = g.locus_count();
    if (len < 2) throw ParameterError("crossover: genomes need at least 2 loci");
    return 1 + uniform_index(rng, len - 1);
}

/// One-point crossover with the cut uniform over [1, L-1].
template <Genome G>
std::pair<G, G> crossover_one_point(const G& p1, const G& p2, Rng& rng) {
    if (!same_shape(p1, p2)) throw ParameterError("crossover: parents differ in dimensions");
    return crossover_at(p1, p2, draw_cut(p1, rng));
}

// --- diploids and gametogenesis -------------------------------------------

/// Two haploid genomes evaluated separately; the individual's fitness is
/// their mean.
template <Genome G>
struct Diploid {
    G genome_a;
    G genome_b;
    double fitness_a = 0.0;
    double fitness_b = 0.0;
    double fitness = 0.0;

    static Diploid make(G a, double fa, G b, double fb) {
        if (!same_shape(a, b)) throw ParameterError("Diploid: haploid genomes differ in dimensions");
        return Diploid{std::move(a), std::move(b), fa, fb, (fa + fb) / 2.0};
    }

    /// Exact check of the averaging invariant, via the half-sum formulation.
    bool averaging_holds() const noexcept { return fitness == 0.5 * fitness_a + 0.5 * fitness_b; }
};

/// Everything produced by one meiosis: the four candidate gametes
/// {A', B', C1', C2'} (primes: after mutation, when enabled), the crossover
/// cut used (0 when crossover is disabled) and the index of the chosen one.
template <Genome G>
struct Meiosis {
    std::array<G, 4> candidates;
    std::size_t cut = 0;
    std::size_t chosen = 0;

    const G& gamete() const noexcept { return candidates[chosen]; }
};

/// Both genomes are duplicated; one copy of each is crossed over with the
/// other's copy at a single shared cut, mutation is applied to all four
/// resulting genomes, and one of the four is picked uniformly.
template <Genome G>
Meiosis<G> meiosis(const Diploid<G>& parent, Rng& rng, const VariationOptions& opts) {
    Meiosis<G> m{{parent.genome_a, parent.genome_b, parent.genome_a, parent.genome_b}, 0, 0};
    if (opts.crossover) {
        m.cut = draw_cut(parent.genome_a, rng);
        auto [c1, c2] = crossover_at(parent.genome_a, parent.genome_b, m.cut);
        m.candidates[2] = std::move(c1);
        m.candidates[3] = std::move(c2);
    }
    if (opts.mutation)
        for (auto& c : m.candidates) mutate_in_place(c, opts.mutation_mode, rng);
    m.chosen = uniform_index(rng, 4);
    return m;
}

template <Genome G>
G gametogenesis(const Diploid<G>& parent, Rng& rng, const VariationOptions& opts) {
    auto m = meiosis(parent, rng, opts);
    return std::move(m.candidates[m.chosen]);
}

template <Genome G>
G gametogenesis(const Diploid<G>& parent, Rng& rng, bool mutation_enabled) {
    VariationOptions opts;
    opts.mutation = mutation_enabled;
    return gametogenesis(parent, rng, opts);
}

} // namespace hdea
