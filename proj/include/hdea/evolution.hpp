#pragma once

/// @file evolution.hpp
/// @brief Steady-state loops for the haploid EA (H-EA) and the
/// haploid-diploid EA (HD-EA).
///
/// Both loops produce one offspring per generation, choose parents by binary
/// tournament and replace the worst member. An HD-EA generation costs two
/// evaluations (one per haploid in the offspring) and an H-EA generation one,
/// so running H-EA for 2G generations matches the budget of G HD-EA
/// generations up to initialisation (2P vs P evaluations).

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "operators.hpp"
#include "rng.hpp"

namespace hdea {

enum class Replacement {
    worst,           ///< newcomer always overwrites the worst member
    worst_if_better, ///< only when strictly fitter than the worst member
};

template <Genome G>
struct Haploid {
    G genome;
    double fitness = 0.0;
};

template <typename M>
concept Evaluated = requires(const M& m) {
    { m.fitness } -> std::convertible_to<double>;
};

template <typename F, typename G>
concept Evaluator = std::invocable<F&, const G&, Rng&> &&
                    std::convertible_to<std::invoke_result_t<F&, const G&, Rng&>, double>;

template <Evaluated M>
struct Population {
    std::vector<M> members;

    std::size_t size() const noexcept { return members.size(); }
    const M& operator[](std::size_t i) const noexcept { return members[i]; }
    M& operator[](std::size_t i) noexcept { return members[i]; }

    /// First index of maximal fitness.
    std::size_t best_index() const noexcept {
        std::size_t best = 0;
        for (std::size_t i = 1; i < members.size(); ++i)
            if (members[i].fitness > members[best].fitness) best = i;
        return best;
    }
    double best_fitness() const noexcept { return members[best_index()].fitness; }
    double worst_fitness() const noexcept {
        double w = members.front().fitness;
        for (const auto& m : members) w = m.fitness < w ? m.fitness : w;
        return w;
    }
};

/// Binary tournament: two uniform draws with replacement, fitter wins,
/// ties decided by a fair coin.
template <Evaluated M>
std::size_t tournament_select(const Population<M>& pop, Rng& rng) {
    if (pop.size() == 0) throw ParameterError("tournament_select: population is empty");
    const std::size_t i = uniform_index(rng, pop.size());
    const std::size_t j = uniform_index(rng, pop.size());
    if (pop[i].fitness > pop[j].fitness) return i;
    if (pop[j].fitness > pop[i].fitness) return j;
    return coin_flip(rng) ? i : j;
}

/// Overwrites a minimal-fitness member (uniform among ties). Returns whether
/// the newcomer entered the population.
template <Evaluated M>
bool replace_worst(Population<M>& pop, M newcomer, Rng& rng, Replacement policy = Replacement::worst) {
    if (pop.size() == 0) throw ParameterError("replace_worst: population is empty");
    const double worst = pop.worst_fitness();
    if (policy == Replacement::worst_if_better && !(newcomer.fitness > worst)) return false;

    std::size_t ties = 0;
    for (const auto& m : pop.members) ties += m.fitness == worst;
    std::size_t pick = ties > 1 ? uniform_index(rng, ties) : 0;
    for (auto& m : pop.members) {
        if (m.fitness != worst) continue;
        if (pick-- == 0) {
            m = std::move(newcomer);
            return true;
        }
    }
    return false; // unreachable: at least one member attains the minimum
}

struct StepOptions {
    VariationOptions variation;
    Replacement replacement = Replacement::worst;
};

/// One HD-EA generation: two independent tournament parents (possibly the
/// same member) each contribute one gamete; the resulting diploid is
/// evaluated haploid by haploid (two evaluator calls) and replaces the worst.
/// Returns the offspring.
template <Genome G, Evaluator<G> Eval>
Diploid<G> hdea_generation(Population<Diploid<G>>& pop, Eval& eval, Rng& rng, const StepOptions& opts = {}) {
    const std::size_t p1 = tournament_select(pop, rng);
    G gamete1 = gametogenesis(pop[p1], rng, opts.variation);
    const std::size_t p2 = tournament_select(pop, rng);
    G gamete2 = gametogenesis(pop[p2], rng, opts.variation);
    const double f1 = eval(gamete1, rng);
    const double f2 = eval(gamete2, rng);
    auto child = Diploid<G>::make(std::move(gamete1), f1, std::move(gamete2), f2);
    replace_worst(pop, child, rng, opts.replacement);
    return child;
}

/// One H-EA generation: two tournament parents, one-point crossover (when
/// enabled) keeping one child uniformly, mutation, one evaluation, replace
/// the worst. With crossover disabled only one parent is drawn.
template <Genome G, Evaluator<G> Eval>
Haploid<G> hea_generation(Population<Haploid<G>>& pop, Eval& eval, Rng& rng, const StepOptions& opts = {}) {
    const std::size_t p1 = tournament_select(pop, rng);
    G child;
    if (opts.variation.crossover) {
        const std::size_t p2 = tournament_select(pop, rng);
        auto kids = crossover_one_point(pop[p1].genome, pop[p2].genome, rng);
        child = coin_flip(rng) ? std::move(kids.first) : std::move(kids.second);
    } else {
        child = pop[p1].genome;
    }
    if (opts.variation.mutation) mutate_in_place(child, opts.variation.mutation_mode, rng);
    const double f = eval(child, rng);
    Haploid<G> h{std::move(child), f};
    replace_worst(pop, h, rng, opts.replacement);
    return h;
}

struct EvolutionParams {
    std::size_t pop_size = 50;
    std::uint64_t generations = 20000;
    StepOptions step;
    /// Generations between best-fitness samples; 0 selects ceil(G/1000).
    std::uint64_t history_stride = 0;

    std::uint64_t effective_stride() const noexcept {
        if (history_stride != 0) return history_stride;
        const std::uint64_t s = (generations + 999) / 1000;
        return s == 0 ? 1 : s;
    }
};

struct HistoryPoint {
    std::uint64_t generation = 0;
    double best_fitness = 0.0;

    friend bool operator==(const HistoryPoint&, const HistoryPoint&) = default;
};

template <Evaluated M>
struct RunTrace {
    std::uint64_t evaluations = 0;
    std::uint64_t initial_evaluations = 0;
    std::uint64_t generations = 0;
    std::vector<HistoryPoint> best_fitness_history;
    M final_best;
    /// Diploids whose composite fitness was audited / found inconsistent.
    std::uint64_t diploids_checked = 0;
    std::uint64_t averaging_violations = 0;
};

namespace detail {

inline void validate(const EvolutionParams& p) {
    if (p.pop_size == 0) throw ParameterError("evolution: pop_size must be positive");
}

template <Evaluated M>
void sample_history(RunTrace<M>& trace, const Population<M>& pop, std::uint64_t gen, std::uint64_t stride,
                    std::uint64_t last) {
    if (gen % stride == 0 || gen == last) trace.best_fitness_history.push_back({gen, pop.best_fitness()});
}

template <Genome G>
void audit(RunTrace<Diploid<G>>& trace, const Diploid<G>& d) {
    ++trace.diploids_checked;
    if (!d.averaging_holds()) ++trace.averaging_violations;
}

} // namespace detail

/// Runs HD-EA for params.generations generations. `init` draws one random
/// haploid genome from the stream; every initial diploid gets two.
template <Genome G, typename Init, Evaluator<G> Eval>
    requires std::invocable<Init&, Rng&> && std::same_as<std::invoke_result_t<Init&, Rng&>, G>
RunTrace<Diploid<G>> run_hdea(const EvolutionParams& params, Init init, Eval eval, Rng& rng) {
    detail::validate(params);
    RunTrace<Diploid<G>> trace;
    Population<Diploid<G>> pop;
    pop.members.reserve(params.pop_size);
    for (std::size_t i = 0; i < params.pop_size; ++i) {
        G a = init(rng);
        G b = init(rng);
        const double fa = eval(a, rng);
        const double fb = eval(b, rng);
        pop.members.push_back(Diploid<G>::make(std::move(a), fa, std::move(b), fb));
        detail::audit(trace, pop.members.back());
    }
    trace.initial_evaluations = 2 * params.pop_size;
    trace.evaluations = trace.initial_evaluations;

    const auto stride = params.effective_stride();
    detail::sample_history(trace, pop, 0, stride, params.generations);
    for (std::uint64_t gen = 1; gen <= params.generations; ++gen) {
        const auto child = hdea_generation(pop, eval, rng, params.step);
        detail::audit(trace, child);
        trace.evaluations += 2;
        trace.generations = gen;
        detail::sample_history(trace, pop, gen, stride, params.generations);
    }
    trace.final_best = pop[pop.best_index()];
    return trace;
}

/// Runs the traditional haploid EA for params.generations generations.
template <Genome G, typename Init, Evaluator<G> Eval>
    requires std::invocable<Init&, Rng&> && std::same_as<std::invoke_result_t<Init&, Rng&>, G>
RunTrace<Haploid<G>> run_hea(const EvolutionParams& params, Init init, Eval eval, Rng& rng) {
    detail::validate(params);
    RunTrace<Haploid<G>> trace;
    Population<Haploid<G>> pop;
    pop.members.reserve(params.pop_size);
    for (std::size_t i = 0; i < params.pop_size; ++i) {
        G g = init(rng);
        const double f = eval(g, rng);
        pop.members.push_back(Haploid<G>{std::move(g), f});
    }
    trace.initial_evaluations = params.pop_size;
    trace.evaluations = trace.initial_evaluations;

    const auto stride = params.effective_stride();
    detail::sample_history(trace, pop, 0, stride, params.generations);
    for (std::uint64_t gen = 1; gen <= params.generations; ++gen) {
        hea_generation(pop, eval, rng, params.step);
        trace.evaluations += 1;
        trace.generations = gen;
        detail::sample_history(trace, pop, gen, stride, params.generations);
    }
    trace.final_best = pop[pop.best_index()];
    return trace;
}

} // namespace hdea
