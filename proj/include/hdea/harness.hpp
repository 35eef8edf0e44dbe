#pragma once

/// @file harness.hpp
/// @brief Replicated comparison of HD-EA against H-EA over a sweep of k.
///
/// For every k in the sweep, `landscapes` NK instances are drawn (plus one
/// trait map each for the RBNK task). On each instance both algorithms are
/// run `runs_per_landscape` times with independent population seeds. Every
/// random stream is derived from the master seed and the run's grid
/// coordinates, so the record list is a pure function of the configuration
/// regardless of how many worker threads execute it.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "evolution.hpp"
#include "nk_landscape.hpp"
#include "operators.hpp"
#include "rbn.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace hdea {

enum class Task { nk, rbnk };
enum class Algorithm { hdea, hea };

inline const char* to_string(Task t) noexcept { return t == Task::nk ? "nk" : "rbnk"; }
inline const char* to_string(Algorithm a) noexcept { return a == Algorithm::hdea ? "hdea" : "hea"; }

inline std::optional<Task> parse_task(std::string_view s) {
    if (s == "nk") return Task::nk;
    if (s == "rbnk") return Task::rbnk;
    return std::nullopt;
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
    if (s == "hdea") return Algorithm::hdea;
    if (s == "hea") return Algorithm::hea;
    return std::nullopt;
}

struct ExperimentConfig {
    Task task = Task::nk;
    std::size_t n = 50;
    // RBNK only
    std::size_t r = 100;
    std::size_t b = 2;
    std::size_t t_cycles = 50;
    std::size_t trials = 10;

    std::size_t pop_size = 50;
    std::uint64_t hdea_generations = 20000;
    std::vector<Algorithm> algorithms{Algorithm::hdea, Algorithm::hea};
    bool crossover = true;
    Replacement replacement = Replacement::worst;
    MutationMode mutation = MutationMode::exact_one;

    std::size_t landscapes = 10;
    std::size_t runs_per_landscape = 10;
    std::uint64_t master_seed = 1;
    std::vector<std::size_t> k_sweep{0, 2, 4, 6, 8, 10};

    /// H-EA runs twice as many generations for an equal evaluation budget.
    std::uint64_t hea_generations() const noexcept { return 2 * hdea_generations; }

    std::uint64_t generations_for(Algorithm a) const noexcept {
        return a == Algorithm::hdea ? hdea_generations : hea_generations();
    }

    /// Total evaluations of one run, initialisation included.
    std::uint64_t evaluations_for(Algorithm a) const noexcept {
        return a == Algorithm::hdea ? 2 * pop_size + 2 * hdea_generations : pop_size + hea_generations();
    }

    std::size_t grid_size() const noexcept {
        return k_sweep.size() * landscapes * runs_per_landscape * algorithms.size();
    }

    /// Throws ParameterError naming the offending field.
    void validate() const {
        auto fail = [](const std::string& field, const std::string& why) {
            throw ParameterError("config field '" + field + "': " + why);
        };
        if (n == 0) fail("n", "must be positive");
        if (pop_size == 0) fail("pop_size", "must be positive");
        if (landscapes == 0) fail("landscapes", "must be positive");
        if (runs_per_landscape == 0) fail("runs_per_landscape", "must be positive");
        if (algorithms.empty()) fail("algorithms", "must name at least one algorithm");
        for (std::size_t i = 0; i < algorithms.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (algorithms[i] == algorithms[j]) fail("algorithms", "duplicate entry");
        if (k_sweep.empty()) fail("k_sweep", "must list at least one k");
        for (auto k : k_sweep) {
            if (k > n - 1) fail("k_sweep", "every k must satisfy k <= n-1");
            if (k > NkLandscape::max_k) fail("k_sweep", "k exceeds supported maximum of 24");
        }
        if (task == Task::rbnk) {
            if (r == 0) fail("r", "must be positive");
            if (n > r) fail("n", "must satisfy n <= r for the rbnk task");
            if (b == 0 || b > r) fail("b", "must satisfy 1 <= b <= r");
            if (b > RbnGenome::max_b) fail("b", "exceeds supported maximum of 16");
            if (t_cycles == 0) fail("t_cycles", "must be positive");
            if (trials == 0) fail("trials", "must be positive");
        }
        // crossover needs at least two loci
        const std::size_t loci = task == Task::nk ? n : r;
        if (crossover && loci < 2) fail("crossover", "requires genomes with at least 2 loci");
    }
};

struct RunRecord {
    Task task = Task::nk;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t r = 0; ///< 0 for the nk task
    std::size_t b = 0; ///< 0 for the nk task
    Algorithm algorithm = Algorithm::hdea;
    std::size_t landscape_id = 0;
    std::size_t run_id = 0;
    std::uint64_t generations = 0;
    std::uint64_t evaluations = 0;
    double best_fitness = 0.0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Canonical record order: k, algorithm, landscape, run.
inline bool canonical_less(const RunRecord& x, const RunRecord& y) noexcept {
    return std::tuple(x.k, x.algorithm, x.landscape_id, x.run_id) < std::tuple(y.k, y.algorithm, y.landscape_id, y.run_id);
}

/// Problem instance shared by both algorithms on one grid cell.
struct LandscapeArtifacts {
    NkLandscape landscape;
    std::optional<TraitMap> traits; ///< present for the rbnk task
};

inline std::uint64_t landscape_seed(std::uint64_t master, std::size_t k, std::size_t landscape_id) noexcept {
    return derive_seed(master, {k, landscape_id});
}

inline std::uint64_t trait_seed(std::uint64_t landscape_seed) noexcept {
    return derive_seed(landscape_seed, {0x7472616974ULL});
}

inline std::uint64_t run_seed(std::uint64_t master, std::size_t k, std::size_t landscape_id, std::size_t run_id,
                              Algorithm alg) noexcept {
    return derive_seed(master, {k, landscape_id, run_id, 1 + static_cast<std::uint64_t>(alg), 0x72756eULL});
}

inline LandscapeArtifacts make_artifacts(const ExperimentConfig& cfg, std::size_t k, std::size_t landscape_id) {
    const auto seed = landscape_seed(cfg.master_seed, k, landscape_id);
    LandscapeArtifacts art{generate_nk(cfg.n, k, seed), std::nullopt};
    if (cfg.task == Task::rbnk) art.traits = assign_traits(cfg.r, cfg.n, trait_seed(seed));
    return art;
}

inline EvolutionParams evolution_params(const ExperimentConfig& cfg, Algorithm alg) {
    EvolutionParams p;
    p.pop_size = cfg.pop_size;
    p.generations = cfg.generations_for(alg);
    p.step.variation.crossover = cfg.crossover;
    p.step.variation.mutation = true;
    p.step.variation.mutation_mode = cfg.mutation;
    p.step.replacement = cfg.replacement;
    return p;
}

/// Diploid-averaging audit accumulated over runs.
struct ExperimentAudit {
    std::uint64_t runs = 0;
    std::uint64_t diploids_checked = 0;
    std::uint64_t averaging_violations = 0;

    ExperimentAudit& operator+=(const ExperimentAudit& o) noexcept {
        runs += o.runs;
        diploids_checked += o.diploids_checked;
        averaging_violations += o.averaging_violations;
        return *this;
    }
};

struct RunOutcome {
    RunRecord record;
    ExperimentAudit audit;
};

namespace detail {

template <typename Trace>
RunOutcome finish(const ExperimentConfig& cfg, Algorithm alg, std::size_t k, std::size_t landscape_id,
                  std::size_t run_id, const Trace& trace) {
    RunOutcome out;
    auto& rec = out.record;
    rec.task = cfg.task;
    rec.n = cfg.n;
    rec.k = k;
    rec.r = cfg.task == Task::rbnk ? cfg.r : 0;
    rec.b = cfg.task == Task::rbnk ? cfg.b : 0;
    rec.algorithm = alg;
    rec.landscape_id = landscape_id;
    rec.run_id = run_id;
    rec.generations = trace.generations;
    rec.evaluations = trace.evaluations;
    rec.best_fitness = trace.final_best.fitness;
    out.audit.runs = 1;
    out.audit.diploids_checked = trace.diploids_checked;
    out.audit.averaging_violations = trace.averaging_violations;
    return out;
}

template <Genome G, typename Init, typename Eval>
RunOutcome run_algorithm(const ExperimentConfig& cfg, Algorithm alg, std::size_t k, std::size_t landscape_id,
                         std::size_t run_id, Init init, Eval eval) {
    Rng rng = make_rng(run_seed(cfg.master_seed, k, landscape_id, run_id, alg));
    const auto params = evolution_params(cfg, alg);
    if (alg == Algorithm::hdea)
        return finish(cfg, alg, k, landscape_id, run_id, run_hdea<G>(params, init, eval, rng));
    return finish(cfg, alg, k, landscape_id, run_id, run_hea<G>(params, init, eval, rng));
}

} // namespace detail

/// Executes one run of one algorithm on a prepared instance.
inline RunOutcome run_single(const ExperimentConfig& cfg, const LandscapeArtifacts& art, Algorithm alg,
                             std::size_t landscape_id, std::size_t run_id) {
    const NkLandscape& L = art.landscape;
    const std::size_t k = L.k();
    if (cfg.task == Task::nk) {
        const std::size_t n = cfg.n;
        auto init = [n](Rng& rng) { return BitGenome::random(n, rng); };
        auto eval = [&L](const BitGenome& g, Rng&) { return evaluate_nk(L, g); };
        return detail::run_algorithm<BitGenome>(cfg, alg, k, landscape_id, run_id, init, eval);
    }
    if (!art.traits) throw ParameterError("run_single: rbnk task requires a trait map");
    const TraitMap& traits = *art.traits;
    const std::size_t r = cfg.r, b = cfg.b, t = cfg.t_cycles, trials = cfg.trials;
    auto init = [r, b](Rng& rng) { return random_rbn(r, b, rng); };
    auto eval = [&L, &traits, t, trials](const RbnGenome& g, Rng& rng) {
        return evaluate_rbnk(g, L, traits, t, trials, rng);
    };
    return detail::run_algorithm<RbnGenome>(cfg, alg, k, landscape_id, run_id, init, eval);
}

class ExperimentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fired once per (k, algorithm) cell when its last run completes.
struct CellProgress {
    std::size_t k = 0;
    Algorithm algorithm = Algorithm::hdea;
    std::size_t runs = 0;
    double mean_best = 0.0;
};

struct ExperimentOptions {
    std::size_t workers = 1;
    std::function<void(const CellProgress&)> on_cell_done;
    ExperimentAudit* audit = nullptr;
};

inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& opts = {}) {
    cfg.validate();

    struct Job {
        std::size_t k_index, landscape_id, alg_index, run_id;
    };
    std::vector<Job> jobs;
    jobs.reserve(cfg.grid_size());
    for (std::size_t ki = 0; ki < cfg.k_sweep.size(); ++ki)
        for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai)
            for (std::size_t l = 0; l < cfg.landscapes; ++l)
                for (std::size_t run = 0; run < cfg.runs_per_landscape; ++run) jobs.push_back({ki, l, ai, run});

    std::vector<LandscapeArtifacts> artifacts;
    artifacts.reserve(cfg.k_sweep.size() * cfg.landscapes);
    for (auto k : cfg.k_sweep)
        for (std::size_t l = 0; l < cfg.landscapes; ++l) artifacts.push_back(make_artifacts(cfg, k, l));

    std::vector<RunOutcome> outcomes(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mu;
    std::size_t first_failure = jobs.size();
    std::string failure_message;
    const std::size_t per_cell = cfg.landscapes * cfg.runs_per_landscape;
    std::vector<std::size_t> cell_done(cfg.k_sweep.size() * cfg.algorithms.size(), 0);
    std::vector<double> cell_sum(cell_done.size(), 0.0);

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            const std::size_t k = cfg.k_sweep[job.k_index];
            const Algorithm alg = cfg.algorithms[job.alg_index];
            try {
                outcomes[i] = run_single(cfg, artifacts[job.k_index * cfg.landscapes + job.landscape_id], alg,
                                         job.landscape_id, job.run_id);
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                if (i < first_failure) {
                    first_failure = i;
                    failure_message = "run failed at k=" + std::to_string(k) + " landscape_id=" +
                                      std::to_string(job.landscape_id) + " run_id=" + std::to_string(job.run_id) +
                                      " algorithm=" + to_string(alg) + ": " + e.what();
                }
                failed.store(true);
                return;
            }
            if (opts.on_cell_done) {
                std::lock_guard lock(mu);
                const std::size_t cell = job.k_index * cfg.algorithms.size() + job.alg_index;
                cell_sum[cell] += outcomes[i].record.best_fitness;
                if (++cell_done[cell] == per_cell)
                    opts.on_cell_done({k, alg, per_cell, cell_sum[cell] / static_cast<double>(per_cell)});
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(opts.workers, jobs.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed) throw ExperimentError(failure_message);

    std::vector<RunRecord> records;
    records.reserve(outcomes.size());
    ExperimentAudit audit;
    for (const auto& o : outcomes) {
        records.push_back(o.record);
        audit += o.audit;
    }
    std::sort(records.begin(), records.end(), canonical_less);
    if (opts.audit) *opts.audit += audit;
    return records;
}

// ---------------------------------------------------------------------------
// Summaries

struct CellStats {
    std::size_t count = 0;
    double mean = 0.0;
    double max = 0.0;
    double min = 0.0;

    friend bool operator==(const CellStats&, const CellStats&) = default;
};

/// One row of the comparison: per-algorithm statistics at a given k and,
/// when both algorithms have at least two runs, HD-EA vs H-EA Welch test
/// (t is positive when HD-EA has the higher mean).
struct KComparison {
    std::size_t k = 0;
    std::optional<CellStats> hdea;
    std::optional<CellStats> hea;
    bool comparable = false;
    bool tested = false;
    stats::WelchResult test;
    bool significant = false;

    friend bool operator==(const KComparison& x, const KComparison& y) {
        auto same = [](double a, double b) { return a == b || (a != a && b != b); };
        return x.k == y.k && x.hdea == y.hdea && x.hea == y.hea && x.comparable == y.comparable &&
               x.tested == y.tested && same(x.test.t, y.test.t) && same(x.test.df, y.test.df) &&
               same(x.test.p, y.test.p) && x.significant == y.significant;
    }
};

struct ComparisonSummary {
    Task task = Task::nk;
    std::size_t n = 0;
    std::size_t r = 0;
    std::size_t b = 0;
    double alpha = 0.05;
    std::vector<KComparison> rows;

    const KComparison* find(std::size_t k) const noexcept {
        for (const auto& row : rows)
            if (row.k == k) return &row;
        return nullptr;
    }

    friend bool operator==(const ComparisonSummary&, const ComparisonSummary&) = default;
};

inline CellStats cell_stats(std::span<const double> xs) {
    if (xs.empty()) throw ParameterError("cell_stats: empty cell");
    CellStats c;
    c.count = xs.size();
    c.mean = stats::mean(xs);
    c.max = *std::max_element(xs.begin(), xs.end());
    c.min = *std::min_element(xs.begin(), xs.end());
    return c;
}

inline ComparisonSummary summarize(const std::vector<RunRecord>& records, double alpha = 0.05) {
    if (records.empty()) throw ParameterError("summarize: no records");
    ComparisonSummary s;
    s.task = records.front().task;
    s.n = records.front().n;
    s.r = records.front().r;
    s.b = records.front().b;
    s.alpha = alpha;

    std::map<std::size_t, std::map<Algorithm, std::vector<double>>> groups;
    for (const auto& rec : records) groups[rec.k][rec.algorithm].push_back(rec.best_fitness);

    for (const auto& [k, by_alg] : groups) {
        KComparison row;
        row.k = k;
        if (auto it = by_alg.find(Algorithm::hdea); it != by_alg.end()) row.hdea = cell_stats(it->second);
        if (auto it = by_alg.find(Algorithm::hea); it != by_alg.end()) row.hea = cell_stats(it->second);
        row.comparable = row.hdea.has_value() && row.hea.has_value();
        if (row.comparable && row.hdea->count >= 2 && row.hea->count >= 2) {
            row.tested = true;
            row.test = stats::welch_t_test(by_alg.at(Algorithm::hdea), by_alg.at(Algorithm::hea));
            row.significant = row.test.p < alpha;
        }
        s.rows.push_back(row);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Effective landscape under diploid pairing

/// Fitness each haploid is credited with when every genome g is paired with
/// pairing(g) and the diploid's mean fitness is attributed to both halves.
inline std::map<BitGenome, double> effective_landscape(const NkLandscape& landscape,
                                                       const std::map<BitGenome, BitGenome>& pairing) {
    const std::size_t n = landscape.n();
    if (n > 16) throw ParameterError("effective_landscape: n must be at most 16");
    const std::uint64_t count = std::uint64_t{1} << n;
    std::map<BitGenome, double> out;
    BitGenome g(n);
    for (std::uint64_t x = 0; x < count; ++x) {
        for (std::size_t i = 0; i < n; ++i) g.bits[i] = static_cast<std::uint8_t>((x >> (n - 1 - i)) & 1U);
        const auto it = pairing.find(g);
        if (it == pairing.end()) throw ParameterError("effective_landscape: pairing has no partner for " + g.to_string());
        if (it->second.size() != n) throw ParameterError("effective_landscape: partner of " + g.to_string() + " has wrong length");
        out.emplace(g, (evaluate_nk(landscape, g) + evaluate_nk(landscape, it->second)) / 2.0);
    }
    return out;
}

/// Every genome paired with itself (a homozygous population).
inline std::map<BitGenome, BitGenome> identity_pairing(std::size_t n) {
    if (n > 16) throw ParameterError("identity_pairing: n must be at most 16");
    std::map<BitGenome, BitGenome> out;
    BitGenome g(n);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        for (std::size_t i = 0; i < n; ++i) g.bits[i] = static_cast<std::uint8_t>((x >> (n - 1 - i)) & 1U);
        out.emplace(g, g);
    }
    return out;
}

} // namespace hdea
