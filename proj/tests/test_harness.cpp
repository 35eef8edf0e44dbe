#include <gtest/gtest.h>

#include <set>

#include "hdea/harness.hpp"

using namespace hdea;

namespace {

ExperimentConfig tiny_nk() {
    ExperimentConfig c;
    c.n = 12;
    c.pop_size = 6;
    c.hdea_generations = 5;
    return c;
}

RunRecord rec(std::size_t k, Algorithm a, double f, std::size_t run = 0) {
    RunRecord r;
    r.n = 10;
    r.k = k;
    r.algorithm = a;
    r.run_id = run;
    r.best_fitness = f;
    return r;
}

} // namespace

TEST(ExperimentConfig, DefaultsAndDerivedGenerations) {
    const ExperimentConfig c;
    EXPECT_EQ(c.hea_generations(), 40000u);
    EXPECT_EQ(c.evaluations_for(Algorithm::hdea), 100u + 40000u);
    EXPECT_EQ(c.evaluations_for(Algorithm::hea), 50u + 40000u);
    EXPECT_EQ(c.grid_size(), 1200u);
    EXPECT_NO_THROW(c.validate());
}

TEST(ExperimentConfig, ValidationNamesTheField) {
    auto c = tiny_nk();
    c.k_sweep = {12};
    try {
        c.validate();
        FAIL();
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("k_sweep"), std::string::npos);
    }
    c = tiny_nk();
    c.pop_size = 0;
    EXPECT_THROW(c.validate(), ParameterError);
    c = tiny_nk();
    c.task = Task::rbnk;
    c.r = 8;
    EXPECT_THROW(c.validate(), ParameterError);
}

TEST(RunExperiment, DefaultGridProducesTwelveHundredRecords) {
    const auto records = run_experiment(tiny_nk());
    ASSERT_EQ(records.size(), 1200u);
    std::set<std::tuple<std::size_t, Algorithm, std::size_t, std::size_t>> cells;
    for (const auto& r : records) {
        cells.insert({r.k, r.algorithm, r.landscape_id, r.run_id});
        EXPECT_GE(r.best_fitness, 0.0);
        EXPECT_LE(r.best_fitness, 1.0);
        EXPECT_EQ(r.generations, r.algorithm == Algorithm::hdea ? 5u : 10u);
        EXPECT_EQ(r.evaluations, r.algorithm == Algorithm::hdea ? 12u + 10u : 6u + 10u);
    }
    EXPECT_EQ(cells.size(), 1200u);
    EXPECT_TRUE(std::is_sorted(records.begin(), records.end(), canonical_less));
}

TEST(RunExperiment, DeterministicAndIndependentOfWorkerCount) {
    auto c = tiny_nk();
    c.k_sweep = {0, 3};
    c.hdea_generations = 200;
    const auto serial = run_experiment(c);
    EXPECT_EQ(serial, run_experiment(c));
    ExperimentOptions opts;
    opts.workers = 4;
    EXPECT_EQ(serial, run_experiment(c, opts));
}

TEST(RunExperiment, AddingKValuesLeavesExistingCellsUntouched) {
    auto c = tiny_nk();
    c.k_sweep = {2};
    c.landscapes = 2;
    c.runs_per_landscape = 2;
    const auto small = run_experiment(c);
    c.k_sweep = {1, 2, 4};
    const auto big = run_experiment(c);
    std::vector<RunRecord> k2;
    for (const auto& r : big)
        if (r.k == 2) k2.push_back(r);
    EXPECT_EQ(k2, small);
}

TEST(RunExperiment, AlgorithmsShareLandscapesButNotPopulationSeeds) {
    const auto a = make_artifacts(tiny_nk(), 4, 3);
    const auto b = make_artifacts(tiny_nk(), 4, 3);
    EXPECT_EQ(a.landscape, b.landscape);
    EXPECT_NE(run_seed(1, 4, 3, 0, Algorithm::hdea), run_seed(1, 4, 3, 0, Algorithm::hea));
    EXPECT_NE(landscape_seed(1, 4, 3), landscape_seed(1, 4, 2));
}

TEST(RunExperiment, KZeroSingleRunFindsBruteForceOptimum) {
    ExperimentConfig c;
    c.n = 10;
    c.k_sweep = {0};
    c.landscapes = 1;
    c.runs_per_landscape = 1;
    c.algorithms = {Algorithm::hea};
    c.hdea_generations = 20000;
    const auto records = run_experiment(c);
    ASSERT_EQ(records.size(), 1u);
    const double opt = brute_force_optimum(make_artifacts(c, 0, 0).landscape).fitness;
    EXPECT_EQ(records[0].best_fitness, opt);
}

TEST(RunExperiment, RbnkGridRuns) {
    ExperimentConfig c;
    c.task = Task::rbnk;
    c.n = 5;
    c.r = 12;
    c.t_cycles = 8;
    c.trials = 2;
    c.pop_size = 6;
    c.hdea_generations = 20;
    c.landscapes = 2;
    c.runs_per_landscape = 2;
    c.k_sweep = {0, 2};
    ExperimentAudit audit;
    ExperimentOptions opts;
    opts.audit = &audit;
    const auto records = run_experiment(c, opts);
    ASSERT_EQ(records.size(), 16u);
    for (const auto& r : records) {
        EXPECT_EQ(r.task, Task::rbnk);
        EXPECT_EQ(r.r, 12u);
        EXPECT_EQ(r.b, 2u);
    }
    EXPECT_EQ(audit.runs, 16u);
    EXPECT_EQ(audit.diploids_checked, 8u * (6u + 20u));
    EXPECT_EQ(audit.averaging_violations, 0u);
}

TEST(RunExperiment, ProgressFiresOncePerCell) {
    auto c = tiny_nk();
    c.k_sweep = {0, 1};
    std::vector<CellProgress> seen;
    ExperimentOptions opts;
    opts.on_cell_done = [&](const CellProgress& p) { seen.push_back(p); };
    run_experiment(c, opts);
    EXPECT_EQ(seen.size(), 4u);
    for (const auto& p : seen) EXPECT_EQ(p.runs, 100u);
}

TEST(Summarize, SingleRecordPerCellSkipsTest) {
    const auto s = summarize({rec(0, Algorithm::hdea, 0.6), rec(0, Algorithm::hea, 0.4)});
    ASSERT_EQ(s.rows.size(), 1u);
    const auto& row = s.rows[0];
    EXPECT_TRUE(row.comparable);
    EXPECT_FALSE(row.tested);
    EXPECT_FALSE(row.significant);
    EXPECT_EQ(row.hdea->mean, 0.6);
    EXPECT_EQ(row.hdea->max, 0.6);
    EXPECT_EQ(row.hdea->min, 0.6);
}

TEST(Summarize, EqualFitnessEverywhereGivesPOne) {
    std::vector<RunRecord> rs;
    for (std::size_t i = 0; i < 5; ++i) {
        rs.push_back(rec(2, Algorithm::hdea, 0.7, i));
        rs.push_back(rec(2, Algorithm::hea, 0.7, i));
    }
    const auto s = summarize(rs);
    EXPECT_EQ(s.rows[0].hdea->mean, 0.7);
    EXPECT_TRUE(s.rows[0].tested);
    EXPECT_EQ(s.rows[0].test.p, 1.0);
    EXPECT_FALSE(s.rows[0].significant);
}

TEST(Summarize, HandBuiltTable) {
    // k=3: hdea {0.5, 0.7} -> mean 0.6; hea {0.2, 0.4} -> mean 0.3
    const auto s = summarize({rec(3, Algorithm::hdea, 0.5), rec(3, Algorithm::hea, 0.2), rec(3, Algorithm::hdea, 0.7, 1),
                              rec(3, Algorithm::hea, 0.4, 1)});
    const auto& row = s.rows[0];
    EXPECT_DOUBLE_EQ(row.hdea->mean, 0.6);
    EXPECT_DOUBLE_EQ(row.hea->mean, 0.3);
    EXPECT_EQ(row.hdea->max, 0.7);
    EXPECT_EQ(row.hea->min, 0.2);
    // both variances 0.02: t = 0.3 / sqrt(0.02) = 2.1213..., df = 2
    EXPECT_NEAR(row.test.t, 0.3 / std::sqrt(0.02), 1e-12);
    EXPECT_NEAR(row.test.df, 2.0, 1e-12);
}

TEST(Summarize, MissingAlgorithmMarkedIncomparable) {
    const auto s = summarize({rec(1, Algorithm::hdea, 0.5), rec(1, Algorithm::hdea, 0.6, 1), rec(4, Algorithm::hea, 0.5),
                              rec(4, Algorithm::hdea, 0.5)});
    ASSERT_EQ(s.rows.size(), 2u);
    EXPECT_EQ(s.rows[0].k, 1u);
    EXPECT_FALSE(s.rows[0].comparable);
    EXPECT_FALSE(s.rows[0].tested);
    EXPECT_FALSE(s.rows[0].hea.has_value());
    EXPECT_TRUE(s.rows[1].comparable);
}

TEST(EffectiveLandscape, IdentityPairingIsRawFitness) {
    for (std::size_t n = 1; n <= 10; ++n) {
        const auto L = generate_nk(n, std::min<std::size_t>(n - 1, 2), n);
        const auto eff = effective_landscape(L, identity_pairing(n));
        ASSERT_EQ(eff.size(), std::size_t{1} << n);
        for (const auto& [g, f] : eff) EXPECT_EQ(f, evaluate_nk(L, g));
    }
}

TEST(EffectiveLandscape, TwoLocusValleyPairing) {
    // hand-set genome fitnesses: f(00)=0.5, f(01)=0.1, f(10)=0.3, f(11)=0.9.
    // Locus 0 reads (g0,g1) and locus 1 reads (g1,g0); locus 1's table is
    // the transpose so that each genome scores exactly its hand-set value.
    const NkLandscape L(2, 1, 0, {{1}, {0}}, {{0.5, 0.1, 0.3, 0.9}, {0.5, 0.3, 0.1, 0.9}});
    const auto g = [](const char* s) { return BitGenome::from_string(s); };
    ASSERT_DOUBLE_EQ(evaluate_nk(L, g("01")), 0.1);
    ASSERT_DOUBLE_EQ(evaluate_nk(L, g("11")), 0.9);

    std::map<BitGenome, BitGenome> pairing = identity_pairing(2);
    pairing[g("01")] = g("11");
    pairing[g("11")] = g("01");
    const auto eff = effective_landscape(L, pairing);
    EXPECT_DOUBLE_EQ(eff.at(g("01")), 0.5);
    EXPECT_DOUBLE_EQ(eff.at(g("11")), 0.5);
    EXPECT_DOUBLE_EQ(eff.at(g("00")), 0.5);
    EXPECT_DOUBLE_EQ(eff.at(g("10")), 0.3);
}

TEST(EffectiveLandscape, PairedGenomesShareValue) {
    const auto L = generate_nk(6, 2, 3);
    auto pairing = identity_pairing(6);
    const auto a = BitGenome::from_string("010101"), b = BitGenome::from_string("111000");
    pairing[a] = b;
    pairing[b] = a;
    const auto eff = effective_landscape(L, pairing);
    EXPECT_EQ(eff.at(a), eff.at(b));
}

TEST(EffectiveLandscape, PartialPairingThrows) {
    const auto L = generate_nk(3, 1, 3);
    auto pairing = identity_pairing(3);
    pairing.erase(BitGenome::from_string("101"));
    EXPECT_THROW(effective_landscape(L, pairing), ParameterError);
}
