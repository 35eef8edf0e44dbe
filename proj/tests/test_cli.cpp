// Drives the hdea executable end to end through its subcommands.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdea/io.hpp"
#include "hdea/nk_landscape.hpp"
#include "hdea/rbn.hpp"

namespace fs = std::filesystem;
using namespace hdea;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::current_path() / "cli_work" / ::testing::UnitTest::GetInstance()->current_test_info()->name();
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }

    fs::path path(const std::string& name) const { return dir_ / name; }

    Result run(const std::string& args, const std::string& env = "") const {
        const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd = env + " " + std::string(HDEA_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream os(path(name), std::ios::binary);
        os << text;
    }

    fs::path dir_;
};

const char* tiny_config =
    "task = nk\n"
    "n = 12\n"
    "pop_size = 6\n"
    "hdea_generations = 5\n"
    "k_sweep = 0,2,4,6,8,10\n"
    "master_seed = 3\n";

} // namespace

TEST_F(Cli, HelpForEverySubcommand) {
    for (const auto* sub : {"gen-landscape", "run", "compare", "plot"}) {
        const auto r = run(std::string(sub) + " --help");
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
    }
}

TEST_F(Cli, GenLandscapeWritesReadableDeterministicFile) {
    ASSERT_EQ(run("gen-landscape --task nk --n 50 --k 6 --seed 1 --out " + path("a.nk").string()).code, 0);
    ASSERT_EQ(run("gen-landscape --task nk --n 50 --k 6 --seed 1 --out " + path("b.nk").string()).code, 0);
    EXPECT_EQ(slurp(path("a.nk")), slurp(path("b.nk")));
    const auto L = load_nk(path("a.nk").string());
    EXPECT_EQ(L, generate_nk(50, 6, 1));
}

TEST_F(Cli, GenLandscapeRejectsKOutOfRange) {
    const auto r = run("gen-landscape --task nk --n 50 --k 50 --seed 1 --out " + path("x.nk").string());
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("--k"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("x.nk")));
}

TEST_F(Cli, GenLandscapeRbnkWritesTraitMap) {
    ASSERT_EQ(run("gen-landscape --task rbnk --n 10 --k 2 --r 40 --seed 5 --out " + path("l.nk").string()).code, 0);
    std::ifstream is(path("l.nk.traits"));
    const auto [traits, r] = read_traits(is);
    EXPECT_EQ(r, 40u);
    EXPECT_EQ(traits.size(), 10u);
}

TEST_F(Cli, RunWritesFullGridAndIsRepeatable) {
    write("c.cfg", tiny_config);
    ASSERT_EQ(run("run --config " + path("c.cfg").string() + " --out " + path("r1.csv").string() + " --workers 1").code, 0);
    ASSERT_EQ(run("run --config " + path("c.cfg").string() + " --out " + path("r2.csv").string() + " --workers 3").code, 0);
    const auto text = slurp(path("r1.csv"));
    EXPECT_EQ(text, slurp(path("r2.csv")));
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1201);
    EXPECT_EQ(text.substr(0, text.find('\n')), results_header);
}

TEST_F(Cli, DryRunWritesNothing) {
    write("c.cfg", tiny_config);
    const auto r = run("run --dry-run --config " + path("c.cfg").string() + " --out " + path("r.csv").string());
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("1200 runs"), std::string::npos);
    EXPECT_NE(r.out.find("evaluations"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("r.csv")));
}

TEST_F(Cli, EmitConfigWritesEveryKey) {
    write("c.cfg", tiny_config);
    ASSERT_EQ(run("run --dry-run --config " + path("c.cfg").string() + " --emit-config " + path("full.cfg").string()).code, 0);
    const auto text = slurp(path("full.cfg"));
    for (const auto* key : {"task", "n", "r", "b", "t_cycles", "trials", "pop_size", "hdea_generations", "algorithms",
                            "crossover", "replacement", "mutation", "landscapes", "runs_per_landscape", "master_seed",
                            "k_sweep"})
        EXPECT_NE(text.find(std::string("\n") + key + " = "), std::string::npos) << key;
}

TEST_F(Cli, BadConfigNamesTheField) {
    write("bad.cfg", "pop_size = many\n");
    const auto r = run("run --config " + path("bad.cfg").string() + " --out " + path("r.csv").string());
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("pop_size"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("r.csv")));
}

TEST_F(Cli, SeedEnvironmentVariableOverridesConfig) {
    write("c.cfg", tiny_config);
    ASSERT_EQ(run("run --config " + path("c.cfg").string() + " --out " + path("a.csv").string()).code, 0);
    ASSERT_EQ(run("run --config " + path("c.cfg").string() + " --out " + path("b.csv").string(), "HDEA_SEED=4").code, 0);
    std::string with4 = tiny_config;
    with4.replace(with4.find("master_seed = 3"), 15, "master_seed = 4");
    write("e.cfg", with4);
    ASSERT_EQ(run("run --config " + path("e.cfg").string() + " --out " + path("c.csv").string()).code, 0);
    EXPECT_NE(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(slurp(path("b.csv")), slurp(path("c.csv")));
}

TEST_F(Cli, CompareIdenticalSamplesGivesNoSignificance) {
    std::string csv = std::string(results_header) + "\n";
    for (int k : {0, 4})
        for (const auto* alg : {"hdea", "hea"})
            for (int run_id = 0; run_id < 3; ++run_id)
                csv += "nk,10," + std::to_string(k) + ",0,0," + alg + ",0," + std::to_string(run_id) + ",5,20,0." +
                       std::to_string(5 + run_id) + "\n";
    write("r.csv", csv);
    ASSERT_EQ(run("compare --results " + path("r.csv").string() + " --out " + path("s.json").string()).code, 0);
    std::ifstream is(path("s.json"));
    const auto s = read_summary(is);
    ASSERT_EQ(s.rows.size(), 2u);
    for (const auto& row : s.rows) {
        EXPECT_TRUE(row.tested);
        EXPECT_EQ(row.test.p, 1.0);
        EXPECT_FALSE(row.significant);
    }
}

TEST_F(Cli, CompareMissingAlgorithmIsIncomparable) {
    write("r.csv", std::string(results_header) + "\nnk,10,0,0,0,hdea,0,0,5,20,0.5\nnk,10,0,0,0,hdea,0,1,5,20,0.6\n");
    ASSERT_EQ(run("compare --results " + path("r.csv").string() + " --out " + path("s.json").string()).code, 0);
    std::ifstream is(path("s.json"));
    const auto s = read_summary(is);
    ASSERT_EQ(s.rows.size(), 1u);
    EXPECT_FALSE(s.rows[0].comparable);
    EXPECT_FALSE(s.rows[0].tested);
}

TEST_F(Cli, CompareGoldenSmallResults) {
    // hdea {0.1..0.5}, hea {0.3..0.7}: the integer golden pair scaled by 1/10,
    // so t = -2, df = 8, p = 0.080516237957262671 (scale invariant)
    std::string csv = std::string(results_header) + "\n";
    for (int i = 0; i < 5; ++i) csv += "nk,10,6,0,0,hdea,0," + std::to_string(i) + ",5,20,0." + std::to_string(1 + i) + "\n";
    for (int i = 0; i < 5; ++i) csv += "nk,10,6,0,0,hea,0," + std::to_string(i) + ",10,20,0." + std::to_string(3 + i) + "\n";
    write("r.csv", csv);
    ASSERT_EQ(run("compare --results " + path("r.csv").string() + " --out " + path("s.json").string()).code, 0);
    std::ifstream is(path("s.json"));
    const auto s = read_summary(is);
    ASSERT_EQ(s.rows.size(), 1u);
    const auto& row = s.rows[0];
    EXPECT_NEAR(row.hdea->mean, 0.3, 1e-15);
    EXPECT_NEAR(row.hea->mean, 0.5, 1e-15);
    EXPECT_EQ(row.hdea->max, 0.5);
    EXPECT_EQ(row.hea->min, 0.3);
    EXPECT_NEAR(row.test.t, -2.0, 1e-10 * 2.0);
    EXPECT_NEAR(row.test.df, 8.0, 1e-10 * 8.0);
    EXPECT_NEAR(row.test.p, 0.080516237957262671, 1e-10 * 0.0805);
    EXPECT_FALSE(row.significant);
}

TEST_F(Cli, CompareMalformedRowReportsRowNumber) {
    write("r.csv", std::string(results_header) + "\nnk,10,0,0,0,hdea,0,0,5,20,0.5\nnk,10,zero,0,0,hea,0,0,5,20,0.5\n");
    const auto r = run("compare --results " + path("r.csv").string() + " --out " + path("s.json").string());
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(path("s.json")));
}

TEST_F(Cli, FullPipelineProducesPlot) {
    write("c.cfg", tiny_config);
    ASSERT_EQ(run("run --config " + path("c.cfg").string() + " --out " + path("r.csv").string()).code, 0);
    ASSERT_EQ(run("compare --results " + path("r.csv").string() + " --out " + path("s.json").string()).code, 0);
    ASSERT_EQ(run("plot --summary " + path("s.json").string() + " --out " + path("a.svg").string()).code, 0);
    ASSERT_EQ(run("plot --summary " + path("s.json").string() + " --out " + path("b.svg").string()).code, 0);
    const auto svg = slurp(path("a.svg"));
    EXPECT_EQ(svg, slurp(path("b.svg")));
    std::size_t polylines = 0, bars = 0;
    for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++polylines;
    for (auto p = svg.find("class=\"errorbar\""); p != std::string::npos; p = svg.find("class=\"errorbar\"", p + 1)) ++bars;
    EXPECT_EQ(polylines, 2u);
    EXPECT_EQ(bars, 12u);
}

TEST_F(Cli, PlotRejectsEmptySummary) {
    write("s.json", R"({"format":"hdea-summary-1","task":"nk","n":10,"r":0,"b":0,"alpha":0.05,"rows":[]})");
    const auto r = run("plot --summary " + path("s.json").string() + " --out " + path("p.svg").string());
    EXPECT_NE(r.code, 0);
    EXPECT_FALSE(fs::exists(path("p.svg")));
}
