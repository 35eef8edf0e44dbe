// hdea: command-line driver for landscape generation, experiment runs,
// statistical comparison and plotting.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "hdea/hdea.hpp"

namespace {

using namespace hdea;

/// Failure already reported to the user; carries the exit code.
struct Exit {
    int code;
};

[[noreturn]] void fail_flag(const std::string& flag, const std::string& why) {
    std::cerr << "error: " << flag << ": " << why << '\n';
    throw Exit{2};
}

/// Writes through a temporary so a failed command never leaves a partial file.
void write_file(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp + " for writing");
        os << contents;
        if (!os.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// --- gen-landscape -------------------------------------------------------

struct GenArgs {
    std::string task = "nk";
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t r = 100;
    std::uint64_t seed = 1;
    std::string out;
    std::string traits_out;
};

int cmd_gen_landscape(const GenArgs& a) {
    const auto task = parse_task(a.task);
    if (!task) fail_flag("--task", "expected nk or rbnk");
    if (a.n == 0) fail_flag("--n", "must be positive");
    if (a.k > a.n - 1) fail_flag("--k", "must satisfy k <= n-1 (n=" + std::to_string(a.n) + ")");
    if (a.k > NkLandscape::max_k) fail_flag("--k", "exceeds supported maximum of 24");
    if (*task == Task::rbnk && a.n > a.r) fail_flag("--r", "must satisfy n <= r");

    const auto landscape = generate_nk(a.n, a.k, a.seed);
    std::ostringstream os;
    write_nk(os, landscape);
    write_file(a.out, os.str());

    if (*task == Task::rbnk) {
        const auto traits = assign_traits(a.r, a.n, trait_seed(a.seed));
        std::ostringstream ts;
        write_traits(ts, traits, a.r);
        write_file(a.traits_out.empty() ? a.out + ".traits" : a.traits_out, ts.str());
    }
    return 0;
}

// --- run -----------------------------------------------------------------

struct RunArgs {
    std::string config;
    std::string out;
    std::string emit_config;
    std::size_t workers = 0;
    bool dry_run = false;
    bool verbose = false;
};

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail_flag("--config", "cannot open " + path);
    try {
        auto cfg = read_config(is);
        if (const char* env = std::getenv("HDEA_SEED"); env != nullptr && *env != '\0') {
            std::uint64_t seed = 0;
            if (!text::parse_u64(env, seed)) fail_flag("HDEA_SEED", "expected a 64-bit unsigned integer");
            cfg.master_seed = seed;
        }
        return cfg;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << path << ": " << e.what() << '\n';
    } catch (const ParseError& e) {
        std::cerr << "error: " << path << ": " << e.what() << '\n';
    } catch (const ParameterError& e) {
        std::cerr << "error: " << path << ": " << e.what() << '\n';
    }
    throw Exit{2};
}

int cmd_run(const RunArgs& a) {
    const auto cfg = load_config(a.config);

    if (!a.emit_config.empty()) {
        std::ostringstream os;
        write_config(os, cfg);
        write_file(a.emit_config, os.str());
    }

    if (a.dry_run) {
        std::uint64_t total = 0;
        std::cout << "grid: " << cfg.k_sweep.size() << " k values x " << cfg.landscapes << " landscapes x "
                  << cfg.runs_per_landscape << " runs x " << cfg.algorithms.size() << " algorithms = "
                  << cfg.grid_size() << " runs\n";
        for (auto alg : cfg.algorithms) {
            const auto per_run = cfg.evaluations_for(alg);
            const auto runs = cfg.k_sweep.size() * cfg.landscapes * cfg.runs_per_landscape;
            total += per_run * runs;
            const auto init = alg == Algorithm::hdea ? 2 * cfg.pop_size : cfg.pop_size;
            std::cout << to_string(alg) << ": " << cfg.generations_for(alg) << " generations, " << per_run
                      << " evaluations per run (" << init << " at initialisation)\n";
        }
        std::cout << "total evaluations: " << total << '\n';
        return 0;
    }

    if (a.out.empty()) fail_flag("--out", "required unless --dry-run is given");

    ExperimentOptions opts;
    opts.workers = a.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.workers;
    if (a.verbose) {
        opts.on_cell_done = [](const CellProgress& p) {
            std::cerr << "k=" << p.k << ' ' << to_string(p.algorithm) << ": " << p.runs
                      << " runs, mean best " << text::sig17(p.mean_best) << '\n';
        };
        std::cerr << "initialisation evaluations: hdea " << 2 * cfg.pop_size << ", hea " << cfg.pop_size << '\n';
    }
    const auto records = run_experiment(cfg, opts);
    std::ostringstream os;
    write_results(os, records);
    write_file(a.out, os.str());
    return 0;
}

// --- compare -------------------------------------------------------------

struct CompareArgs {
    std::string results;
    std::string out;
    double alpha = 0.05;
};

void print_summary(std::ostream& os, const ComparisonSummary& s) {
    os << "k      hdea_mean            hea_mean             t          p          sig\n";
    for (const auto& row : s.rows) {
        char line[256];
        auto m = [](const std::optional<CellStats>& c) { return c ? c->mean : std::numeric_limits<double>::quiet_NaN(); };
        if (!row.comparable) {
            std::snprintf(line, sizeof line, "%-6zu %-20.12g %-20.12g incomparable\n", row.k, m(row.hdea), m(row.hea));
        } else if (!row.tested) {
            std::snprintf(line, sizeof line, "%-6zu %-20.12g %-20.12g not tested\n", row.k, m(row.hdea), m(row.hea));
        } else {
            std::snprintf(line, sizeof line, "%-6zu %-20.12g %-20.12g %-10.4g %-10.4g %s\n", row.k, m(row.hdea),
                          m(row.hea), row.test.t, row.test.p, row.significant ? "yes" : "no");
        }
        os << line;
    }
}

int cmd_compare(const CompareArgs& a) {
    if (!(a.alpha > 0.0 && a.alpha < 1.0)) fail_flag("--alpha", "must lie in (0,1)");
    std::ifstream is(a.results, std::ios::binary);
    if (!is) fail_flag("--results", "cannot open " + a.results);
    std::vector<RunRecord> records;
    try {
        records = read_results(is);
    } catch (const ParseError& e) {
        std::cerr << "error: " << a.results << ": malformed row at " << e.what() << '\n';
        throw Exit{2};
    }
    if (records.empty()) {
        std::cerr << "error: " << a.results << ": no result rows\n";
        throw Exit{2};
    }
    const auto summary = summarize(records, a.alpha);
    std::ostringstream os;
    write_summary(os, summary);
    write_file(a.out, os.str());
    print_summary(std::cout, summary);
    return 0;
}

// --- plot ----------------------------------------------------------------

struct PlotArgs {
    std::string summary;
    std::string out;
    std::string title;
};

int cmd_plot(const PlotArgs& a) {
    std::istringstream is(read_file(a.summary));
    ComparisonSummary s;
    try {
        s = read_summary(is);
    } catch (const std::exception& e) {
        std::cerr << "error: " << a.summary << ": " << e.what() << '\n';
        throw Exit{2};
    }
    if (s.rows.empty()) {
        std::cerr << "error: " << a.summary << ": summary is empty\n";
        throw Exit{2};
    }
    auto spec = make_plot_spec(s);
    if (!a.title.empty()) spec.title = a.title;
    write_file(a.out, render_svg(spec));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Haploid-diploid vs haploid evolutionary algorithms on NK and RBNK landscapes"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-landscape", "Generate an NK landscape (and an RBNK trait map)");
    gen_cmd->add_option("--task", gen.task, "nk or rbnk")->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Number of loci / traits")->required();
    gen_cmd->add_option("--k", gen.k, "Epistatic degree")->required();
    gen_cmd->add_option("--r", gen.r, "Network size (rbnk)")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Generation seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Landscape output path")->required();
    gen_cmd->add_option("--traits-out", gen.traits_out, "Trait map output path (rbnk; default <out>.traits)");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run the comparison grid described by a config file");
    run_cmd->add_option("--config", run.config, "Experiment config file")->required();
    run_cmd->add_option("--out", run.out, "Results CSV path");
    run_cmd->add_option("--workers", run.workers, "Worker threads (default: available processors)");
    run_cmd->add_flag("--dry-run", run.dry_run, "Print grid size and evaluation budget, write nothing");
    run_cmd->add_flag("--verbose,-v", run.verbose, "Per-cell progress on stderr");
    run_cmd->add_option("--emit-config", run.emit_config, "Write the fully expanded config to this path");

    CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand("compare", "Summarise a results file and run Welch t-tests per k");
    cmp_cmd->add_option("--results", cmp.results, "Results CSV")->required();
    cmp_cmd->add_option("--out", cmp.out, "Summary output path")->required();
    cmp_cmd->add_option("--alpha", cmp.alpha, "Significance level")->capture_default_str();

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("plot", "Render a summary as an SVG chart");
    plot_cmd->add_option("--summary", plot.summary, "Summary file")->required();
    plot_cmd->add_option("--out", plot.out, "SVG output path")->required();
    plot_cmd->add_option("--title", plot.title, "Chart title");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) return cmd_gen_landscape(gen);
        if (run_cmd->parsed()) return cmd_run(run);
        if (cmp_cmd->parsed()) return cmd_compare(cmp);
        if (plot_cmd->parsed()) return cmd_plot(plot);
    } catch (const Exit& e) {
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
