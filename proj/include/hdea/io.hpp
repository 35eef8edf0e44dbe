#pragma once

/// @file io.hpp
/// @brief Experiment config, results table and summary file formats.
///
/// Config: one `key = value` per line, '#' starts a comment. Lists are
/// comma-separated. Keys not present keep their defaults; writing a config
/// back emits every key.
///
/// Results: comma-separated with a fixed header, best_fitness printed with 17
/// significant digits.
///
/// Summary: JSON mirroring ComparisonSummary. Non-finite numbers are stored
/// as the strings "inf", "-inf" and "nan".

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "harness.hpp"
#include "text.hpp"

namespace hdea {

/// Config problem tied to a specific key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// --- config ---------------------------------------------------------------

namespace detail {

inline const char* replacement_name(Replacement r) { return r == Replacement::worst ? "worst" : "worst_if_better"; }
inline const char* mutation_name(MutationMode m) { return m == MutationMode::exact_one ? "exact_one" : "per_locus"; }

inline std::size_t config_size(const std::string& key, std::string_view v) {
    std::uint64_t x = 0;
    if (!text::parse_u64(text::trim(v), x)) throw ConfigError(key, "expected a non-negative integer, got '" + std::string(v) + "'");
    return static_cast<std::size_t>(x);
}

inline bool config_bool(const std::string& key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + std::string(v) + "'");
}

} // namespace detail

inline void write_config(std::ostream& os, const ExperimentConfig& c) {
    os << "# hdea experiment config\n";
    os << "task = " << to_string(c.task) << '\n';
    os << "n = " << c.n << '\n';
    os << "r = " << c.r << '\n';
    os << "b = " << c.b << '\n';
    os << "t_cycles = " << c.t_cycles << '\n';
    os << "trials = " << c.trials << '\n';
    os << "pop_size = " << c.pop_size << '\n';
    os << "hdea_generations = " << c.hdea_generations << '\n';
    os << "# hea_generations = " << c.hea_generations() << " (always 2 x hdea_generations)\n";
    os << "algorithms = ";
    for (std::size_t i = 0; i < c.algorithms.size(); ++i) os << (i ? "," : "") << to_string(c.algorithms[i]);
    os << '\n';
    os << "crossover = " << (c.crossover ? "true" : "false") << '\n';
    os << "replacement = " << detail::replacement_name(c.replacement) << '\n';
    os << "mutation = " << detail::mutation_name(c.mutation) << '\n';
    os << "landscapes = " << c.landscapes << '\n';
    os << "runs_per_landscape = " << c.runs_per_landscape << '\n';
    os << "master_seed = " << c.master_seed << '\n';
    os << "k_sweep = ";
    for (std::size_t i = 0; i < c.k_sweep.size(); ++i) os << (i ? "," : "") << c.k_sweep[i];
    os << '\n';
}

inline ExperimentConfig read_config(std::istream& is) {
    ExperimentConfig c;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        auto body = text::trim(std::string_view(line).substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key(text::trim(body.substr(0, eq)));
        const auto value = text::trim(body.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError(key, "given more than once");

        if (key == "task") {
            auto t = parse_task(value);
            if (!t) throw ConfigError(key, "expected nk or rbnk");
            c.task = *t;
        } else if (key == "n") {
            c.n = detail::config_size(key, value);
        } else if (key == "r") {
            c.r = detail::config_size(key, value);
        } else if (key == "b") {
            c.b = detail::config_size(key, value);
        } else if (key == "t_cycles") {
            c.t_cycles = detail::config_size(key, value);
        } else if (key == "trials") {
            c.trials = detail::config_size(key, value);
        } else if (key == "pop_size") {
            c.pop_size = detail::config_size(key, value);
        } else if (key == "hdea_generations") {
            c.hdea_generations = detail::config_size(key, value);
        } else if (key == "algorithms") {
            c.algorithms.clear();
            for (auto part : text::split(value, ',')) {
                auto a = parse_algorithm(text::trim(part));
                if (!a) throw ConfigError(key, "unknown algorithm '" + std::string(text::trim(part)) + "'");
                c.algorithms.push_back(*a);
            }
        } else if (key == "crossover") {
            c.crossover = detail::config_bool(key, value);
        } else if (key == "replacement") {
            if (value == "worst") c.replacement = Replacement::worst;
            else if (value == "worst_if_better") c.replacement = Replacement::worst_if_better;
            else throw ConfigError(key, "expected worst or worst_if_better");
        } else if (key == "mutation") {
            if (value == "exact_one") c.mutation = MutationMode::exact_one;
            else if (value == "per_locus") c.mutation = MutationMode::per_locus;
            else throw ConfigError(key, "expected exact_one or per_locus");
        } else if (key == "landscapes") {
            c.landscapes = detail::config_size(key, value);
        } else if (key == "runs_per_landscape") {
            c.runs_per_landscape = detail::config_size(key, value);
        } else if (key == "master_seed") {
            std::uint64_t s = 0;
            if (!text::parse_u64(value, s)) throw ConfigError(key, "expected a 64-bit unsigned integer");
            c.master_seed = s;
        } else if (key == "k_sweep") {
            c.k_sweep.clear();
            for (auto part : text::split(value, ',')) c.k_sweep.push_back(detail::config_size(key, part));
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    c.validate();
    return c;
}

// --- results table --------------------------------------------------------

inline constexpr const char* results_header =
    "task,n,k,r,b,algorithm,landscape_id,run_id,generations,evaluations,best_fitness";

inline void write_results(std::ostream& os, const std::vector<RunRecord>& records) {
    os << results_header << '\n';
    for (const auto& r : records) {
        os << to_string(r.task) << ',' << r.n << ',' << r.k << ',' << r.r << ',' << r.b << ','
           << to_string(r.algorithm) << ',' << r.landscape_id << ',' << r.run_id << ',' << r.generations << ','
           << r.evaluations << ',' << text::sig17(r.best_fitness) << '\n';
    }
}

/// Throws ParseError carrying the 1-based line number (the header is line 1).
inline std::vector<RunRecord> read_results(std::istream& is) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line) || text::trim(line) != results_header)
        throw ParseError(1, "expected results header '" + std::string(results_header) + "'");
    std::vector<RunRecord> records;
    while (std::getline(is, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto f = text::split(text::trim(line), ',');
        if (f.size() != 11) throw ParseError(line_no, "expected 11 fields, got " + std::to_string(f.size()));
        RunRecord r;
        auto task = parse_task(f[0]);
        auto alg = parse_algorithm(f[5]);
        if (!task) throw ParseError(line_no, "bad task '" + std::string(f[0]) + "'");
        if (!alg) throw ParseError(line_no, "bad algorithm '" + std::string(f[5]) + "'");
        r.task = *task;
        r.algorithm = *alg;
        std::uint64_t v[9] = {};
        const int int_fields[] = {1, 2, 3, 4, 6, 7, 8, 9};
        for (int j = 0; j < 8; ++j)
            if (!text::parse_u64(f[int_fields[j]], v[j])) throw ParseError(line_no, "bad integer in field " + std::to_string(int_fields[j] + 1));
        r.n = v[0];
        r.k = v[1];
        r.r = v[2];
        r.b = v[3];
        r.landscape_id = v[4];
        r.run_id = v[5];
        r.generations = v[6];
        r.evaluations = v[7];
        if (!text::parse_double(f[10], r.best_fitness) || !(r.best_fitness >= 0.0 && r.best_fitness <= 1.0))
            throw ParseError(line_no, "best_fitness must be a number in [0,1]");
        records.push_back(r);
    }
    return records;
}

// --- summary --------------------------------------------------------------

namespace detail {

inline nlohmann::json number_json(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double json_number(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw std::runtime_error("summary: bad number '" + s + "'");
    }
    return j.get<double>();
}

inline nlohmann::json cell_json(const std::optional<CellStats>& c) {
    if (!c) return nullptr;
    return {{"count", c->count}, {"mean", c->mean}, {"max", c->max}, {"min", c->min}};
}

inline std::optional<CellStats> json_cell(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return CellStats{j.at("count").get<std::size_t>(), j.at("mean").get<double>(), j.at("max").get<double>(),
                     j.at("min").get<double>()};
}

} // namespace detail

inline nlohmann::json summary_to_json(const ComparisonSummary& s) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : s.rows) {
        nlohmann::json jr{{"k", row.k},
                          {"hdea", detail::cell_json(row.hdea)},
                          {"hea", detail::cell_json(row.hea)},
                          {"comparable", row.comparable},
                          {"tested", row.tested}};
        if (row.tested) {
            jr["t"] = detail::number_json(row.test.t);
            jr["df"] = detail::number_json(row.test.df);
            jr["p"] = detail::number_json(row.test.p);
        } else {
            jr["t"] = nullptr;
            jr["df"] = nullptr;
            jr["p"] = nullptr;
        }
        jr["significant"] = row.significant;
        rows.push_back(std::move(jr));
    }
    return {{"format", "hdea-summary-1"},
            {"task", to_string(s.task)},
            {"n", s.n},
            {"r", s.r},
            {"b", s.b},
            {"alpha", s.alpha},
            {"rows", std::move(rows)}};
}

inline ComparisonSummary summary_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "hdea-summary-1") throw std::runtime_error("summary: unknown format");
    ComparisonSummary s;
    auto task = parse_task(j.at("task").get<std::string>());
    if (!task) throw std::runtime_error("summary: bad task");
    s.task = *task;
    s.n = j.at("n").get<std::size_t>();
    s.r = j.at("r").get<std::size_t>();
    s.b = j.at("b").get<std::size_t>();
    s.alpha = j.at("alpha").get<double>();
    for (const auto& jr : j.at("rows")) {
        KComparison row;
        row.k = jr.at("k").get<std::size_t>();
        row.hdea = detail::json_cell(jr.at("hdea"));
        row.hea = detail::json_cell(jr.at("hea"));
        row.comparable = jr.at("comparable").get<bool>();
        row.tested = jr.at("tested").get<bool>();
        if (row.tested) {
            row.test.t = detail::json_number(jr.at("t"));
            row.test.df = detail::json_number(jr.at("df"));
            row.test.p = detail::json_number(jr.at("p"));
        }
        row.significant = jr.at("significant").get<bool>();
        s.rows.push_back(row);
    }
    return s;
}

inline void write_summary(std::ostream& os, const ComparisonSummary& s) { os << summary_to_json(s).dump(2) << '\n'; }

inline ComparisonSummary read_summary(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
        return summary_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("summary: ") + e.what());
    }
}

} // namespace hdea
