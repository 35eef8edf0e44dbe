#pragma once

/// @file nk_landscape.hpp
/// @brief Tuneable NK fitness landscapes over binary genomes.
///
/// Each of the n loci owns a random neighbourhood of k other loci and a table
/// of 2^(k+1) fitness contributions. The contribution of locus i is looked up
/// with an index whose most significant bit is the allele at i, followed by
/// the neighbours' alleles in stored order. Genome fitness is the mean of the
/// n contributions.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace hdea {

/// Ordered sequence of binary alleles.
struct BitGenome {
    std::vector<std::uint8_t> bits;

    BitGenome() = default;
    explicit BitGenome(std::size_t n) : bits(n, 0) {}
    explicit BitGenome(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

    /// Parses a string of '0'/'1' characters, first character is locus 0.
    static BitGenome from_string(std::string_view s) {
        BitGenome g(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '0' && s[i] != '1') throw ParameterError("bit string may only contain 0 and 1");
            g.bits[i] = static_cast<std::uint8_t>(s[i] - '0');
        }
        return g;
    }

    static BitGenome random(std::size_t n, Rng& rng) {
        BitGenome g(n);
        for (auto& b : g.bits) b = coin_flip(rng) ? 1 : 0;
        return g;
    }

    std::size_t size() const noexcept { return bits.size(); }
    std::size_t locus_count() const noexcept { return bits.size(); }

    std::string to_string() const {
        std::string s(bits.size(), '0');
        for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
        return s;
    }

    friend bool operator==(const BitGenome&, const BitGenome&) = default;
    friend auto operator<=>(const BitGenome&, const BitGenome&) = default;
};

inline std::size_t hamming_distance(const BitGenome& a, const BitGenome& b) {
    if (a.size() != b.size()) throw ParameterError("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a.bits[i] != b.bits[i];
    return d;
}

class NkLandscape {
public:
    /// Largest supported epistatic degree; tables hold 2^(k+1) doubles.
    static constexpr std::size_t max_k = 24;

    NkLandscape(std::size_t n, std::size_t k, std::uint64_t seed,
                std::vector<std::vector<std::size_t>> neighbors,
                std::vector<std::vector<double>> tables)
        : n_(n), k_(k), seed_(seed), neighbors_(std::move(neighbors)), tables_(std::move(tables)) {
        validate();
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::vector<std::size_t>>& neighbors() const noexcept { return neighbors_; }
    const std::vector<std::vector<double>>& tables() const noexcept { return tables_; }

    /// Table index for locus i under the given alleles.
    std::size_t table_index(std::size_t locus, std::span<const std::uint8_t> alleles) const noexcept {
        std::size_t idx = alleles[locus] ? 1 : 0;
        for (auto nb : neighbors_[locus]) idx = (idx << 1) | (alleles[nb] ? 1 : 0);
        return idx;
    }

    /// Mean per-locus contribution; alleles.size() must equal n (unchecked).
    double evaluate_unchecked(std::span<const std::uint8_t> alleles) const noexcept {
        double sum = 0.0;
        for (std::size_t i = 0; i < n_; ++i) sum += tables_[i][table_index(i, alleles)];
        return sum / static_cast<double>(n_);
    }

    friend bool operator==(const NkLandscape&, const NkLandscape&) = default;

private:
    void validate() const {
        if (n_ == 0) throw ParameterError("NK landscape: n must be positive");
        if (k_ > n_ - 1) throw ParameterError("NK landscape: k must satisfy k <= n-1");
        if (k_ > max_k) throw ParameterError("NK landscape: k exceeds supported maximum of 24");
        if (neighbors_.size() != n_ || tables_.size() != n_)
            throw ParameterError("NK landscape: expected one neighbor row and one table per locus");
        const std::size_t width = std::size_t{1} << (k_ + 1);
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& row = neighbors_[i];
            if (row.size() != k_) throw ParameterError("NK landscape: neighbor row " + std::to_string(i) + " must have k entries");
            for (std::size_t a = 0; a < row.size(); ++a) {
                if (row[a] >= n_ || row[a] == i)
                    throw ParameterError("NK landscape: neighbor of locus " + std::to_string(i) + " out of range or self");
                for (std::size_t b = 0; b < a; ++b)
                    if (row[a] == row[b]) throw ParameterError("NK landscape: duplicate neighbor at locus " + std::to_string(i));
            }
            if (tables_[i].size() != width)
                throw ParameterError("NK landscape: table " + std::to_string(i) + " must have 2^(k+1) entries");
            for (double f : tables_[i])
                if (!(f >= 0.0 && f <= 1.0)) throw ParameterError("NK landscape: table entries must lie in [0,1]");
        }
    }

    std::size_t n_;
    std::size_t k_;
    std::uint64_t seed_;
    std::vector<std::vector<std::size_t>> neighbors_;
    std::vector<std::vector<double>> tables_;
};

/// Draws a landscape: neighbours uniformly without replacement from the other
/// n-1 loci, table entries uniformly from [0,1). Pure function of (n, k, seed).
inline NkLandscape generate_nk(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (n == 0) throw ParameterError("generate_nk: n must be positive");
    if (k > n - 1) throw ParameterError("generate_nk: k must satisfy k <= n-1");
    if (k > NkLandscape::max_k) throw ParameterError("generate_nk: k exceeds supported maximum of 24");

    Rng rng = make_rng(seed);
    std::vector<std::vector<std::size_t>> neighbors(n);
    std::vector<std::vector<double>> tables(n);
    std::vector<std::size_t> others;
    others.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        others.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) others.push_back(j);
        // partial Fisher-Yates
        for (std::size_t a = 0; a < k; ++a) {
            const std::size_t pick = a + uniform_index(rng, others.size() - a);
            std::swap(others[a], others[pick]);
        }
        neighbors[i].assign(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k));

        tables[i].resize(std::size_t{1} << (k + 1));
        for (auto& f : tables[i]) f = uniform01(rng);
    }
    return NkLandscape(n, k, seed, std::move(neighbors), std::move(tables));
}

inline double evaluate_nk(const NkLandscape& landscape, const BitGenome& genome) {
    if (genome.size() != landscape.n())
        throw ParameterError("evaluate_nk: genome length " + std::to_string(genome.size()) +
                             " does not match landscape n " + std::to_string(landscape.n()));
    return landscape.evaluate_unchecked(genome.bits);
}

struct Optimum {
    BitGenome genome;
    double fitness = 0.0;
};

/// Exhaustive search over all 2^n genomes. Ties resolve to the
/// lexicographically smallest genome (locus 0 most significant).
inline Optimum brute_force_optimum(const NkLandscape& landscape) {
    const std::size_t n = landscape.n();
    if (n > 24) throw RefusalError("brute_force_optimum: refusing to enumerate 2^n genomes for n > 24");

    BitGenome g(n);
    Optimum best{g, -1.0};
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < count; ++x) {
        for (std::size_t i = 0; i < n; ++i) g.bits[i] = static_cast<std::uint8_t>((x >> (n - 1 - i)) & 1U);
        const double f = landscape.evaluate_unchecked(g.bits);
        if (f > best.fitness) {
            best.fitness = f;
            best.genome = g;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Landscape file format
//
//   nk-landscape 1
//   n <n>
//   k <k>
//   seed <seed>
//   neighbors <i> <j1> ... <jk>      (one line per locus, 0-based)
//   table <i> <f0> ... <f(2^(k+1)-1)> (shortest round-trip decimal)
//
// Blank lines and lines starting with '#' are ignored.

inline void write_nk(std::ostream& os, const NkLandscape& L) {
    os << "nk-landscape 1\n";
    os << "n " << L.n() << "\nk " << L.k() << "\nseed " << L.seed() << '\n';
    for (std::size_t i = 0; i < L.n(); ++i) {
        os << "neighbors " << i;
        for (auto j : L.neighbors()[i]) os << ' ' << j;
        os << '\n';
    }
    for (std::size_t i = 0; i < L.n(); ++i) {
        os << "table " << i;
        for (double f : L.tables()[i]) os << ' ' << text::shortest(f);
        os << '\n';
    }
}

namespace detail {

/// Reads the next non-blank, non-comment line split into words.
inline bool next_record(std::istream& is, std::size_t& line_no, std::string& buf,
                        std::vector<std::string_view>& out) {
    while (std::getline(is, buf)) {
        ++line_no;
        const auto t = text::trim(buf);
        if (t.empty() || t.front() == '#') continue;
        out = text::words(buf);
        return true;
    }
    return false;
}

inline std::uint64_t expect_keyed_u64(std::istream& is, std::size_t& line_no, std::string& buf,
                                      std::string_view key) {
    std::vector<std::string_view> w;
    if (!next_record(is, line_no, buf, w)) throw ParseError(line_no, "unexpected end of file, expected '" + std::string(key) + "'");
    std::uint64_t v = 0;
    if (w.size() != 2 || w[0] != key || !text::parse_u64(w[1], v))
        throw ParseError(line_no, "expected '" + std::string(key) + " <integer>'");
    return v;
}

} // namespace detail

inline NkLandscape read_nk(std::istream& is) {
    std::size_t line_no = 0;
    std::string buf;
    std::vector<std::string_view> w;
    if (!detail::next_record(is, line_no, buf, w) || w.size() != 2 || w[0] != "nk-landscape" || w[1] != "1")
        throw ParseError(line_no, "expected header 'nk-landscape 1'");
    const auto n = static_cast<std::size_t>(detail::expect_keyed_u64(is, line_no, buf, "n"));
    const auto k = static_cast<std::size_t>(detail::expect_keyed_u64(is, line_no, buf, "k"));
    const auto seed = detail::expect_keyed_u64(is, line_no, buf, "seed");
    if (n == 0 || k > n - 1 || k > NkLandscape::max_k) throw ParseError(line_no, "invalid n/k combination");

    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!detail::next_record(is, line_no, buf, w)) throw ParseError(line_no, "unexpected end of file in neighbors");
        std::uint64_t idx = 0;
        if (w.size() != k + 2 || w[0] != "neighbors" || !text::parse_u64(w[1], idx) || idx != i)
            throw ParseError(line_no, "expected 'neighbors " + std::to_string(i) + "' followed by k indices");
        for (std::size_t a = 0; a < k; ++a) {
            std::uint64_t j = 0;
            if (!text::parse_u64(w[a + 2], j)) throw ParseError(line_no, "bad neighbor index");
            neighbors[i].push_back(static_cast<std::size_t>(j));
        }
    }
    const std::size_t width = std::size_t{1} << (k + 1);
    std::vector<std::vector<double>> tables(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!detail::next_record(is, line_no, buf, w)) throw ParseError(line_no, "unexpected end of file in tables");
        std::uint64_t idx = 0;
        if (w.size() != width + 2 || w[0] != "table" || !text::parse_u64(w[1], idx) || idx != i)
            throw ParseError(line_no, "expected 'table " + std::to_string(i) + "' followed by 2^(k+1) values");
        tables[i].resize(width);
        for (std::size_t a = 0; a < width; ++a)
            if (!text::parse_double(w[a + 2], tables[i][a])) throw ParseError(line_no, "bad table value");
    }
    try {
        return NkLandscape(n, k, seed, std::move(neighbors), std::move(tables));
    } catch (const ParameterError& e) {
        throw ParseError(line_no, e.what());
    }
}

inline void save_nk(const std::string& path, const NkLandscape& L) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_nk(os, L);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline NkLandscape load_nk(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_nk(is);
}

} // namespace hdea
