#pragma once

#include "automaton.hpp"
#include "bits.hpp"
#include "error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llna {

// ---------------------------------------------------------------------------
// Per-sequence measurements

/// Binary Shannon entropy of the symbol frequencies, in bits.
inline double shannon_entropy(BitView bits) {
    if (bits.empty()) throw Error(ErrorKind::usage, "entropy of an empty sequence");
    const double p1 = static_cast<double>(bits.count()) / static_cast<double>(bits.size());
    const double p0 = 1.0 - p1;
    double h = 0.0;
    if (p0 > 0) h -= p0 * std::log2(p0);
    if (p1 > 0) h -= p1 * std::log2(p1);
    return h;
}

/// Exhaustive left-to-right block parse: each block is the shortest prefix
/// of the remaining input that is not already a block. Calls
/// `on_block(start, length)` per block and returns the length of the
/// trailing incomplete piece (a prefix that repeats an earlier block).
template <typename OnBlock>
std::size_t lz_parse(BitView bits, OnBlock&& on_block) {
    // binary trie of the blocks seen so far; node 0 is the root
    thread_local std::vector<std::array<std::uint32_t, 2>> trie;
    trie.assign(1, {0, 0});
    trie.reserve(bits.size() + 1);
    std::uint32_t node = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const unsigned b = bits[i];
        if (std::uint32_t child = trie[node][b]; child != 0) {
            node = child;
            continue;
        }
        trie[node][b] = static_cast<std::uint32_t>(trie.size());
        trie.push_back({0, 0});
        on_block(start, i + 1 - start);
        node = 0;
        start = i + 1;
    }
    return bits.size() - start;
}

struct LzDecomposition {
    std::vector<BitString> blocks;  // pairwise distinct
    BitString tail;                 // incomplete repeat at the end, possibly empty

    std::size_t block_count() const noexcept { return blocks.size(); }
};

inline LzDecomposition lz_decompose(BitView bits) {
    if (bits.empty()) throw Error(ErrorKind::usage, "cannot decompose an empty sequence");
    LzDecomposition d;
    auto slice = [&](std::size_t start, std::size_t len) {
        BitString s(len);
        for (std::size_t k = 0; k < len; ++k) s.set(k, bits[start + k]);
        return s;
    };
    const std::size_t tail = lz_parse(bits, [&](std::size_t start, std::size_t len) {
        d.blocks.push_back(slice(start, len));
    });
    d.tail = slice(bits.size() - tail, tail);
    return d;
}

/// Lempel-Ziv complexity g * log2(l) / l, with g the number of blocks.
inline double lz_complexity(BitView bits) {
    const std::size_t l = bits.size();
    if (l < 2) throw Error(ErrorKind::usage, "Lempel-Ziv complexity needs a sequence of length >= 2");
    std::size_t g = 0;
    lz_parse(bits, [&](std::size_t, std::size_t) { ++g; });
    return static_cast<double>(g) * std::log2(static_cast<double>(l)) / static_cast<double>(l);
}

// ---------------------------------------------------------------------------
// Similarity between binary sequences

enum class Similarity { jaccard3w, sokal_michener, sokal_sneath };

inline std::string_view to_string(Similarity s) {
    switch (s) {
        case Similarity::jaccard3w: return "jaccard3w";
        case Similarity::sokal_michener: return "sokal_michener";
        case Similarity::sokal_sneath: return "sokal_sneath";
    }
    return "sokal_michener";
}

inline Similarity parse_similarity(std::string_view s) {
    std::string k(s);
    std::replace(k.begin(), k.end(), '-', '_');
    if (k == "jaccard3w" || k == "3w_jaccard") return Similarity::jaccard3w;
    if (k == "sokal_michener") return Similarity::sokal_michener;
    if (k == "sokal_sneath") return Similarity::sokal_sneath;
    throw Error(ErrorKind::usage, "unknown similarity measure '" + std::string(s) + "'");
}

struct MatchCounts {
    std::size_t a = 0;  // (1,1)
    std::size_t b = 0;  // (0,1)
    std::size_t c = 0;  // (1,0)
    std::size_t d = 0;  // (0,0)
};

inline MatchCounts match_counts(BitView p, BitView q) {
    if (p.size() != q.size()) throw Error(ErrorKind::usage, "similarity of sequences with different lengths");
    MatchCounts m;
    const auto pw = p.words(), qw = q.words();
    for (std::size_t w = 0; w < pw.size(); ++w) {
        m.a += static_cast<std::size_t>(std::popcount(pw[w] & qw[w]));
        m.b += static_cast<std::size_t>(std::popcount(~pw[w] & qw[w]));
        m.c += static_cast<std::size_t>(std::popcount(pw[w] & ~qw[w]));
    }
    m.d = p.size() - m.a - m.b - m.c;
    return m;
}

/// Similarity in [0,1]; a vanishing denominator (no ones anywhere) yields 1.
inline double binary_similarity(BitView p, BitView q, Similarity measure) {
    if (p.empty()) throw Error(ErrorKind::usage, "similarity of empty sequences");
    const auto [a, b, c, d] = match_counts(p, q);
    std::size_t num = 0, den = 0;
    switch (measure) {
        case Similarity::jaccard3w:
            num = 3 * a;
            den = 3 * a + b + c;
            break;
        case Similarity::sokal_michener:
            num = a + d;
            den = a + b + c + d;
            break;
        case Similarity::sokal_sneath:
            num = a;
            den = a + 2 * b + 2 * c;
            break;
    }
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

/// Similarities between network snapshots at times t and t+delta.
inline std::vector<double> spatial_distribution(const SpatioTemporalMatrix& m, std::size_t delta, Similarity measure) {
    if (delta < 1 || delta > m.steps())
        throw Error(ErrorKind::usage, "spatial lag must lie in [1, T], got " + std::to_string(delta));
    std::vector<double> out;
    out.reserve(m.times() - delta);
    for (std::size_t t = 0; t + delta < m.times(); ++t)
        out.push_back(binary_similarity(m.column(t), m.column(t + delta), measure));
    return out;
}

/// Similarities between the time series of rows i and i+lag (degree order).
inline std::vector<double> temporal_distribution(const SpatioTemporalMatrix& m, std::size_t lag, Similarity measure) {
    if (lag < 1 || lag >= m.nodes())
        throw Error(ErrorKind::usage, "temporal lag must lie in [1, N-1], got " + std::to_string(lag));
    std::vector<double> out;
    out.reserve(m.nodes() - lag);
    for (std::size_t i = 0; i + lag < m.nodes(); ++i) out.push_back(binary_similarity(m.row(i), m.row(i + lag), measure));
    return out;
}

/// Equal-width histogram over [lo, hi], normalized to relative frequencies.
/// Values at or beyond hi go to the last bin, values below lo to the first.
inline std::vector<double> histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
    if (bins < 1) throw Error(ErrorKind::usage, "histogram needs at least one bin");
    if (!(hi > lo)) throw Error(ErrorKind::usage, "histogram range must have hi > lo");
    std::vector<double> h(bins, 0.0);
    if (values.empty()) return h;
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        const double pos = std::floor((v - lo) / width);
        const auto b = pos < 0 ? std::size_t{0} : std::min(bins - 1, static_cast<std::size_t>(pos));
        h[b] += 1.0;
    }
    for (auto& x : h) x /= static_cast<double>(values.size());
    return h;
}

// ---------------------------------------------------------------------------
// Feature vectors

enum class FeaturePart : unsigned { entropy = 1, lempel_ziv = 2, spatial = 4, temporal = 8 };

/// Subset of the four measurement distributions.
class FeatureParts {
  public:
    constexpr FeatureParts() = default;
    constexpr explicit FeatureParts(unsigned mask) : mask_(mask & 15U) {}
    static constexpr FeatureParts all() { return FeatureParts(15U); }

    constexpr bool has(FeaturePart p) const noexcept { return mask_ & static_cast<unsigned>(p); }
    constexpr FeatureParts with(FeaturePart p) const noexcept { return FeatureParts(mask_ | static_cast<unsigned>(p)); }
    constexpr unsigned mask() const noexcept { return mask_; }
    constexpr bool empty() const noexcept { return mask_ == 0; }

    /// Comma-separated subset of muS, muL, muH, muV (or "all").
    static FeatureParts parse(std::string_view text) {
        if (text == "all") return all();
        FeatureParts p;
        while (!text.empty()) {
            const auto comma = text.find(',');
            const auto item = text.substr(0, comma);
            if (item == "muS")
                p = p.with(FeaturePart::entropy);
            else if (item == "muL")
                p = p.with(FeaturePart::lempel_ziv);
            else if (item == "muH")
                p = p.with(FeaturePart::spatial);
            else if (item == "muV")
                p = p.with(FeaturePart::temporal);
            else
                throw Error(ErrorKind::usage, "unknown feature part '" + std::string(item) + "' (muS, muL, muH, muV)");
            if (comma == std::string_view::npos) break;
            text.remove_prefix(comma + 1);
        }
        if (p.empty()) throw Error(ErrorKind::usage, "no feature parts selected");
        return p;
    }

    std::string to_string() const {
        std::string s;
        for (auto [part, name] : {std::pair{FeaturePart::entropy, "muS"}, {FeaturePart::lempel_ziv, "muL"},
                                  {FeaturePart::spatial, "muH"}, {FeaturePart::temporal, "muV"}})
            if (has(part)) s += (s.empty() ? "" : ",") + std::string(name);
        return s;
    }

    friend constexpr bool operator==(FeatureParts, FeatureParts) = default;

  private:
    unsigned mask_ = 0;
};

struct FeatureConfig {
    FeatureParts parts = FeatureParts::all();
    std::size_t spatial_lag = 1;   // delta
    std::size_t temporal_lag = 1;  // Delta
    Similarity measure = Similarity::sokal_michener;
    std::size_t entropy_bins = 40;
    std::size_t lz_bins = 40;
    std::size_t spatial_bins = 30;
    std::size_t temporal_bins = 30;
};

/// Raw per-node / per-time samples of the selected measurements.
struct MeasurementSamples {
    std::vector<double> entropy;     // one per node
    std::vector<double> lempel_ziv;  // one per node
    std::vector<double> spatial;     // one per time pair
    std::vector<double> temporal;    // one per row pair
};

inline MeasurementSamples sample_measurements(const SpatioTemporalMatrix& m, const FeatureConfig& cfg) {
    if (m.nodes() == 0) throw Error(ErrorKind::usage, "empty spatio-temporal matrix");
    MeasurementSamples s;
    const bool want_entropy = cfg.parts.has(FeaturePart::entropy);
    const bool want_lz = cfg.parts.has(FeaturePart::lempel_ziv);
    if (want_entropy) s.entropy.reserve(m.nodes());
    if (want_lz) s.lempel_ziv.reserve(m.nodes());
    if (want_entropy || want_lz)
        for (std::size_t r = 0; r < m.nodes(); ++r) {
            const auto row = m.row(r);
            if (want_entropy) s.entropy.push_back(shannon_entropy(row));
            if (want_lz) s.lempel_ziv.push_back(lz_complexity(row));
        }
    if (cfg.parts.has(FeaturePart::spatial)) s.spatial = spatial_distribution(m, cfg.spatial_lag, cfg.measure);
    if (cfg.parts.has(FeaturePart::temporal)) s.temporal = temporal_distribution(m, cfg.temporal_lag, cfg.measure);
    return s;
}

/// Largest Lempel-Ziv value across a group of samples: the normalization
/// constant for the Lempel-Ziv histogram range.
inline double max_lempel_ziv(std::span<const MeasurementSamples> group) {
    double mx = 0.0;
    for (const auto& s : group)
        for (double v : s.lempel_ziv) mx = std::max(mx, v);
    return mx;
}

struct FeatureVector {
    FeatureParts parts;
    std::vector<double> entropy_hist;   // 40 bins over [0, 1]
    std::vector<double> lz_hist;        // 40 bins over [0, lz_max]
    std::vector<double> spatial_hist;   // 30 bins over [0, 1]
    std::vector<double> temporal_hist;  // 30 bins over [0, 1]

    /// Concatenation of the selected histograms in the order S, L, H, V.
    std::vector<double> values() const {
        std::vector<double> v;
        for (const auto* h : {&entropy_hist, &lz_hist, &spatial_hist, &temporal_hist}) v.insert(v.end(), h->begin(), h->end());
        return v;
    }

    std::size_t size() const noexcept {
        return entropy_hist.size() + lz_hist.size() + spatial_hist.size() + temporal_hist.size();
    }
};

inline FeatureVector histogram_features(const MeasurementSamples& s, const FeatureConfig& cfg, double lz_max) {
    FeatureVector f;
    f.parts = cfg.parts;
    if (cfg.parts.has(FeaturePart::entropy)) f.entropy_hist = histogram(s.entropy, cfg.entropy_bins, 0.0, 1.0);
    if (cfg.parts.has(FeaturePart::lempel_ziv))
        f.lz_hist = histogram(s.lempel_ziv, cfg.lz_bins, 0.0, lz_max > 0.0 ? lz_max : 1.0);
    if (cfg.parts.has(FeaturePart::spatial)) f.spatial_hist = histogram(s.spatial, cfg.spatial_bins, 0.0, 1.0);
    if (cfg.parts.has(FeaturePart::temporal)) f.temporal_hist = histogram(s.temporal, cfg.temporal_bins, 0.0, 1.0);
    return f;
}

/// Feature vector of a single matrix. The Lempel-Ziv range is normalized by
/// this matrix's own maximum; use histogram_features with a group-level
/// maximum when comparing documents.
inline FeatureVector assemble(const SpatioTemporalMatrix& m, const FeatureConfig& cfg) {
    const auto s = sample_measurements(m, cfg);
    return histogram_features(s, cfg, max_lempel_ziv(std::span(&s, 1)));
}

/// Column names for a feature CSV: muS_00.., muL_00.., muH_00.., muV_00...
inline std::vector<std::string> feature_column_names(const FeatureConfig& cfg) {
    std::vector<std::string> names;
    auto add = [&](const char* prefix, std::size_t n) {
        char buf[32];
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%s_%02zu", prefix, i);
            names.emplace_back(buf);
        }
    };
    if (cfg.parts.has(FeaturePart::entropy)) add("muS", cfg.entropy_bins);
    if (cfg.parts.has(FeaturePart::lempel_ziv)) add("muL", cfg.lz_bins);
    if (cfg.parts.has(FeaturePart::spatial)) add("muH", cfg.spatial_bins);
    if (cfg.parts.has(FeaturePart::temporal)) add("muV", cfg.temporal_bins);
    return names;
}

}  // namespace llna
