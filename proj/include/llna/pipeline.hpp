#pragma once

#include "automaton.hpp"
#include "classify.hpp"
#include "corpus.hpp"
#include "features.hpp"
#include "fetch.hpp"
#include "measure.hpp"
#include "rulesearch.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace llna {

/// Raw text of a manifest entry: remote sources go through the cache, local
/// paths are read relative to the manifest directory. Boilerplate is
/// stripped either way.
inline FetchedDocument load_entry_text(const CorpusManifest& manifest, const ManifestEntry& entry,
                                       DocumentCache& cache) {
    if (auto id = remote_identifier(entry.source)) return cache.fetch(*id);
    std::filesystem::path p(entry.source);
    if (p.is_relative()) p = manifest.base_dir / p;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorKind::dependency, "cannot read source " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return strip_boilerplate(ss.str());
}

/// Traditional-measurement feature vector: <k>, <k^2>, <k^3>, <C>, <L>, gamma.
inline std::vector<double> baseline_vector(const NetworkMeasurements& m) {
    return {m.avg_degree, m.avg_hier_degree_2, m.avg_hier_degree_3, m.avg_clustering, m.avg_path_length, m.gamma};
}

inline const std::vector<std::string>& baseline_column_names() {
    static const std::vector<std::string> names{"avg_degree", "avg_hier_degree_2", "avg_hier_degree_3",
                                                "avg_clustering", "avg_path_length", "gamma"};
    return names;
}

/// Per-column z-score across rows (population std). Constant columns and
/// non-finite entries (an unreliable power-law fit) become 0.
inline void zscore_columns(std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return;
    const std::size_t d = rows.front().size();
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0, n = 0.0;
        for (const auto& r : rows)
            if (std::isfinite(r.at(j))) mean += r[j], n += 1.0;
        if (n > 0.0) mean /= n;
        double var = 0.0;
        for (const auto& r : rows)
            if (std::isfinite(r[j])) var += (r[j] - mean) * (r[j] - mean);
        const double sd = n > 0.0 ? std::sqrt(var / n) : 0.0;
        for (auto& r : rows) r[j] = sd > 0.0 && std::isfinite(r[j]) ? (r[j] - mean) / sd : 0.0;
    }
}

struct LabeledNetwork {
    std::string id;
    std::string author;
    Network network;
};

struct EvolutionConfig {
    Rule rule = Rule::parse("B024678-S4");
    std::size_t steps = 400;
    std::uint64_t seed = 1;
    double alive_probability = 0.5;
    FeatureConfig features;
};

/// LLNA feature vectors for a set of documents. Each document's initial
/// state is seeded from the global seed and its id, the same way the sweep
/// seeds it, and the Lempel-Ziv histogram range is shared by the whole set.
inline std::vector<LabeledSample> llna_samples(std::span<const LabeledNetwork> docs, const EvolutionConfig& cfg) {
    std::vector<MeasurementSamples> samples;
    samples.reserve(docs.size());
    SpatioTemporalMatrix m;
    for (const auto& d : docs) {
        const auto seed = SweepDataset::document_seed(cfg.seed, d.id);
        Automaton(d.network).evolve(cfg.rule, cfg.steps, init_state(d.network.node_count(), seed, cfg.alive_probability),
                                    seed, m);
        samples.push_back(sample_measurements(m, cfg.features));
    }
    const double lz_max = max_lempel_ziv(samples);
    std::vector<LabeledSample> out;
    for (std::size_t i = 0; i < docs.size(); ++i)
        out.push_back({histogram_features(samples[i], cfg.features, lz_max).values(), docs[i].author, docs[i].id});
    return out;
}

/// z-scored baseline vectors for a set of documents.
inline std::vector<LabeledSample> baseline_samples(std::span<const LabeledNetwork> docs, unsigned threads = 0) {
    std::vector<std::vector<double>> rows;
    for (const auto& d : docs) rows.push_back(baseline_vector(measure(d.network, threads)));
    zscore_columns(rows);
    std::vector<LabeledSample> out;
    for (std::size_t i = 0; i < docs.size(); ++i) out.push_back({std::move(rows[i]), docs[i].author, docs[i].id});
    return out;
}

}  // namespace llna
