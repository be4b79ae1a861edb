#pragma once

#include "automaton.hpp"
#include "classify.hpp"
#include "corpus.hpp"
#include "features.hpp"
#include "graph.hpp"
#include "random.hpp"
#include "rule.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

namespace llna {

struct RuleScore {
    std::uint32_t rule_index = 0;
    double mean = 0.0;  // mean cross-validated accuracy
    double std = 0.0;

    friend bool operator==(const RuleScore&, const RuleScore&) = default;
};

struct SweepConfig {
    std::size_t steps = 400;  // T
    FeatureConfig features{.parts = FeatureParts(static_cast<unsigned>(FeaturePart::entropy) |
                                                 static_cast<unsigned>(FeaturePart::lempel_ziv))};
    CVConfig cv{.k_folds = 5, .knn_k = 1, .repetitions = 10, .seed = 1, .metric = Metric::euclidean};
    std::uint64_t seed = 1;  // initial states and CV shuffles derive from this
    double alive_probability = 0.5;
    std::size_t chunk_size = 1024;
    LemmaMode lemma_mode = LemmaMode::partial;  // recorded only; networks arrive prebuilt
    bool allow_validation = false;
    unsigned threads = 0;  // 0: hardware concurrency
    std::vector<std::uint32_t> rules;  // empty: all 2^18 rules in index order
};

struct SweepDocument {
    std::string id;
    std::string author;
    DatasetRole role = DatasetRole::rule_selection;
    Network network;
};

/// Documents prepared for repeated evolution: one engine and one fixed
/// initial configuration per document, shared by every rule.
class SweepDataset {
  public:
    SweepDataset(std::vector<SweepDocument> docs, const SweepConfig& cfg) : docs_(std::move(docs)) {
        if (docs_.empty()) throw Error(ErrorKind::usage, "sweep over an empty dataset");
        if (!cfg.allow_validation)
            for (const auto& d : docs_)
                if (d.role == DatasetRole::validation)
                    throw Error(ErrorKind::usage, "document '" + d.id +
                                                      "' belongs to the validation set; rule selection must use "
                                                      "rule-selection documents (override with allow_validation)");
        for (const auto& d : docs_) {
            engines_.emplace_back(d.network);
            initial_.push_back(init_state(d.network.node_count(), document_seed(cfg.seed, d.id), cfg.alive_probability));
        }
    }

    static std::uint64_t document_seed(std::uint64_t seed, const std::string& id) { return derive_seed(seed, id); }

    std::size_t size() const noexcept { return docs_.size(); }
    const SweepDocument& document(std::size_t i) const { return docs_[i]; }
    const Automaton& engine(std::size_t i) const { return engines_[i]; }
    const StateVector& initial_state(std::size_t i) const { return initial_[i]; }

  private:
    std::vector<SweepDocument> docs_;
    std::vector<Automaton> engines_;
    std::vector<StateVector> initial_;
};

/// Reusable buffers for evaluating rules on one thread.
struct SweepWorkspace {
    SpatioTemporalMatrix matrix;
    std::vector<MeasurementSamples> samples;
    std::vector<LabeledSample> labeled;
};

/// CV seed of a rule: a function of the global seed and the rule index only.
inline std::uint64_t rule_cv_seed(std::uint64_t seed, std::uint32_t rule_index) {
    return derive_seed(seed, 0x5eed0000'00000000ULL | rule_index);
}

/// Feature vectors of every document under `rule`, with the Lempel-Ziv range
/// normalized by the group maximum.
inline void rule_features(const SweepDataset& data, Rule rule, const SweepConfig& cfg, SweepWorkspace& ws) {
    const auto n = data.size();
    ws.samples.resize(n);
    ws.labeled.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
        const auto& doc = data.document(d);
        data.engine(d).evolve(rule, cfg.steps, data.initial_state(d), SweepDataset::document_seed(cfg.seed, doc.id),
                              ws.matrix);
        ws.samples[d] = sample_measurements(ws.matrix, cfg.features);
    }
    const double lz_max = max_lempel_ziv(ws.samples);
    for (std::size_t d = 0; d < n; ++d) {
        const auto& doc = data.document(d);
        ws.labeled[d].features = histogram_features(ws.samples[d], cfg.features, lz_max).values();
        ws.labeled[d].author = doc.author;
        ws.labeled[d].document_id = doc.id;
    }
}

inline RuleScore evaluate_rule(const SweepDataset& data, Rule rule, const SweepConfig& cfg, SweepWorkspace& ws) {
    rule_features(data, rule, cfg, ws);
    CVConfig cv = cfg.cv;
    cv.seed = rule_cv_seed(cfg.seed, rule.index());
    const auto result = cross_validate(ws.labeled, cv);
    return {rule.index(), result.mean, result.std};
}

inline RuleScore evaluate_rule(const SweepDataset& data, Rule rule, const SweepConfig& cfg) {
    SweepWorkspace ws;
    return evaluate_rule(data, rule, cfg, ws);
}

/// Hash of everything that determines sweep output.
inline std::uint64_t sweep_config_hash(const SweepDataset& data, const SweepConfig& cfg) {
    std::ostringstream s;
    s << "T=" << cfg.steps << ";parts=" << cfg.features.parts.mask() << ";dl=" << cfg.features.spatial_lag
      << ";DL=" << cfg.features.temporal_lag << ";m=" << to_string(cfg.features.measure)
      << ";bins=" << cfg.features.entropy_bins << ',' << cfg.features.lz_bins << ',' << cfg.features.spatial_bins << ','
      << cfg.features.temporal_bins << ";folds=" << cfg.cv.k_folds << ";k=" << cfg.cv.knn_k
      << ";reps=" << cfg.cv.repetitions << ";metric=" << to_string(cfg.cv.metric) << ";seed=" << cfg.seed
      << ";p=" << cfg.alive_probability << ";lemma=" << to_string(cfg.lemma_mode) << ";rules=";
    std::uint64_t rules_hash = cfg.rules.size();
    for (auto r : cfg.rules) rules_hash = splitmix64(rules_hash ^ r);
    s << rules_hash;
    for (std::size_t d = 0; d < data.size(); ++d) {
        const auto& doc = data.document(d);
        std::uint64_t h = doc.network.node_count();
        for (auto [u, v] : doc.network.edges()) h = splitmix64(h ^ (std::uint64_t{u} << 32 | v));
        s << ";doc=" << doc.id << '|' << doc.author << '|' << h;
    }
    return fnv1a64(s.str());
}

// ---------------------------------------------------------------------------
// Checkpoints
//
// Binary, little-endian: "LLNACKPT", u32 version, u64 config hash, u64 total
// rule count, u32 range count, then per range u64 begin, u64 end (positions in
// the rule list) followed by that range's (u32 index, f64 mean, f64 std).

struct Checkpoint {
    std::uint64_t config_hash = 0;
    std::uint64_t total = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;  // half-open, disjoint, ascending
    std::vector<RuleScore> scores;                                 // scores for the ranges, in order

    std::uint64_t completed() const {
        std::uint64_t c = 0;
        for (auto [b, e] : ranges) c += e - b;
        return c;
    }
};

namespace detail {

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw Error(ErrorKind::data, "truncated checkpoint");
    return v;
}

}  // namespace detail

inline void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::data, "cannot write checkpoint " + tmp.string());
        out.write("LLNACKPT", 8);
        detail::put<std::uint32_t>(out, 1);
        detail::put(out, cp.config_hash);
        detail::put(out, cp.total);
        detail::put(out, static_cast<std::uint32_t>(cp.ranges.size()));
        std::size_t k = 0;
        for (auto [b, e] : cp.ranges) {
            detail::put(out, b);
            detail::put(out, e);
            for (auto p = b; p < e; ++p, ++k) {
                detail::put(out, cp.scores[k].rule_index);
                detail::put(out, cp.scores[k].mean);
                detail::put(out, cp.scores[k].std);
            }
        }
        if (!out) throw Error(ErrorKind::data, "failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::dependency, "cannot open checkpoint " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "LLNACKPT", 8) != 0) throw Error(ErrorKind::data, "not a sweep checkpoint: " + path.string());
    if (detail::get<std::uint32_t>(in) != 1) throw Error(ErrorKind::data, "unsupported checkpoint version");
    Checkpoint cp;
    cp.config_hash = detail::get<std::uint64_t>(in);
    cp.total = detail::get<std::uint64_t>(in);
    const auto nr = detail::get<std::uint32_t>(in);
    std::uint64_t last_end = 0;
    for (std::uint32_t r = 0; r < nr; ++r) {
        const auto b = detail::get<std::uint64_t>(in);
        const auto e = detail::get<std::uint64_t>(in);
        if (b < last_end || e < b || e > cp.total) throw Error(ErrorKind::data, "checkpoint ranges overlap or exceed total");
        last_end = e;
        cp.ranges.emplace_back(b, e);
        for (auto p = b; p < e; ++p) {
            RuleScore s;
            s.rule_index = detail::get<std::uint32_t>(in);
            s.mean = detail::get<double>(in);
            s.std = detail::get<double>(in);
            cp.scores.push_back(s);
        }
    }
    return cp;
}

// ---------------------------------------------------------------------------
// Sweep driver

struct SweepOptions {
    std::optional<std::filesystem::path> checkpoint;  // read on start if present, rewritten per chunk
    std::function<void(std::size_t done, std::size_t total)> progress;
    std::stop_token stop;                   // checked between chunks
    std::optional<std::size_t> max_chunks;  // stop after this many new chunks (simulated interruption)
};

struct SweepResult {
    std::vector<RuleScore> scores;  // in rule-list order; complete only when `complete`
    bool complete = false;
    std::size_t resumed = 0;  // rules restored from the checkpoint
};

/// Evaluates every rule of `cfg.rules` (default: all 2^18) on the dataset.
/// Per-rule work is pure, so the result does not depend on thread count,
/// chunking or interruption.
inline SweepResult sweep(const SweepDataset& data, const SweepConfig& cfg, const SweepOptions& opt = {}) {
    if (cfg.steps < 1) throw Error(ErrorKind::usage, "sweep needs T >= 1");
    if (cfg.chunk_size < 1) throw Error(ErrorKind::usage, "sweep chunk size must be >= 1");
    std::vector<std::uint32_t> rules = cfg.rules;
    if (rules.empty()) {
        rules.resize(rule_count);
        std::iota(rules.begin(), rules.end(), 0U);
    }
    const std::size_t total = rules.size();
    const std::uint64_t hash = sweep_config_hash(data, cfg);

    std::vector<RuleScore> scores(total);
    std::vector<char> done(total, 0);
    SweepResult result;
    if (opt.checkpoint && std::filesystem::exists(*opt.checkpoint)) {
        const auto cp = read_checkpoint(*opt.checkpoint);
        if (cp.config_hash != hash || cp.total != total)
            throw Error(ErrorKind::usage, "checkpoint " + opt.checkpoint->string() +
                                              " was written for a different configuration; refusing to resume");
        std::size_t k = 0;
        for (auto [b, e] : cp.ranges)
            for (auto p = b; p < e; ++p, ++k) {
                if (cp.scores[k].rule_index != rules[p]) throw Error(ErrorKind::data, "checkpoint rule order mismatch");
                scores[p] = cp.scores[k];
                done[p] = 1;
            }
        result.resumed = k;
    }

    unsigned threads = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    std::vector<SweepWorkspace> workspaces(threads);

    auto save = [&] {
        if (!opt.checkpoint) return;
        Checkpoint cp;
        cp.config_hash = hash;
        cp.total = total;
        for (std::size_t p = 0; p < total;) {
            if (!done[p]) {
                ++p;
                continue;
            }
            const std::size_t b = p;
            while (p < total && done[p]) cp.scores.push_back(scores[p++]);
            cp.ranges.emplace_back(b, p);
        }
        write_checkpoint(*opt.checkpoint, cp);
    };

    std::size_t completed = static_cast<std::size_t>(std::count(done.begin(), done.end(), 1));
    std::size_t new_chunks = 0;
    for (std::size_t chunk_begin = 0; chunk_begin < total; chunk_begin += cfg.chunk_size) {
        const std::size_t chunk_end = std::min(total, chunk_begin + cfg.chunk_size);
        std::vector<std::size_t> todo;
        for (std::size_t p = chunk_begin; p < chunk_end; ++p)
            if (!done[p]) todo.push_back(p);
        if (todo.empty()) continue;
        if (opt.stop.stop_requested() || (opt.max_chunks && new_chunks >= *opt.max_chunks)) break;

        std::atomic<std::size_t> next{0};
        auto work = [&](SweepWorkspace& ws) {
            for (std::size_t i; (i = next.fetch_add(1, std::memory_order_relaxed)) < todo.size();) {
                const std::size_t p = todo[i];
                scores[p] = evaluate_rule(data, Rule::from_index(rules[p]), cfg, ws);
            }
        };
        if (threads == 1) {
            work(workspaces[0]);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t) pool.emplace_back([&, t] { work(workspaces[t]); });
        }
        for (auto p : todo) done[p] = 1;
        completed += todo.size();
        ++new_chunks;
        save();
        if (opt.progress) opt.progress(completed, total);
    }

    result.complete = completed == total;
    result.scores = std::move(scores);
    if (!result.complete) {
        std::vector<RuleScore> partial;
        for (std::size_t p = 0; p < total; ++p)
            if (done[p]) partial.push_back(result.scores[p]);
        result.scores = std::move(partial);
    }
    return result;
}

/// Best k rules: descending mean accuracy, then ascending std, then index.
inline std::vector<RuleScore> top_k(std::span<const RuleScore> table, std::size_t k) {
    if (k > table.size()) throw Error(ErrorKind::usage, "top_k: k exceeds table size");
    std::vector<RuleScore> sorted(table.begin(), table.end());
    auto better = [](const RuleScore& a, const RuleScore& b) {
        if (a.mean != b.mean) return a.mean > b.mean;
        if (a.std != b.std) return a.std < b.std;
        return a.rule_index < b.rule_index;
    };
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end(), better);
    sorted.resize(k);
    return sorted;
}

/// Normalized histogram of mean accuracies over [0, 1].
inline std::vector<double> accuracy_histogram(std::span<const RuleScore> table, std::size_t bins) {
    if (table.empty()) throw Error(ErrorKind::usage, "accuracy histogram of an empty table");
    std::vector<double> means;
    means.reserve(table.size());
    for (const auto& s : table) means.push_back(s.mean);
    return histogram(means, bins, 0.0, 1.0);
}

/// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline void write_score_table(std::ostream& out, std::span<const RuleScore> table) {
    out << "rule_index,rule_text,mean,std\n";
    for (const auto& s : table)
        out << s.rule_index << ',' << Rule::from_index(s.rule_index).to_string() << ',' << format_double(s.mean) << ','
            << format_double(s.std) << '\n';
}

inline std::vector<RuleScore> read_score_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "rule_index,rule_text,mean,std")
        throw Error(ErrorKind::parse, "score table: unexpected header");
    std::vector<RuleScore> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string idx, text, mean, sd;
        if (!std::getline(row, idx, ',') || !std::getline(row, text, ',') || !std::getline(row, mean, ',') ||
            !std::getline(row, sd))
            throw Error(ErrorKind::parse, "score table: bad row '" + line + "'");
        out.push_back({static_cast<std::uint32_t>(std::stoul(idx)), std::stod(mean), std::stod(sd)});
    }
    return out;
}

}  // namespace llna
