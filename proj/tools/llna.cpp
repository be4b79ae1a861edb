// llna: command-line front end for the word-network / network-automaton
// authorship pipeline. Run `llna --help` or `llna <command> --help`.

#include "llna/llna.hpp"
// after Eigen: httplib pulls in <resolv.h>, whose _res macro clashes with Eigen
#include "llna/http_source.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace llna;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_dependency = 3;
constexpr int exit_data = 4;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage: return exit_usage;
        case ErrorKind::dependency:
        case ErrorKind::fetch: return exit_dependency;
        case ErrorKind::data:
        case ErrorKind::parse:
        case ErrorKind::degenerate: return exit_data;
    }
    return 1;
}

volatile std::sig_atomic_t interrupted = 0;

// ---------------------------------------------------------------------------
// Configuration

struct RunConfig {
    std::string manifest;
    std::string out = "out";
    std::string cache;  // default <out>/cache
    std::string stopwords = std::string(LLNA_DATA_DIR) + "/stopwords_en.txt";
    std::string lemma_table = std::string(LLNA_DATA_DIR) + "/lemma_table_en.tsv";
    std::string lemma_mode = "partial";
    std::string role = "validation";
    std::string rule = "B024678-S4";
    std::string parts = "muV";
    std::size_t t_steps = 400;
    std::uint64_t seed = 1;
    std::size_t delta = 1;
    std::size_t Delta = 1;
    std::string measure = "sokal_michener";
    std::size_t knn_k = 1;
    std::size_t k_folds = 5;
    std::size_t repetitions = 50;
    std::string metric = "euclidean";
    double alive_probability = 0.5;
    unsigned threads = 0;
    std::size_t top_k = 400;

    // per-command
    std::string doc;
    std::string edges;
    std::string features;
    bool baseline = false;
    std::string checkpoint;
    std::size_t chunk_size = 1024;
    std::size_t sweep_repetitions = 10;
    std::string sweep_parts = "muS,muL";
    std::string rules;
    bool allow_validation = false;
    bool offline = false;
};

std::vector<LemmaMode> lemma_modes(const std::string& text) {
    std::vector<LemmaMode> modes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) modes.push_back(parse_lemma_mode(item));
    if (modes.empty()) throw Error(ErrorKind::usage, "no lemma mode given");
    return modes;
}

LemmaMode single_mode(const RunConfig& c) {
    const auto modes = lemma_modes(c.lemma_mode);
    if (modes.size() != 1) throw Error(ErrorKind::usage, "this command takes exactly one --lemma-mode");
    return modes.front();
}

std::optional<DatasetRole> role_filter(const std::string& role) {
    if (role == "all") return std::nullopt;
    return parse_dataset_role(role);
}

FeatureConfig feature_config(const RunConfig& c, const std::string& parts) {
    FeatureConfig f;
    f.parts = FeatureParts::parse(parts);
    f.spatial_lag = c.delta;
    f.temporal_lag = c.Delta;
    f.measure = parse_similarity(c.measure);
    return f;
}

CVConfig cv_config(const RunConfig& c) {
    CVConfig cv;
    cv.k_folds = c.k_folds;
    cv.knn_k = c.knn_k;
    cv.repetitions = c.repetitions;
    cv.seed = c.seed;
    cv.metric = parse_metric(c.metric);
    return cv;
}

EvolutionConfig evolution_config(const RunConfig& c) {
    EvolutionConfig e;
    e.rule = Rule::parse(c.rule);
    e.steps = c.t_steps;
    e.seed = c.seed;
    e.alive_probability = c.alive_probability;
    e.features = feature_config(c, c.parts);
    return e;
}

/// Rejects values that would only fail deep inside a stage.
void validate(const RunConfig& c) {
    try {
        lemma_modes(c.lemma_mode);
        role_filter(c.role);
        Rule::parse(c.rule);
        FeatureParts::parse(c.parts);
        FeatureParts::parse(c.sweep_parts);
        parse_similarity(c.measure);
        parse_metric(c.metric);
    } catch (const Error& e) {
        throw Error(ErrorKind::usage, e.what());
    }
    if (c.t_steps < 1) throw Error(ErrorKind::usage, "--t-steps must be >= 1");
    if (c.delta < 1 || c.Delta < 1) throw Error(ErrorKind::usage, "--delta and --Delta must be >= 1");
    if (c.delta > c.t_steps) throw Error(ErrorKind::usage, "--delta must not exceed --t-steps");
    if (c.k_folds < 2) throw Error(ErrorKind::usage, "--folds must be >= 2");
    if (c.knn_k < 1) throw Error(ErrorKind::usage, "--knn-k must be >= 1");
    if (c.repetitions < 1 || c.sweep_repetitions < 1) throw Error(ErrorKind::usage, "repetitions must be >= 1");
    if (!(c.alive_probability >= 0.0 && c.alive_probability <= 1.0))
        throw Error(ErrorKind::usage, "--alive-probability must lie in [0, 1]");
    if (c.chunk_size < 1) throw Error(ErrorKind::usage, "--chunk-size must be >= 1");
}

// ---------------------------------------------------------------------------
// Run manifests

std::uint64_t file_hash(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class Run {
  public:
    Run(std::string command, const RunConfig& cfg, json parameters)
        : command_(std::move(command)), out_(cfg.out), parameters_(std::move(parameters)) {}

    void input(const fs::path& p) { inputs_[relative(p)] = hex(file_hash(p)); }
    void output(const fs::path& p) { outputs_.push_back(p); }
    void note(const std::string& key, json value) { notes_[key] = std::move(value); }

    /// Writes <dir>/<command>.manifest.json next to the outputs.
    void finish(const fs::path& dir) const {
        json core{{"command", command_}, {"parameters", parameters_}, {"inputs", inputs_}};
        const auto run_hash = hex(fnv1a64(core.dump()));
        json outputs = json::object();
        for (const auto& p : outputs_) outputs[relative(p)] = hex(file_hash(p));
        json m = core;
        m["run_hash"] = run_hash;
        m["outputs"] = outputs;
        if (!notes_.empty()) m["notes"] = notes_;
        fs::create_directories(dir);
        std::ofstream(dir / (command_ + ".manifest.json")) << m.dump(2) << '\n';
        std::cerr << command_ << ": " << outputs_.size() << " output file(s), run " << run_hash << "\n";
    }

  private:
    std::string relative(const fs::path& p) const {
        const auto rel = fs::relative(p, out_);
        return rel.empty() || rel.native().starts_with("..") ? p.generic_string() : rel.generic_string();
    }

    std::string command_;
    fs::path out_;
    json parameters_;
    std::map<std::string, std::string> inputs_;
    std::vector<fs::path> outputs_;
    json notes_ = json::object();
};

json common_parameters(const RunConfig& c) {
    return json{{"manifest", c.manifest},
                {"lemma_mode", c.lemma_mode},
                {"role", c.role},
                {"stopwords", c.stopwords},
                {"lemma_table", c.lemma_table}};
}

json evolution_parameters(const RunConfig& c) {
    return json{{"rule", Rule::parse(c.rule).to_string()},
                {"parts", FeatureParts::parse(c.parts).to_string()},
                {"t_steps", c.t_steps},
                {"seed", c.seed},
                {"delta", c.delta},
                {"Delta", c.Delta},
                {"measure", c.measure},
                {"alive_probability", c.alive_probability}};
}

json cv_parameters(const RunConfig& c) {
    return json{{"knn_k", c.knn_k}, {"k_folds", c.k_folds}, {"repetitions", c.repetitions},
                {"metric", c.metric}, {"seed", c.seed}};
}

json merge(json a, const json& b) {
    a.update(b);
    return a;
}

// ---------------------------------------------------------------------------
// Stage inputs

CorpusManifest load_manifest(const RunConfig& c) {
    if (c.manifest.empty()) throw Error(ErrorKind::usage, "--manifest is required");
    auto m = CorpusManifest::load(c.manifest);
    m.validate();
    return m;
}

std::vector<ManifestEntry> selected_entries(const CorpusManifest& m, const std::string& role) {
    const auto r = role_filter(role);
    return r ? m.with_role(*r) : m.entries;
}

fs::path cache_dir(const RunConfig& c) { return c.cache.empty() ? fs::path(c.out) / "cache" : fs::path(c.cache); }
fs::path tokens_path(const RunConfig& c, LemmaMode m, const std::string& id) {
    return fs::path(c.out) / "tokens" / std::string(to_string(m)) / (id + ".tok");
}
fs::path network_path(const RunConfig& c, LemmaMode m, const std::string& id) {
    return fs::path(c.out) / "networks" / std::string(to_string(m)) / (id + ".edges");
}
std::string feature_tag(const RunConfig& c) {
    std::string parts = FeatureParts::parse(c.parts).to_string();
    std::replace(parts.begin(), parts.end(), ',', '+');
    return Rule::parse(c.rule).to_string() + "_" + parts;
}
fs::path features_path(const RunConfig& c, LemmaMode m) {
    return fs::path(c.out) / "features" / std::string(to_string(m)) / ("features_" + feature_tag(c) + ".csv");
}

void require(const fs::path& p, const std::string& stage) {
    if (!fs::exists(p))
        throw Error(ErrorKind::dependency, "missing " + p.string() + " (run `llna " + stage + "` first)");
}

std::vector<LabeledNetwork> load_networks(const RunConfig& c, const CorpusManifest& m, LemmaMode mode,
                                          const std::string& role, Run* run) {
    std::vector<LabeledNetwork> docs;
    for (const auto& e : selected_entries(m, role)) {
        const auto id = document_id(e);
        const auto p = network_path(c, mode, id);
        require(p, "build");
        if (run) run->input(p);
        docs.push_back({id, e.author, read_edge_list(p)});
    }
    if (docs.empty()) throw Error(ErrorKind::data, "no documents with role '" + role + "' in the manifest");
    return docs;
}

std::ofstream open_out(const fs::path& p) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::dependency, "cannot write " + p.string());
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

// ---------------------------------------------------------------------------
// Commands

void cmd_fetch(const RunConfig& c) {
    const auto m = load_manifest(c);
    Run run("fetch", c, json{{"manifest", c.manifest}, {"offline", c.offline}});
    run.input(c.manifest);
    DocumentCache cache(cache_dir(c), c.offline ? DocumentCache::Downloader{} : gutenberg_download);
    const auto report = fs::path(c.out) / "fetch" / "fetch.csv";
    auto out = open_out(report);
    out << "document_id,source,bytes,markers_found,from_cache\n";
    std::size_t failures = 0;
    for (const auto& e : m.entries) {
        const auto id = remote_identifier(e.source);
        if (!id) continue;
        try {
            const auto doc = cache.fetch(*id);
            out << csv_field(document_id(e)) << ',' << csv_field(e.source) << ',' << doc.text.size() << ','
                << doc.markers_found << ',' << doc.from_cache << '\n';
            if (!doc.markers_found) std::cerr << "warning: no start/end markers in " << e.source << "\n";
        } catch (const Error& ex) {
            std::cerr << "error: " << ex.what() << "\n";
            ++failures;
        }
    }
    out.close();
    run.output(report);
    run.finish(report.parent_path());
    if (failures) throw Error(ErrorKind::fetch, std::to_string(failures) + " document(s) could not be fetched");
}

void cmd_preprocess(const RunConfig& c) {
    const auto m = load_manifest(c);
    const auto stop = StopwordList::load(c.stopwords);
    const auto lemmas = LemmaTable::load(c.lemma_table);
    Run run("preprocess", c, common_parameters(c));
    run.input(c.manifest);
    run.input(c.stopwords);
    run.input(c.lemma_table);
    DocumentCache cache(cache_dir(c), nullptr);
    for (const auto& e : selected_entries(m, c.role)) {
        FetchedDocument text;
        try {
            text = load_entry_text(m, e, cache);
        } catch (const Error& ex) {
            throw Error(ErrorKind::dependency, std::string(ex.what()) + " (run `llna fetch` first)");
        }
        const auto id = document_id(e);
        for (auto mode : lemma_modes(c.lemma_mode)) {
            const auto seq = preprocess(text.text, stop, lemmas, mode, id);
            const auto p = tokens_path(c, mode, id);
            fs::create_directories(p.parent_path());
            write_tokens(p, seq);
            run.output(p);
        }
    }
    run.finish(fs::path(c.out) / "tokens");
}

void cmd_build(const RunConfig& c) {
    const auto m = load_manifest(c);
    Run run("build", c, common_parameters(c));
    for (const auto& e : selected_entries(m, c.role)) {
        const auto id = document_id(e);
        for (auto mode : lemma_modes(c.lemma_mode)) {
            const auto tp = tokens_path(c, mode, id);
            require(tp, "preprocess");
            run.input(tp);
            const auto net = giant_component(build_network(read_tokens(tp, id, mode)));
            const auto p = network_path(c, mode, id);
            fs::create_directories(p.parent_path());
            write_edge_list(p, net);
            run.output(p);
        }
    }
    run.finish(fs::path(c.out) / "networks");
}

const std::vector<std::string> measurement_columns{"nodes",           "edges",          "avg_degree",
                                                   "avg_hier_degree_2", "avg_hier_degree_3", "avg_clustering",
                                                   "avg_path_length", "diameter",       "density",
                                                   "gamma",           "assortativity"};

std::vector<double> measurement_values(const NetworkMeasurements& x) {
    return {static_cast<double>(x.nodes), static_cast<double>(x.edges), x.avg_degree, x.avg_hier_degree_2,
            x.avg_hier_degree_3, x.avg_clustering, x.avg_path_length, static_cast<double>(x.diameter), x.density,
            x.gamma, x.assortativity};
}

void cmd_measure(const RunConfig& c) {
    const auto m = load_manifest(c);
    for (auto mode : lemma_modes(c.lemma_mode)) {
        Run run("measure", c, merge(common_parameters(c), {{"lemma_mode", std::string(to_string(mode))}}));
        const auto docs = load_networks(c, m, mode, c.role, &run);
        const auto dir = fs::path(c.out) / "measure" / std::string(to_string(mode));
        auto out = open_out(dir / "measurements.csv");
        out << "document_id,author";
        for (const auto& col : measurement_columns) out << ',' << col;
        out << ",gamma_reliable,gamma_xmin,assortativity_degenerate\n";
        std::map<std::string, std::pair<std::vector<double>, std::size_t>> per_author;
        for (const auto& d : docs) {
            const auto x = measure(d.network, c.threads);
            const auto v = measurement_values(x);
            out << csv_field(d.id) << ',' << csv_field(d.author);
            for (double value : v) out << ',' << format_double(value);
            out << ',' << x.gamma_reliable << ',' << x.gamma_xmin << ',' << x.assortativity_degenerate << '\n';
            auto& [sum, n] = per_author[d.author];
            sum.resize(v.size(), 0.0);
            for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
            ++n;
        }
        out.close();
        auto authors = open_out(dir / "authors.csv");
        authors << "author,documents";
        for (const auto& col : measurement_columns) authors << ",mean_" << col;
        authors << '\n';
        for (const auto& [author, acc] : per_author) {
            authors << csv_field(author) << ',' << acc.second;
            for (double s : acc.first) authors << ',' << format_double(s / static_cast<double>(acc.second));
            authors << '\n';
        }
        authors.close();
        run.output(dir / "measurements.csv");
        run.output(dir / "authors.csv");
        run.finish(dir);
    }
}

void cmd_evolve(const RunConfig& c, bool steps_given) {
    Network net;
    std::string id;
    RunConfig cfg = c;
    if (!steps_given) cfg.t_steps = 500;  // diagrams use a longer run by default
    Run run("evolve", cfg,
            json{{"rule", Rule::parse(cfg.rule).to_string()},
                 {"t_steps", cfg.t_steps},
                 {"seed", cfg.seed},
                 {"alive_probability", cfg.alive_probability},
                 {"doc", cfg.doc},
                 {"edges", cfg.edges},
                 {"lemma_mode", cfg.lemma_mode}});
    if (!cfg.edges.empty()) {
        require(cfg.edges, "build");
        net = read_edge_list(fs::path(cfg.edges));
        id = fs::path(cfg.edges).stem().string();
        run.input(cfg.edges);
    } else if (!cfg.doc.empty()) {
        const auto p = network_path(cfg, single_mode(cfg), cfg.doc);
        require(p, "build");
        net = read_edge_list(p);
        id = cfg.doc;
        run.input(p);
    } else {
        throw Error(ErrorKind::usage, "evolve needs --doc ID or --edges FILE");
    }
    const Rule rule = Rule::parse(cfg.rule);
    const auto seed = SweepDataset::document_seed(cfg.seed, id);
    SpatioTemporalMatrix m;
    Automaton(net).evolve(rule, cfg.t_steps, init_state(net.node_count(), seed, cfg.alive_probability), seed, m);
    const auto dir = fs::path(cfg.out) / "evolve";
    const auto stem = id + "_" + rule.to_string();
    auto txt = open_out(dir / (stem + ".txt"));
    txt << "# rows: nodes by ascending degree; columns: t = 0.." << cfg.t_steps << "\n";
    for (std::size_t r = 0; r < m.nodes(); ++r) txt << net.label(m.node_order()[r]) << '\t' << m.row(r).to_string() << '\n';
    txt.close();
    auto svg_out = open_out(dir / (stem + ".svg"));
    svg::write_diagram(svg_out, m);
    svg_out.close();
    run.output(dir / (stem + ".txt"));
    run.output(dir / (stem + ".svg"));
    run.finish(dir);
}

void write_features_csv(const fs::path& p, const std::vector<LabeledSample>& samples,
                        const std::vector<std::string>& columns) {
    auto out = open_out(p);
    out << "document_id,author";
    for (const auto& col : columns) out << ',' << col;
    out << '\n';
    for (const auto& s : samples) {
        out << csv_field(s.document_id) << ',' << csv_field(s.author);
        for (double v : s.features) out << ',' << format_double(v);
        out << '\n';
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<LabeledSample> read_features_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorKind::dependency, "cannot open feature file " + p.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::data, p.string() + ": empty feature file");
    const auto width = split_csv_line(line).size();
    std::vector<LabeledSample> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != width || width < 3) throw Error(ErrorKind::data, p.string() + ": ragged row");
        LabeledSample s{{}, f[1], f[0]};
        for (std::size_t i = 2; i < f.size(); ++i) {
            try {
                s.features.push_back(std::stod(f[i]));
            } catch (const std::exception&) {
                throw Error(ErrorKind::data, p.string() + ": bad number '" + f[i] + "'");
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

void cmd_features(const RunConfig& c) {
    const auto m = load_manifest(c);
    for (auto mode : lemma_modes(c.lemma_mode)) {
        Run run("features", c,
                merge(merge(common_parameters(c), evolution_parameters(c)), {{"lemma_mode", std::string(to_string(mode))}}));
        const auto docs = load_networks(c, m, mode, c.role, &run);
        const auto evo = evolution_config(c);
        const auto samples = llna_samples(docs, evo);
        const auto p = features_path(c, mode);
        write_features_csv(p, samples, feature_column_names(evo.features));
        run.output(p);
        run.finish(p.parent_path());
    }
}

std::vector<std::uint32_t> parse_rule_list(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(text);
    std::string item;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || v >= rule_count) throw Error(ErrorKind::usage, "bad rule index '" + s + "' in --rules");
        return static_cast<std::uint32_t>(v);
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (const auto dash = item.find('-'); dash != std::string::npos) {
            const auto lo = number(item.substr(0, dash)), hi = number(item.substr(dash + 1));
            if (hi < lo) throw Error(ErrorKind::usage, "empty range '" + item + "' in --rules");
            for (std::uint32_t r = lo; r <= hi; ++r) out.push_back(r);
        } else {
            out.push_back(number(item));
        }
    }
    return out;
}

void cmd_sweep(const RunConfig& c) {
    const auto m = load_manifest(c);
    const auto mode = single_mode(c);
    SweepConfig cfg;
    cfg.steps = c.t_steps;
    cfg.features = feature_config(c, c.sweep_parts);
    cfg.cv = cv_config(c);
    cfg.cv.repetitions = c.sweep_repetitions;
    cfg.seed = c.seed;
    cfg.alive_probability = c.alive_probability;
    cfg.chunk_size = c.chunk_size;
    cfg.lemma_mode = mode;
    cfg.allow_validation = c.allow_validation;
    cfg.threads = c.threads;
    if (!c.rules.empty()) cfg.rules = parse_rule_list(c.rules);

    const std::string role = c.allow_validation ? c.role : "rule-selection";
    Run run("sweep", c,
            merge(merge(common_parameters(c), cv_parameters(c)),
                  {{"role", role},
                   {"t_steps", cfg.steps},
                   {"parts", cfg.features.parts.to_string()},
                   {"delta", c.delta},
                   {"Delta", c.Delta},
                   {"measure", c.measure},
                   {"repetitions", cfg.cv.repetitions},
                   {"alive_probability", cfg.alive_probability},
                   {"chunk_size", cfg.chunk_size},
                   {"rules", c.rules.empty() ? std::string("all") : c.rules},
                   {"top_k", c.top_k}}));
    std::vector<SweepDocument> docs;
    const auto role_value = role_filter(role);
    for (auto& d : load_networks(c, m, mode, role, &run)) {
        DatasetRole r = role_value.value_or(DatasetRole::validation);
        if (!role_value)
            for (const auto& e : m.entries)
                if (document_id(e) == d.id) r = e.role;
        docs.push_back({d.id, d.author, r, std::move(d.network)});
    }
    const SweepDataset data(std::move(docs), cfg);

    const auto dir = fs::path(c.out) / "sweep" / std::string(to_string(mode));
    fs::create_directories(dir);
    SweepOptions opt;
    opt.checkpoint = c.checkpoint.empty() ? dir / "sweep.ckpt" : fs::path(c.checkpoint);
    std::stop_source stop;
    opt.stop = stop.get_token();
    opt.progress = [&](std::size_t done, std::size_t total) {
        std::cerr << "\rsweep: " << done << " / " << total << " rules" << std::flush;
        if (interrupted) stop.request_stop();
    };
    const auto result = sweep(data, cfg, opt);
    std::cerr << "\n";
    if (!result.complete)
        throw Error(ErrorKind::dependency, "sweep interrupted; rerun the same command to resume from " +
                                               opt.checkpoint->string());
    run.note("resumed_rules", result.resumed);

    auto scores = open_out(dir / "scores.csv");
    write_score_table(scores, result.scores);
    scores.close();
    auto top = open_out(dir / "top.csv");
    write_score_table(top, top_k(result.scores, std::min(c.top_k, result.scores.size())));
    top.close();
    auto hist = open_out(dir / "histogram.svg");
    const auto h = accuracy_histogram(result.scores, 50);
    svg::write_histogram(hist, h, 0.0, 1.0, "Accuracy over evaluated rules", "mean accuracy", "fraction of rules");
    hist.close();
    for (const char* f : {"scores.csv", "top.csv", "histogram.svg"}) run.output(dir / f);
    run.finish(dir);
}

void cmd_classify(const RunConfig& c) {
    const auto m = load_manifest(c);
    const auto mode = single_mode(c);
    json params = merge(merge(common_parameters(c), cv_parameters(c)), {{"baseline", c.baseline}});
    if (!c.baseline) params = merge(params, evolution_parameters(c));
    if (c.baseline) params["baseline_normalization"] = "z-score per feature, population std";
    Run run("classify", c, params);

    std::vector<LabeledSample> samples;
    std::string tag;
    if (c.baseline) {
        samples = baseline_samples(load_networks(c, m, mode, c.role, &run), c.threads);
        tag = "baseline";
    } else {
        const fs::path p = c.features.empty() ? features_path(c, mode) : fs::path(c.features);
        require(p, "features");
        run.input(p);
        samples = read_features_csv(p);
        tag = c.features.empty() ? feature_tag(c) : p.stem().string();
    }
    const auto result = cross_validate(samples, cv_config(c));
    const std::size_t n = samples.size();
    const auto classes = result.confusion.size();
    const auto correct = static_cast<std::size_t>(std::lround(result.mean * static_cast<double>(n)));
    const double p_value = binomial_p_value(correct, n, 1.0 / static_cast<double>(classes));

    const auto dir = fs::path(c.out) / "classify" / std::string(to_string(mode)) / tag;
    auto cv = open_out(dir / "cv.csv");
    cv << "features,mean_accuracy,std_accuracy,k_folds,repetitions,knn_k,documents,authors,correct_equivalent,p_value\n"
       << tag << ',' << format_double(result.mean) << ',' << format_double(result.std) << ',' << result.k_folds << ','
       << result.repetitions << ',' << c.knn_k << ',' << n << ',' << classes << ',' << correct << ','
       << format_double(p_value) << '\n';
    cv.close();
    auto folds = open_out(dir / "folds.csv");
    folds << "repetition,fold,accuracy\n";
    for (std::size_t i = 0; i < result.fold_accuracies.size(); ++i)
        folds << i / result.k_folds << ',' << i % result.k_folds << ',' << format_double(result.fold_accuracies[i]) << '\n';
    folds.close();
    auto conf = open_out(dir / "confusion.csv");
    conf << "truth\\predicted";
    for (const auto& l : result.confusion.labels()) conf << ',' << csv_field(l);
    conf << '\n';
    for (std::size_t i = 0; i < classes; ++i) {
        conf << csv_field(result.confusion.labels()[i]);
        for (std::size_t j = 0; j < classes; ++j) conf << ',' << result.confusion(i, j);
        conf << '\n';
    }
    conf.close();
    run.output(dir / "cv.csv");
    run.output(dir / "folds.csv");
    run.output(dir / "confusion.csv");

    if (samples.size() >= 3) {
        std::vector<std::vector<double>> x;
        std::vector<std::string> labels;
        for (const auto& s : samples) x.push_back(s.features), labels.push_back(s.author);
        const auto proj = pca_project(x);
        auto pca = open_out(dir / "pca.svg");
        svg::write_scatter(pca, proj.points, labels, "PCA projection (" + tag + ")");
        pca.close();
        run.output(dir / "pca.svg");
    }
    run.finish(dir);
    std::cout << tag << ": accuracy " << format_double(result.mean) << " +- " << format_double(result.std)
              << ", p-value " << format_double(p_value) << '\n';
}

void cmd_report(const RunConfig& c, bool mode_given) {
    const auto m = load_manifest(c);
    const auto modes = mode_given ? lemma_modes(c.lemma_mode)
                                  : std::vector<LemmaMode>{LemmaMode::none, LemmaMode::partial, LemmaMode::full};
    json params = merge(merge(merge(common_parameters(c), evolution_parameters(c)), cv_parameters(c)),
                        {{"lemma_modes", [&] {
                              std::vector<std::string> v;
                              for (auto md : modes) v.emplace_back(to_string(md));
                              return v;
                          }()}});
    params.erase("lemma_mode");
    params["baseline_normalization"] = "z-score per feature, population std";
    Run run("report", c, params);

    const auto dir = fs::path(c.out) / "report";
    auto acc = open_out(dir / "accuracy.csv");
    acc << "lemma_mode,method,mean_accuracy,std_accuracy\n";
    auto lem = open_out(dir / "lemmatization.csv");
    lem << "lemma_mode,author,documents,mean_nodes,mean_edges,mean_avg_degree\n";

    std::vector<std::string> categories;
    svg::BarSeries llna_bars{"LLNA " + Rule::parse(c.rule).to_string(), {}, {}}, base_bars{"network measurements", {}, {}};
    std::map<std::string, std::vector<double>> degree_by_author;
    const auto evo = evolution_config(c);
    for (auto mode : modes) {
        const auto docs = load_networks(c, m, mode, c.role, &run);
        const auto llna = cross_validate(llna_samples(docs, evo), cv_config(c));
        const auto base = cross_validate(baseline_samples(docs, c.threads), cv_config(c));
        const std::string name(to_string(mode));
        acc << name << ",llna," << format_double(llna.mean) << ',' << format_double(llna.std) << '\n';
        acc << name << ",baseline," << format_double(base.mean) << ',' << format_double(base.std) << '\n';
        categories.push_back(name);
        llna_bars.values.push_back(llna.mean);
        llna_bars.errors.push_back(llna.std);
        base_bars.values.push_back(base.mean);
        base_bars.errors.push_back(base.std);

        std::map<std::string, std::array<double, 4>> per_author;
        for (const auto& d : docs) {
            auto& a = per_author[d.author];
            const double nn = static_cast<double>(d.network.node_count()), ee = static_cast<double>(d.network.edge_count());
            a[0] += 1, a[1] += nn, a[2] += ee, a[3] += 2.0 * ee / nn;
        }
        for (const auto& [author, a] : per_author) {
            lem << name << ',' << csv_field(author) << ',' << a[0] << ',' << format_double(a[1] / a[0]) << ','
                << format_double(a[2] / a[0]) << ',' << format_double(a[3] / a[0]) << '\n';
            degree_by_author[author].push_back(a[3] / a[0]);
        }
    }
    acc.close();
    lem.close();
    auto bars = open_out(dir / "accuracy.svg");
    const std::vector<svg::BarSeries> series{llna_bars, base_bars};
    svg::write_grouped_bars(bars, categories, series, "Classification accuracy by lemmatization mode", "accuracy", 1.0);
    bars.close();

    std::vector<std::string> authors;
    std::vector<svg::BarSeries> by_mode;
    for (std::size_t i = 0; i < modes.size(); ++i) by_mode.push_back({categories[i], {}, {}});
    for (const auto& [author, ks] : degree_by_author) {
        if (ks.size() != modes.size()) continue;
        authors.push_back(author);
        for (std::size_t i = 0; i < ks.size(); ++i) by_mode[i].values.push_back(ks[i]);
    }
    auto deg = open_out(dir / "lemmatization.svg");
    svg::write_grouped_bars(deg, authors, by_mode, "Average degree per author by lemmatization mode", "<k>");
    deg.close();
    for (const char* f : {"accuracy.csv", "accuracy.svg", "lemmatization.csv", "lemmatization.svg"}) run.output(dir / f);
    run.finish(dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Authorship analysis with word-adjacency networks and life-like network automata"};
    app.set_config("--config", "", "flat key=value configuration file; flags override it");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig c;
    app.add_option("--manifest", c.manifest, "corpus manifest (JSON)");
    app.add_option("--out", c.out, "output directory")->capture_default_str();
    app.add_option("--cache", c.cache, "document cache directory (default <out>/cache)");
    app.add_option("--stopwords", c.stopwords, "stopword list")->capture_default_str();
    app.add_option("--lemma-table", c.lemma_table, "lemma table (TSV)")->capture_default_str();
    auto* mode_opt = app.add_option("--lemma-mode", c.lemma_mode, "none|partial|full, comma-separated where a command "
                                                                  "accepts several")
                         ->capture_default_str();
    app.add_option("--role", c.role, "documents to use: validation|rule-selection|all")->capture_default_str();
    app.add_option("--rule", c.rule, "automaton rule, e.g. B024678-S4")->capture_default_str();
    app.add_option("--parts", c.parts, "feature parts: muS,muL,muH,muV or all")->capture_default_str();
    auto* steps_opt = app.add_option("--t-steps", c.t_steps, "automaton steps T")->capture_default_str();
    app.add_option("--seed", c.seed, "global seed")->capture_default_str();
    app.add_option("--delta", c.delta, "spatial lag (muH)")->capture_default_str();
    app.add_option("--Delta", c.Delta, "temporal lag (muV)")->capture_default_str();
    app.add_option("--measure", c.measure, "similarity: jaccard3w|sokal_michener|sokal_sneath")->capture_default_str();
    app.add_option("--knn-k", c.knn_k, "neighbors in kNN")->capture_default_str();
    app.add_option("--folds", c.k_folds, "cross-validation folds")->capture_default_str();
    app.add_option("--repetitions", c.repetitions, "cross-validation repetitions")->capture_default_str();
    app.add_option("--metric", c.metric, "euclidean|manhattan")->capture_default_str();
    app.add_option("--alive-probability", c.alive_probability, "initial alive fraction")->capture_default_str();
    app.add_option("--threads", c.threads, "worker threads (0: all cores)")->capture_default_str();
    app.add_option("--top-k", c.top_k, "rules kept in the sweep's top list")->capture_default_str();

    auto* fetch = app.add_subcommand("fetch", "download remote manifest sources into the cache");
    fetch->add_flag("--offline", c.offline, "only report what is cached");
    app.add_subcommand("preprocess", "tokenize, remove stopwords and lemmatize each document");
    app.add_subcommand("build", "build word-adjacency networks from token files");
    app.add_subcommand("measure", "network measurements per document and per author");
    auto* evolve = app.add_subcommand("evolve", "run one automaton and export its spatio-temporal diagram");
    evolve->add_option("--doc", c.doc, "document id (network from the build stage)");
    evolve->add_option("--edges", c.edges, "edge-list file");
    app.add_subcommand("features", "LLNA feature vectors per document");
    auto* sw = app.add_subcommand("sweep", "score every rule on the rule-selection documents");
    sw->add_option("--checkpoint", c.checkpoint, "checkpoint file (default <out>/sweep/<mode>/sweep.ckpt)");
    sw->add_option("--chunk-size", c.chunk_size, "rules per checkpoint")->capture_default_str();
    sw->add_option("--sweep-repetitions", c.sweep_repetitions, "CV repetitions per rule")->capture_default_str();
    sw->add_option("--sweep-parts", c.sweep_parts, "feature parts used to score rules")->capture_default_str();
    sw->add_option("--rules", c.rules, "subset of rule indices, e.g. 0-1023,4000");
    sw->add_flag("--allow-validation", c.allow_validation, "permit validation-role documents");
    auto* cl = app.add_subcommand("classify", "cross-validated kNN on stored features or the baseline");
    cl->add_flag("--baseline", c.baseline, "use z-scored network measurements instead of LLNA features");
    cl->add_option("--features", c.features, "feature CSV (default: output of `llna features`)");
    app.add_subcommand("report", "compare lemmatization modes and LLNA against the baseline");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return e.get_exit_code() == 0 ? 0 : (code == 0 ? 0 : exit_usage);
    }

    std::signal(SIGINT, [](int) { interrupted = 1; });
    try {
        validate(c);
        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "fetch") cmd_fetch(c);
        else if (name == "preprocess") cmd_preprocess(c);
        else if (name == "build") cmd_build(c);
        else if (name == "measure") cmd_measure(c);
        else if (name == "evolve") cmd_evolve(c, steps_opt->count() > 0);
        else if (name == "features") cmd_features(c);
        else if (name == "sweep") cmd_sweep(c);
        else if (name == "classify") cmd_classify(c);
        else if (name == "report") cmd_report(c, mode_opt->count() > 0);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
