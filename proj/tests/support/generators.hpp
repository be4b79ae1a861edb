#pragma once

#include "llna/corpus.hpp"
#include "llna/graph.hpp"
#include "llna/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace llna::synth {

inline std::vector<std::string> numbered_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("n" + std::to_string(i));
    return labels;
}

/// Random graph with n nodes and edge probability p (may be disconnected).
inline Network gnp(std::size_t n, double p, Rng& rng) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) edges.emplace_back(i, j);
    return Network(numbered_labels(n), edges);
}

/// Connected random graph: a random spanning tree plus extra edges with probability p.
inline Network connected_random(std::size_t n, double p, Rng& rng) {
    std::set<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 1; i < n; ++i) {
        const auto j = static_cast<NodeId>(uniform_below(rng, i));
        edges.emplace(j, i);
    }
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) edges.emplace(i, j);
    return Network(numbered_labels(n), {edges.begin(), edges.end()});
}

/// G(n, m) with m = n * avg_degree / 2 distinct edges, reduced to its giant component.
inline Network erdos_renyi(std::size_t n, double avg_degree, std::uint64_t seed) {
    Rng rng(seed);
    const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * avg_degree / 2.0));
    std::set<std::pair<NodeId, NodeId>> edges;
    while (edges.size() < m) {
        auto a = static_cast<NodeId>(uniform_below(rng, n));
        auto b = static_cast<NodeId>(uniform_below(rng, n));
        if (a == b) continue;
        edges.emplace(std::min(a, b), std::max(a, b));
    }
    return giant_component(Network(numbered_labels(n), {edges.begin(), edges.end()}));
}

/// Preferential attachment: each new node links to m distinct existing nodes
/// chosen proportionally to degree. Average degree approaches 2m.
inline Network barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> endpoints;  // each node repeated once per incident edge
    for (NodeId i = 0; i <= m; ++i)
        for (NodeId j = 0; j < i; ++j) {
            edges.emplace_back(j, i);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    std::vector<NodeId> chosen;
    for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
        chosen.clear();
        while (chosen.size() < m) {
            const NodeId t = endpoints[uniform_below(rng, endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (NodeId t : chosen) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return Network(numbered_labels(n), edges);
}

inline Network path_graph(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Network(numbered_labels(n), edges);
}

inline Network complete_graph(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Network(numbered_labels(n), edges);
}

/// Degree sequence drawn from the discrete power law P(k) = k^-alpha / zeta(alpha)
/// by inverse-CDF sampling on a precomputed table.
inline std::vector<std::size_t> zeta_sample(double alpha, std::size_t n, std::uint64_t seed,
                                            std::size_t kmax = 1'000'000) {
    std::vector<double> cdf(kmax);
    double acc = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) cdf[k - 1] = acc += std::pow(static_cast<double>(k), -alpha);
    Rng rng(seed);
    std::vector<std::size_t> out(n);
    for (auto& x : out) {
        const double u = uniform01(rng) * acc;
        x = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) + 1;
        x = std::min(x, kmax);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic English-like text with inflected nouns and verbs.

struct Lexeme {
    const char* lemma;
    std::vector<const char*> forms;  // inflected surface forms, lemma included
    bool noun;
};

inline const std::vector<Lexeme>& synthetic_lexicon() {
    static const std::vector<Lexeme> lex = {
        {"cat", {"cat", "cats"}, true},          {"house", {"house", "houses"}, true},
        {"city", {"city", "cities"}, true},      {"box", {"box", "boxes"}, true},
        {"church", {"church", "churches"}, true}, {"man", {"man", "men"}, true},
        {"woman", {"woman", "women"}, true},     {"child", {"child", "children"}, true},
        {"letter", {"letter", "letters"}, true}, {"horse", {"horse", "horses"}, true},
        {"door", {"door", "doors"}, true},       {"road", {"road", "roads"}, true},
        {"night", {"night", "nights"}, true},    {"friend", {"friend", "friends"}, true},
        {"eye", {"eye", "eyes"}, true},          {"hand", {"hand", "hands"}, true},
        {"story", {"story", "stories"}, true},   {"ship", {"ship", "ships"}, true},
        {"walk", {"walk", "walks", "walked", "walking"}, false},
        {"run", {"run", "runs", "ran", "running"}, false},
        {"see", {"see", "sees", "saw", "seen", "seeing"}, false},
        {"take", {"take", "takes", "took", "taken", "taking"}, false},
        {"write", {"write", "writes", "wrote", "written", "writing"}, false},
        {"look", {"look", "looks", "looked", "looking"}, false},
        {"carry", {"carry", "carries", "carried", "carrying"}, false},
        {"stop", {"stop", "stops", "stopped", "stopping"}, false},
        {"open", {"open", "opens", "opened", "opening"}, false},
        {"come", {"come", "comes", "came", "coming"}, false},
        {"speak", {"speak", "speaks", "spoke", "spoken", "speaking"}, false},
        {"find", {"find", "finds", "found", "finding"}, false},
        {"old", {"old"}, false},                 {"dark", {"dark"}, false},
        {"quiet", {"quiet"}, false},             {"strange", {"strange"}, false},
    };
    return lex;
}

/// Document of `words` tokens: Zipf-weighted lexemes, a random inflection for
/// each, interleaved with stopwords and punctuation.
inline std::string synthetic_text(std::size_t words, std::uint64_t seed) {
    static const std::vector<const char*> fillers = {"the", "a", "of", "and", "to", "in", "he", "she", "was", "it"};
    static const std::vector<const char*> marks = {",", ".", ";", "!", "?"};
    const auto& lex = synthetic_lexicon();
    Rng rng(seed);
    std::vector<double> cdf;
    double acc = 0.0;
    // per-document permutation of ranks gives each document its own vocabulary profile
    std::vector<std::size_t> rank(lex.size());
    for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
    shuffle(std::span(rank), rng);
    for (std::size_t i = 0; i < lex.size(); ++i) cdf.push_back(acc += 1.0 / static_cast<double>(rank[i] + 1));
    std::string text;
    bool sentence_start = true;
    for (std::size_t w = 0; w < words; ++w) {
        if (uniform01(rng) < 0.3) {
            text += fillers[uniform_below(rng, fillers.size())];
            text += ' ';
        }
        const double u = uniform01(rng) * acc;
        const auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const auto& lx = lex[std::min(idx, lex.size() - 1)];
        std::string word = lx.forms[uniform_below(rng, lx.forms.size())];
        if (sentence_start) word[0] = static_cast<char>(word[0] - 'a' + 'A');
        sentence_start = false;
        text += word;
        if (uniform01(rng) < 0.12) {
            const char* mark = marks[uniform_below(rng, marks.size())];
            text += mark;
            sentence_start = mark[0] != ',' && mark[0] != ';';
        }
        text += ' ';
    }
    return text;
}

}  // namespace llna::synth
