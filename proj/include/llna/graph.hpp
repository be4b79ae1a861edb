#pragma once

#include "corpus.hpp"
#include "error.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace llna {

using NodeId = std::uint32_t;

/// Undirected, unweighted simple graph with labelled nodes, stored as
/// compressed adjacency lists (each list sorted ascending).
class Network {
  public:
    Network() = default;

    /// Edges may repeat and come in either orientation; self-loops are dropped.
    Network(std::vector<std::string> labels, std::vector<std::pair<NodeId, NodeId>> edges)
        : labels_(std::move(labels)) {
        const auto n = labels_.size();
        for (auto& [u, v] : edges) {
            if (u >= n || v >= n) throw Error(ErrorKind::data, "edge endpoint out of range");
            if (u > v) std::swap(u, v);
        }
        std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        offsets_.assign(n + 1, 0);
        for (const auto& [u, v] : edges) {
            ++offsets_[u + 1];
            ++offsets_[v + 1];
        }
        std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
        neighbors_.resize(offsets_.back());
        std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (const auto& [u, v] : edges) {
            neighbors_[fill[u]++] = v;
            neighbors_[fill[v]++] = u;
        }
        for (std::size_t i = 0; i < n; ++i)
            std::sort(neighbors_.begin() + offsets_[i], neighbors_.begin() + offsets_[i + 1]);
        edge_count_ = edges.size();
    }

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

    std::span<const NodeId> neighbors(NodeId i) const noexcept {
        return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
    }

    bool adjacent(NodeId i, NodeId j) const noexcept {
        auto nb = neighbors(i);
        return std::binary_search(nb.begin(), nb.end(), j);
    }

    const std::string& label(NodeId i) const noexcept { return labels_[i]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Each undirected edge once, with first < second, in ascending order.
    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        out.reserve(edge_count_);
        for (NodeId i = 0; i < node_count(); ++i)
            for (NodeId j : neighbors(i))
                if (i < j) out.emplace_back(i, j);
        return out;
    }

    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> d(node_count());
        for (NodeId i = 0; i < node_count(); ++i) d[i] = degree(i);
        return d;
    }

    friend bool operator==(const Network&, const Network&) = default;

  private:
    std::vector<std::string> labels_;
    std::vector<std::uint32_t> offsets_{0};
    std::vector<NodeId> neighbors_;
    std::size_t edge_count_ = 0;
};

/// Word-adjacency network: one node per distinct token (first-appearance
/// order), one edge per adjacent token pair.
inline Network build_network(const TokenSequence& seq) {
    if (seq.tokens.size() < 2)
        throw Error(ErrorKind::degenerate, "document '" + seq.document_id + "' has fewer than 2 tokens");
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::string> labels;
    std::vector<NodeId> ids;
    ids.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens) {
        auto [it, inserted] = index.try_emplace(t, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(t);
        ids.push_back(it->second);
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(ids.size());
    for (std::size_t k = 1; k < ids.size(); ++k) edges.emplace_back(ids[k - 1], ids[k]);
    return Network(std::move(labels), std::move(edges));
}

/// Connected-component id per node; components numbered in order of their
/// smallest node index.
inline std::vector<std::uint32_t> connected_components(const Network& net, std::size_t* count = nullptr) {
    constexpr auto unset = ~std::uint32_t{0};
    std::vector<std::uint32_t> comp(net.node_count(), unset);
    std::vector<NodeId> stack;
    std::uint32_t next = 0;
    for (NodeId s = 0; s < net.node_count(); ++s) {
        if (comp[s] != unset) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : net.neighbors(u))
                if (comp[v] == unset) {
                    comp[v] = next;
                    stack.push_back(v);
                }
        }
        ++next;
    }
    if (count) *count = next;
    return comp;
}

inline bool is_connected(const Network& net) {
    std::size_t n = 0;
    connected_components(net, &n);
    return n <= 1;
}

/// Induced subgraph on the largest connected component. Ties go to the
/// component holding the smallest node index. Node order is preserved.
inline Network giant_component(const Network& net) {
    if (net.node_count() == 0) throw Error(ErrorKind::degenerate, "empty network");
    std::size_t ncomp = 0;
    const auto comp = connected_components(net, &ncomp);
    if (ncomp == 1) return net;
    std::vector<std::size_t> sizes(ncomp, 0);
    for (auto c : comp) ++sizes[c];
    // max_element returns the first maximum, i.e. the lowest-numbered component
    const auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    std::vector<NodeId> remap(net.node_count(), 0);
    std::vector<std::string> labels;
    for (NodeId i = 0; i < net.node_count(); ++i)
        if (comp[i] == best) {
            remap[i] = static_cast<NodeId>(labels.size());
            labels.push_back(net.label(i));
        }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (auto [u, v] : net.edges())
        if (comp[u] == best) edges.emplace_back(remap[u], remap[v]);
    return Network(std::move(labels), std::move(edges));
}

/// BFS distances from `source`; unreachable nodes get -1.
inline std::vector<int> bfs_distances(const Network& net, NodeId source) {
    std::vector<int> dist(net.node_count(), -1);
    std::vector<NodeId> queue;
    queue.reserve(net.node_count());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        for (NodeId v : net.neighbors(u))
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

/// Number of nodes at shortest-path distance exactly h from `node`.
inline std::size_t hierarchical_degree(const Network& net, NodeId node, int h) {
    if (node >= net.node_count()) throw Error(ErrorKind::usage, "node index out of range");
    if (h < 1) throw Error(ErrorKind::usage, "hierarchy level must be >= 1");
    const auto dist = bfs_distances(net, node);
    return static_cast<std::size_t>(std::count(dist.begin(), dist.end(), h));
}

// ---------------------------------------------------------------------------
// Edge-list files
//
//   # nodes <N>
//   <index>\t<label>        (N lines, index ascending)
//   # edges <E>
//   <label u>\t<label v>    (E lines)

inline void write_edge_list(std::ostream& out, const Network& net) {
    out << "# nodes " << net.node_count() << '\n';
    for (NodeId i = 0; i < net.node_count(); ++i) out << i << '\t' << net.label(i) << '\n';
    out << "# edges " << net.edge_count() << '\n';
    for (auto [u, v] : net.edges()) out << net.label(u) << '\t' << net.label(v) << '\n';
}

inline void write_edge_list(const std::filesystem::path& path, const Network& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::data, "cannot write " + path.string());
    write_edge_list(out, net);
}

inline Network read_edge_list(std::istream& in, const std::string& what = "edge list") {
    auto fail = [&](const std::string& msg) { return Error(ErrorKind::parse, what + ": " + msg); };
    std::string line;
    std::size_t n = 0, e = 0;
    if (!std::getline(in, line) || std::sscanf(line.c_str(), "# nodes %zu", &n) != 1)
        throw fail("missing '# nodes' header");
    std::vector<std::string> labels(n);
    std::unordered_map<std::string, NodeId> index;
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::getline(in, line)) throw fail("truncated node block");
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw fail("bad node line '" + line + "'");
        const auto i = std::stoul(line.substr(0, tab));
        if (i != k) throw fail("node indices must be consecutive from 0");
        labels[k] = line.substr(tab + 1);
        if (!index.emplace(labels[k], static_cast<NodeId>(k)).second) throw fail("duplicate label " + labels[k]);
    }
    if (!std::getline(in, line) || std::sscanf(line.c_str(), "# edges %zu", &e) != 1)
        throw fail("missing '# edges' header");
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(e);
    for (std::size_t k = 0; k < e; ++k) {
        if (!std::getline(in, line)) throw fail("truncated edge block");
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw fail("bad edge line '" + line + "'");
        auto u = index.find(line.substr(0, tab));
        auto v = index.find(line.substr(tab + 1));
        if (u == index.end() || v == index.end()) throw fail("edge references unknown label");
        edges.emplace_back(u->second, v->second);
    }
    return Network(std::move(labels), std::move(edges));
}

inline Network read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::dependency, "missing edge list " + path.string());
    return read_edge_list(in, path.string());
}

}  // namespace llna
