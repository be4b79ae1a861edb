#pragma once

#include "graph.hpp"
#include "power_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

namespace llna {

__extension__ using int128 = __int128;

struct NetworkMeasurements {
    std::size_t nodes = 0;            // N
    std::size_t edges = 0;            // E
    double avg_degree = 0;            // <k> = 2E/N
    double avg_hier_degree_2 = 0;     // <k^{h=2}>
    double avg_hier_degree_3 = 0;     // <k^{h=3}>
    double avg_clustering = 0;        // <C>, cc_i = 0 when k_i < 2
    double avg_path_length = 0;       // <L> over ordered pairs
    int diameter = 0;                 // D
    double density = 0;               // 2E / (N(N-1))
    double gamma = std::numeric_limits<double>::quiet_NaN();  // power-law exponent
    double assortativity = 0;         // Gamma (degree correlation over edges)

    bool assortativity_degenerate = false;  // zero denominator (regular graph), reported as 0
    bool gamma_reliable = false;            // false when too few degrees or no tail
    std::size_t gamma_xmin = 0;
};

namespace detail {

struct DistanceTotals {
    std::uint64_t sum = 0;
    std::uint64_t at2 = 0;
    std::uint64_t at3 = 0;
    int max = 0;
};

inline DistanceTotals distance_totals(const Network& net, NodeId begin, NodeId end) {
    DistanceTotals t;
    const auto n = net.node_count();
    std::vector<int> dist(n, -1);
    std::vector<NodeId> queue(n);
    for (NodeId s = begin; s < end; ++s) {
        std::size_t head = 0, tail = 0;
        queue[tail++] = s;
        dist[s] = 0;
        while (head < tail) {
            const NodeId u = queue[head++];
            const int du = dist[u];
            for (NodeId v : net.neighbors(u))
                if (dist[v] < 0) {
                    dist[v] = du + 1;
                    queue[tail++] = v;
                }
        }
        for (std::size_t k = 0; k < tail; ++k) {
            const int d = dist[queue[k]];
            t.sum += static_cast<std::uint64_t>(d);
            t.at2 += d == 2;
            t.at3 += d == 3;
            t.max = std::max(t.max, d);
            dist[queue[k]] = -1;
        }
    }
    return t;
}

}  // namespace detail

/// Local clustering coefficient cc_i = 2 e_i / (k_i (k_i - 1)), 0 for k_i < 2.
inline std::vector<double> clustering_coefficients(const Network& net) {
    const auto n = net.node_count();
    std::vector<double> cc(n, 0.0);
    std::vector<char> mark(n, 0);
    for (NodeId i = 0; i < n; ++i) {
        const auto k = net.degree(i);
        if (k < 2) continue;
        for (NodeId j : net.neighbors(i)) mark[j] = 1;
        std::uint64_t links = 0;
        for (NodeId j : net.neighbors(i))
            for (NodeId l : net.neighbors(j))
                if (l > j && mark[l]) ++links;
        for (NodeId j : net.neighbors(i)) mark[j] = 0;
        cc[i] = 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
    }
    return cc;
}

/// Degree assortativity over edges. When the denominator vanishes (regular
/// graphs) the result is 0 and `degenerate` is set.
///
/// With P = sum k_i k_j, S1 = sum (k_i + k_j), S2 = sum (k_i^2 + k_j^2) over
/// edges, the ratio reduces to (4 E P - S1^2) / (2 E S2 - S1^2), which is
/// evaluated in exact integer arithmetic before the final division.
inline double degree_assortativity(const Network& net, bool* degenerate = nullptr) {
    int128 prod = 0, s1 = 0, s2 = 0;
    for (auto [i, j] : net.edges()) {
        const int128 ki = net.degree(i), kj = net.degree(j);
        prod += ki * kj;
        s1 += ki + kj;
        s2 += ki * ki + kj * kj;
    }
    const int128 e = net.edge_count();
    const int128 num = 4 * e * prod - s1 * s1;
    const int128 den = 2 * e * s2 - s1 * s1;
    if (degenerate) *degenerate = den == 0;
    if (den == 0) return 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

/// Topological measurements of a connected network. Distances come from one
/// BFS per source node, split across `threads` workers.
inline NetworkMeasurements measure(const Network& net, unsigned threads = 0) {
    const auto n = net.node_count();
    if (n < 3) throw Error(ErrorKind::degenerate, "network measurements need at least 3 nodes");
    if (!is_connected(net)) throw Error(ErrorKind::data, "network is not connected; take the giant component first");

    NetworkMeasurements m;
    m.nodes = n;
    m.edges = net.edge_count();
    const double N = static_cast<double>(n), E = static_cast<double>(m.edges);
    m.avg_degree = 2.0 * E / N;
    m.density = 2.0 * E / (N * (N - 1.0));

    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 64)));
    std::vector<detail::DistanceTotals> parts(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            const auto begin = static_cast<NodeId>(n * w / threads);
            const auto end = static_cast<NodeId>(n * (w + 1) / threads);
            if (threads == 1)
                parts[w] = detail::distance_totals(net, begin, end);
            else
                pool.emplace_back([&, w, begin, end] { parts[w] = detail::distance_totals(net, begin, end); });
        }
    }
    detail::DistanceTotals total;
    for (const auto& p : parts) {
        total.sum += p.sum;
        total.at2 += p.at2;
        total.at3 += p.at3;
        total.max = std::max(total.max, p.max);
    }
    m.avg_path_length = static_cast<double>(total.sum) / (N * (N - 1.0));
    m.diameter = total.max;
    m.avg_hier_degree_2 = static_cast<double>(total.at2) / N;
    m.avg_hier_degree_3 = static_cast<double>(total.at3) / N;

    const auto cc = clustering_coefficients(net);
    double cc_sum = 0;
    for (double c : cc) cc_sum += c;
    m.avg_clustering = cc_sum / N;

    m.assortativity = degree_assortativity(net, &m.assortativity_degenerate);

    if (n >= 50) {
        const auto degrees = net.degrees();
        const auto fit = fit_power_law(degrees);
        m.gamma = fit.gamma;
        m.gamma_reliable = fit.reliable;
        m.gamma_xmin = fit.xmin;
    }
    return m;
}

}  // namespace llna
