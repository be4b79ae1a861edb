#pragma once

#include "bits.hpp"
#include "graph.hpp"
#include "random.hpp"
#include "rule.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

namespace llna {

/// Density bin of a node: floor(9 * alive / degree), with a fully alive
/// neighborhood (density 1) clamped into bin 8.
constexpr int density_bin(std::size_t alive_neighbors, std::size_t degree) {
    if (degree == 0) throw Error(ErrorKind::degenerate, "density undefined for an isolated node");
    if (alive_neighbors > degree) throw Error(ErrorKind::usage, "more alive neighbors than neighbors");
    const auto bin = static_cast<int>(alive_neighbors * density_bins / degree);
    return std::min(bin, density_bins - 1);
}

using StateVector = std::vector<std::uint8_t>;

/// One synchronous update of every node.
inline StateVector step(const Network& net, std::span<const std::uint8_t> states, Rule rule) {
    if (states.size() != net.node_count()) throw Error(ErrorKind::usage, "state vector size does not match network");
    StateVector next(states.size(), 0);
    for (NodeId i = 0; i < net.node_count(); ++i) {
        std::size_t alive = 0;
        for (NodeId j : net.neighbors(i)) alive += states[j] != 0;
        next[i] = rule.next(states[i] != 0, density_bin(alive, net.degree(i))) ? 1 : 0;
    }
    return next;
}

/// Independent Bernoulli(alive_probability) states from a seeded generator.
inline StateVector init_state(std::size_t n, std::uint64_t seed, double alive_probability = 0.5) {
    if (n == 0) throw Error(ErrorKind::usage, "init_state needs at least one node");
    Rng rng(seed);
    StateVector s(n);
    for (auto& v : s) v = uniform01(rng) < alive_probability ? 1 : 0;
    return s;
}

/// Node permutation by ascending degree, ties by node index.
inline std::vector<NodeId> degree_order(const Network& net) {
    std::vector<NodeId> order(net.node_count());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return net.degree(a) < net.degree(b); });
    return order;
}

/// N x (T+1) binary state history. Row r is node node_order()[r] across
/// time; column t is the whole network at time t. Both orientations are kept
/// bit-packed.
class SpatioTemporalMatrix {
  public:
    SpatioTemporalMatrix() = default;

    void reset(std::size_t nodes, std::size_t steps) {
        nodes_ = nodes;
        steps_ = steps;
        row_words_ = words_for_bits(steps + 1);
        col_words_ = words_for_bits(nodes);
        rows_.assign(nodes_ * row_words_, 0);
        cols_.assign((steps_ + 1) * col_words_, 0);
    }

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t steps() const noexcept { return steps_; }  // T; there are T+1 columns
    std::size_t times() const noexcept { return steps_ + 1; }

    bool operator()(std::size_t row, std::size_t t) const noexcept { return this->row(row)[t]; }

    /// Node series (one node across all times).
    BitView row(std::size_t r) const noexcept { return {{rows_.data() + r * row_words_, row_words_}, times()}; }
    /// Network snapshot at time t (rows in degree order).
    BitView column(std::size_t t) const noexcept { return {{cols_.data() + t * col_words_, col_words_}, nodes_}; }

    std::span<const NodeId> node_order() const noexcept { return node_order_; }
    Rule rule() const noexcept { return rule_; }
    std::uint64_t seed() const noexcept { return seed_; }

    friend bool operator==(const SpatioTemporalMatrix& a, const SpatioTemporalMatrix& b) {
        return a.nodes_ == b.nodes_ && a.steps_ == b.steps_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
               a.node_order_ == b.node_order_ && a.rule_ == b.rule_ && a.seed_ == b.seed_;
    }

  private:
    friend class Automaton;

    void set_column(std::size_t t, std::span<const std::uint8_t> states) noexcept {
        std::uint64_t* col = cols_.data() + t * col_words_;
        const std::size_t word = t >> 6;
        const unsigned shift = static_cast<unsigned>(t & 63);
        std::uint64_t* row = rows_.data() + word;
        for (std::size_t base = 0; base < nodes_; base += 64) {
            const std::size_t end = std::min(nodes_, base + 64);
            std::uint64_t packed = 0;
            for (std::size_t r = base; r < end; ++r) {
                const std::uint64_t v = states[r] & 1U;
                packed |= v << (r - base);
                row[r * row_words_] |= v << shift;
            }
            col[base >> 6] = packed;
        }
    }

    std::size_t nodes_ = 0;
    std::size_t steps_ = 0;
    std::size_t row_words_ = 0;
    std::size_t col_words_ = 0;
    std::vector<std::uint64_t> rows_;
    std::vector<std::uint64_t> cols_;
    std::vector<NodeId> node_order_;
    Rule rule_;
    std::uint64_t seed_ = 0;
};

/// Network automaton engine. Holds the network renumbered in degree order
/// plus a per-node lookup table from alive-neighbor count to density bin, so
/// that one update is a neighbor sum, a table lookup and a shift.
class Automaton {
  public:
    explicit Automaton(const Network& net) : order_(degree_order(net)) {
        const auto n = net.node_count();
        for (NodeId i = 0; i < n; ++i)
            if (net.degree(i) == 0)
                throw Error(ErrorKind::degenerate, "isolated node '" + net.label(i) + "'; take the giant component first");
        std::vector<NodeId> rank(n);
        for (NodeId r = 0; r < n; ++r) rank[order_[r]] = r;

        offsets_.assign(n + 1, 0);
        for (NodeId r = 0; r < n; ++r) offsets_[r + 1] = offsets_[r] + static_cast<std::uint32_t>(net.degree(order_[r]));
        neighbors_.resize(offsets_.back());
        for (NodeId r = 0; r < n; ++r) {
            auto out = neighbors_.begin() + offsets_[r];
            for (NodeId j : net.neighbors(order_[r])) *out++ = rank[j];
            std::sort(neighbors_.begin() + offsets_[r], neighbors_.begin() + offsets_[r + 1]);
        }

        // one bin table per distinct degree, shared by all nodes of that degree
        std::vector<std::uint32_t> table_for_degree;
        bin_offset_.resize(n);
        for (NodeId r = 0; r < n; ++r) {
            const std::size_t k = offsets_[r + 1] - offsets_[r];
            if (k >= table_for_degree.size()) table_for_degree.resize(k + 1, ~std::uint32_t{0});
            if (table_for_degree[k] == ~std::uint32_t{0}) {
                table_for_degree[k] = static_cast<std::uint32_t>(bins_.size());
                for (std::size_t a = 0; a <= k; ++a) bins_.push_back(static_cast<std::uint8_t>(density_bin(a, k)));
            }
            bin_offset_[r] = table_for_degree[k];
        }
    }

    std::size_t nodes() const noexcept { return order_.size(); }
    std::span<const NodeId> node_order() const noexcept { return order_; }

    /// Evolve from `initial` (indexed by original node id) for `steps` steps
    /// into `out`, reusing its storage.
    void evolve(Rule rule, std::size_t steps, std::span<const std::uint8_t> initial, std::uint64_t seed,
                SpatioTemporalMatrix& out) const {
        const auto n = nodes();
        if (initial.size() != n) throw Error(ErrorKind::usage, "initial state size does not match network");
        if (steps < 1) throw Error(ErrorKind::usage, "evolution needs at least one step");
        out.reset(n, steps);
        out.node_order_.assign(order_.begin(), order_.end());
        out.rule_ = rule;
        out.seed_ = seed;

        // three rotating buffers: state at t-1, t, t+1
        StateVector buf[3] = {StateVector(n), StateVector(n), StateVector(n)};
        for (NodeId r = 0; r < n; ++r) buf[1][r] = initial[order_[r]] ? 1 : 0;
        out.set_column(0, buf[1]);

        const std::uint32_t code = rule.index();
        std::size_t prev = 0, cur = 1, next = 2;
        bool have_prev = false;
        for (std::size_t t = 0; t < steps; ++t) {
            const std::uint8_t* s = buf[cur].data();
            std::uint8_t* d = buf[next].data();
            for (NodeId r = 0; r < n; ++r) {
                std::uint32_t alive = 0;
                for (std::uint32_t e = offsets_[r]; e < offsets_[r + 1]; ++e) alive += s[neighbors_[e]];
                const std::uint32_t bin = bins_[bin_offset_[r] + alive];
                d[r] = static_cast<std::uint8_t>((code >> (bin + density_bins * s[r])) & 1U);
            }
            out.set_column(t + 1, buf[next]);

            // Deterministic dynamics: once a state repeats with period 1 or 2
            // the remaining columns are known.
            int period = 0;
            if (std::memcmp(d, s, n) == 0)
                period = 1;
            else if (have_prev && std::memcmp(d, buf[prev].data(), n) == 0)
                period = 2;
            if (period != 0) {
                for (std::size_t u = t + 2; u <= steps; ++u) {
                    const bool same_as_last = period == 1 || ((u - (t + 1)) % 2 == 0);
                    out.set_column(u, same_as_last ? buf[next] : buf[cur]);
                }
                return;
            }
            have_prev = true;
            const std::size_t old_prev = prev;
            prev = cur;
            cur = next;
            next = old_prev;
        }
    }

    SpatioTemporalMatrix evolve(Rule rule, std::size_t steps, std::uint64_t seed,
                                double alive_probability = 0.5) const {
        SpatioTemporalMatrix m;
        const auto initial = init_state(nodes(), seed, alive_probability);
        evolve(rule, steps, initial, seed, m);
        return m;
    }

  private:
    std::vector<NodeId> order_;
    std::vector<std::uint32_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<std::uint32_t> bin_offset_;
    std::vector<std::uint8_t> bins_;
};

/// Evolve `rule` on a connected network for `steps` steps from a seeded
/// random initial configuration.
inline SpatioTemporalMatrix evolve(const Network& net, Rule rule, std::size_t steps, std::uint64_t seed,
                                   double alive_probability = 0.5) {
    return Automaton(net).evolve(rule, steps, seed, alive_probability);
}

// ---------------------------------------------------------------------------
// Export

/// Header line, then one row per node (degree order) of comma-separated 0/1.
inline void write_matrix_csv(std::ostream& out, const SpatioTemporalMatrix& m) {
    out << "# N=" << m.nodes() << " T=" << m.steps() << " rule=" << m.rule().to_string() << " seed=" << m.seed()
        << '\n';
    std::string line;
    for (std::size_t r = 0; r < m.nodes(); ++r) {
        line.clear();
        const auto row = m.row(r);
        for (std::size_t t = 0; t < m.times(); ++t) {
            if (t) line.push_back(',');
            line.push_back(row[t] ? '1' : '0');
        }
        out << line << '\n';
    }
}

/// Binary PBM diagram: time runs down, nodes (ascending degree) run across,
/// alive nodes white and dead nodes black.
inline void write_matrix_pbm(std::ostream& out, const SpatioTemporalMatrix& m) {
    out << "P4\n# rule " << m.rule().to_string() << " seed " << m.seed() << '\n'
        << m.nodes() << ' ' << m.times() << '\n';
    std::vector<unsigned char> line((m.nodes() + 7) / 8);
    for (std::size_t t = 0; t < m.times(); ++t) {
        std::fill(line.begin(), line.end(), 0);
        const auto col = m.column(t);
        for (std::size_t r = 0; r < m.nodes(); ++r)
            if (!col[r]) line[r / 8] |= static_cast<unsigned char>(0x80U >> (r % 8));
        out.write(reinterpret_cast<const char*>(line.data()), static_cast<std::streamsize>(line.size()));
    }
}

}  // namespace llna
