#pragma once

#include "error.hpp"
#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llna {

struct LabeledSample {
    std::vector<double> features;
    std::string author;
    std::string document_id;
};

enum class Metric { euclidean, manhattan };

inline Metric parse_metric(std::string_view s) {
    if (s == "euclidean") return Metric::euclidean;
    if (s == "manhattan") return Metric::manhattan;
    throw Error(ErrorKind::usage, "unknown distance metric '" + std::string(s) + "'");
}

inline std::string_view to_string(Metric m) { return m == Metric::euclidean ? "euclidean" : "manhattan"; }

inline double distance(std::span<const double> a, std::span<const double> b, Metric metric = Metric::euclidean) {
    if (a.size() != b.size()) throw Error(ErrorKind::data, "feature vectors differ in length");
    double acc = 0.0;
    if (metric == Metric::euclidean) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
}

namespace detail {

struct Neighbor {
    double dist;
    const LabeledSample* sample;
};

// Orders by distance, then document id, then author: a total order that does
// not depend on the position of a sample in the training list.
inline bool nearer(const Neighbor& x, const Neighbor& y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    if (x.sample->document_id != y.sample->document_id) return x.sample->document_id < y.sample->document_id;
    return x.sample->author < y.sample->author;
}

/// Majority vote among the first k of `ranked`; a tie between classes goes
/// to the tied class whose nearest member ranks first.
inline const std::string& vote(std::span<Neighbor> ranked, std::size_t k) {
    const std::size_t kk = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(kk), ranked.end(), nearer);
    std::map<std::string_view, std::size_t> votes;
    std::size_t best = 0;
    for (std::size_t i = 0; i < kk; ++i) best = std::max(best, ++votes[ranked[i].sample->author]);
    for (std::size_t i = 0; i < kk; ++i)
        if (votes[ranked[i].sample->author] == best) return ranked[i].sample->author;
    return ranked.front().sample->author;
}

}  // namespace detail

/// k-nearest-neighbor prediction. Distance ties are broken by the lower
/// document id; vote ties by the class of the nearest tied neighbor.
inline std::string knn_predict(std::span<const LabeledSample> train, std::span<const double> query, std::size_t k,
                               Metric metric = Metric::euclidean) {
    if (train.empty()) throw Error(ErrorKind::usage, "kNN with an empty training set");
    if (k < 1 || k > train.size()) throw Error(ErrorKind::usage, "kNN requires 1 <= k <= training size");
    std::vector<detail::Neighbor> ranked;
    ranked.reserve(train.size());
    for (const auto& s : train) ranked.push_back({distance(s.features, query, metric), &s});
    return detail::vote(ranked, k);
}

/// Counts indexed [true class][predicted class]; labels sorted.
class ConfusionMatrix {
  public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> labels)
        : labels_(std::move(labels)), counts_(labels_.size() * labels_.size(), 0) {}

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }

    std::size_t index_of(std::string_view label) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
        if (it == labels_.end() || *it != label) throw Error(ErrorKind::data, "unknown class " + std::string(label));
        return static_cast<std::size_t>(it - labels_.begin());
    }

    void add(std::string_view truth, std::string_view predicted, std::size_t n = 1) {
        counts_[index_of(truth) * size() + index_of(predicted)] += n;
    }

    std::size_t operator()(std::size_t truth, std::size_t predicted) const {
        return counts_[truth * size() + predicted];
    }

    std::size_t total() const { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }

    std::size_t correct() const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < size(); ++i) c += (*this)(i, i);
        return c;
    }

    std::size_t row_sum(std::size_t truth) const {
        std::size_t s = 0;
        for (std::size_t j = 0; j < size(); ++j) s += (*this)(truth, j);
        return s;
    }

    double accuracy() const {
        const auto t = total();
        return t == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(t);
    }

  private:
    std::vector<std::string> labels_;
    std::vector<std::size_t> counts_;
};

struct CVResult {
    std::vector<double> fold_accuracies;  // repetitions x folds, repetition-major
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation of fold_accuracies
    ConfusionMatrix confusion;  // summed over all repetitions
    std::size_t k_folds = 0;
    std::size_t repetitions = 0;
};

struct CVConfig {
    std::size_t k_folds = 5;
    std::size_t knn_k = 1;
    std::size_t repetitions = 50;
    std::uint64_t seed = 1;
    Metric metric = Metric::euclidean;
};

/// Fold index of every sample for one repetition. Within each author the
/// documents (sorted by id) are shuffled and dealt round-robin, so every
/// fold receives one document per author when authors are balanced.
inline std::vector<std::size_t> stratified_folds(std::span<const LabeledSample> samples, std::size_t k_folds,
                                                 std::uint64_t seed) {
    std::map<std::string, std::vector<std::size_t>> by_author;
    for (std::size_t i = 0; i < samples.size(); ++i) by_author[samples[i].author].push_back(i);
    Rng rng(seed);
    std::vector<std::size_t> fold(samples.size(), 0);
    std::size_t offset = 0;
    for (auto& [author, members] : by_author) {
        if (members.size() < k_folds)
            throw Error(ErrorKind::data, "author '" + author + "' has " + std::to_string(members.size()) +
                                             " documents, fewer than the " + std::to_string(k_folds) + " folds");
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return samples[a].document_id < samples[b].document_id;
        });
        shuffle(std::span(members), rng);
        for (std::size_t j = 0; j < members.size(); ++j) fold[members[j]] = (j + offset) % k_folds;
        offset += members.size();
    }
    return fold;
}

/// Repeated author-stratified k-fold cross-validation of the kNN classifier.
inline CVResult cross_validate(std::span<const LabeledSample> samples, const CVConfig& cfg) {
    if (samples.empty()) throw Error(ErrorKind::usage, "cross-validation of an empty sample set");
    if (cfg.k_folds < 2) throw Error(ErrorKind::usage, "cross-validation needs at least 2 folds");
    if (cfg.repetitions < 1) throw Error(ErrorKind::usage, "cross-validation needs at least one repetition");
    if (cfg.knn_k < 1) throw Error(ErrorKind::usage, "kNN requires k >= 1");
    const auto n = samples.size();
    for (const auto& s : samples)
        if (s.features.size() != samples.front().features.size())
            throw Error(ErrorKind::data, "inconsistent feature length in sample " + s.document_id);

    std::vector<std::string> labels;
    for (const auto& s : samples) labels.push_back(s.author);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[i * n + j] = dist[j * n + i] = distance(samples[i].features, samples[j].features, cfg.metric);

    CVResult result;
    result.confusion = ConfusionMatrix(labels);
    result.k_folds = cfg.k_folds;
    result.repetitions = cfg.repetitions;
    std::vector<detail::Neighbor> ranked;
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const auto fold = stratified_folds(samples, cfg.k_folds, derive_seed(cfg.seed, rep));
        for (std::size_t f = 0; f < cfg.k_folds; ++f) {
            std::size_t tested = 0, correct = 0;
            for (std::size_t q = 0; q < n; ++q) {
                if (fold[q] != f) continue;
                ranked.clear();
                for (std::size_t j = 0; j < n; ++j)
                    if (fold[j] != f) ranked.push_back({dist[q * n + j], &samples[j]});
                if (cfg.knn_k > ranked.size()) throw Error(ErrorKind::usage, "kNN k exceeds training fold size");
                const auto& predicted = detail::vote(ranked, cfg.knn_k);
                result.confusion.add(samples[q].author, predicted);
                ++tested;
                correct += predicted == samples[q].author;
            }
            result.fold_accuracies.push_back(tested == 0 ? 0.0 : static_cast<double>(correct) / tested);
        }
    }
    const auto& acc = result.fold_accuracies;
    result.mean = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
    if (acc.size() > 1) {
        double ss = 0.0;
        for (double a : acc) ss += (a - result.mean) * (a - result.mean);
        result.std = std::sqrt(ss / static_cast<double>(acc.size() - 1));
    }
    return result;
}

/// Upper binomial tail P(X >= n_correct), X ~ Binomial(n_total, p_chance),
/// summed in log space.
inline double binomial_p_value(std::size_t n_correct, std::size_t n_total, double p_chance) {
    if (n_correct > n_total) throw Error(ErrorKind::usage, "n_correct exceeds n_total");
    if (!(p_chance > 0.0 && p_chance < 1.0)) throw Error(ErrorKind::usage, "p_chance must lie in (0, 1)");
    const double lp = std::log(p_chance), lq = std::log1p(-p_chance);
    const double ln = std::lgamma(static_cast<double>(n_total) + 1.0);
    std::vector<double> terms;
    for (std::size_t a = n_correct; a <= n_total; ++a) {
        const double na = static_cast<double>(a), nb = static_cast<double>(n_total);
        terms.push_back(ln - std::lgamma(na + 1.0) - std::lgamma(nb - na + 1.0) + na * lp + (nb - na) * lq);
    }
    const double mx = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - mx);
    return std::min(1.0, std::exp(mx + std::log(sum)));
}

}  // namespace llna
