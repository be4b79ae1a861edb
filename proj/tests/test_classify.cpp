#include "llna/classify.hpp"
#include "llna/pca.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

using namespace llna;

namespace {

LabeledSample sample(std::vector<double> f, std::string author, std::string id) {
    return {std::move(f), std::move(author), std::move(id)};
}

/// n_authors clusters of `per_author` points; `spread` controls overlap.
std::vector<LabeledSample> clusters(std::size_t n_authors, std::size_t per_author, double spread, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LabeledSample> out;
    for (std::size_t a = 0; a < n_authors; ++a)
        for (std::size_t b = 0; b < per_author; ++b) {
            std::vector<double> f(6);
            for (std::size_t k = 0; k < f.size(); ++k)
                f[k] = (k == a % 6 ? 10.0 * static_cast<double>(1 + a / 6) : 0.0) + spread * (uniform01(rng) - 0.5);
            out.push_back(sample(f, "author" + std::to_string(a), "a" + std::to_string(a) + "-b" + std::to_string(b)));
        }
    return out;
}

}  // namespace

TEST(Knn, ExactMatchWins) {
    std::vector<LabeledSample> train{sample({0, 0}, "A", "1"), sample({5, 5}, "B", "2")};
    const std::vector<double> q{5, 5};
    EXPECT_EQ(knn_predict(train, q, 1), "B");
}

TEST(Knn, NearerPointWins) {
    std::vector<LabeledSample> train{sample({1, 0}, "A", "1"), sample({2, 0}, "B", "2")};
    const std::vector<double> q{0, 0};
    EXPECT_EQ(knn_predict(train, q, 1), "A");
}

TEST(Knn, MajorityVote) {
    std::vector<LabeledSample> train{sample({1}, "A", "1"), sample({2}, "A", "2"), sample({1.5}, "B", "3"),
                                     sample({9}, "B", "4")};
    const std::vector<double> q{0};
    EXPECT_EQ(knn_predict(train, q, 3), "A");
}

TEST(Knn, DistanceTieGoesToLowerDocumentId) {
    std::vector<LabeledSample> train{sample({1}, "B", "doc-b"), sample({-1}, "A", "doc-a")};
    const std::vector<double> q{0};
    EXPECT_EQ(knn_predict(train, q, 1), "A");
    std::reverse(train.begin(), train.end());
    EXPECT_EQ(knn_predict(train, q, 1), "A");
}

TEST(Knn, VoteTieGoesToNearestClass) {
    std::vector<LabeledSample> train{sample({2}, "A", "1"), sample({1}, "B", "2"), sample({3}, "A", "3"),
                                     sample({4}, "B", "4")};
    const std::vector<double> q{0};
    EXPECT_EQ(knn_predict(train, q, 2), "B");
    EXPECT_EQ(knn_predict(train, q, 4), "B");
}

TEST(Knn, PermutationInvariant) {
    auto train = clusters(4, 6, 30.0, 3);
    Rng rng(4);
    const std::vector<double> q{1, 2, 3, 4, 5, 6};
    const auto expected = knn_predict(train, q, 3);
    for (int i = 0; i < 20; ++i) {
        shuffle(std::span(train), rng);
        EXPECT_EQ(knn_predict(train, q, 3), expected);
    }
}

TEST(Knn, Errors) {
    std::vector<LabeledSample> empty;
    const std::vector<double> q{0};
    EXPECT_THROW(knn_predict(empty, q, 1), Error);
    std::vector<LabeledSample> one{sample({1}, "A", "1")};
    EXPECT_THROW(knn_predict(one, q, 2), Error);
    EXPECT_THROW(knn_predict(one, q, 0), Error);
}

TEST(Knn, ManhattanMetric) {
    const std::vector<double> a{0, 0}, b{3, 4};
    EXPECT_DOUBLE_EQ(distance(a, b, Metric::euclidean), 5.0);
    EXPECT_DOUBLE_EQ(distance(a, b, Metric::manhattan), 7.0);
    EXPECT_EQ(parse_metric("manhattan"), Metric::manhattan);
    EXPECT_THROW(parse_metric("cosine"), Error);
}

TEST(Folds, OneDocumentPerAuthorPerFold) {
    const auto s = clusters(8, 5, 1.0, 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto fold = stratified_folds(s, 5, seed);
        std::vector<std::set<std::string>> authors(5);
        std::vector<std::size_t> sizes(5, 0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            ASSERT_LT(fold[i], 5u);
            EXPECT_TRUE(authors[fold[i]].insert(s[i].author).second);
            ++sizes[fold[i]];
        }
        for (auto n : sizes) EXPECT_EQ(n, 8u);
    }
    EXPECT_EQ(stratified_folds(s, 5, 3), stratified_folds(s, 5, 3));
    EXPECT_NE(stratified_folds(s, 5, 3), stratified_folds(s, 5, 4));
}

TEST(Folds, TooFewPerAuthor) {
    auto s = clusters(3, 5, 1.0, 1);
    s.pop_back();
    EXPECT_THROW(stratified_folds(s, 5, 0), Error);
    EXPECT_NO_THROW(stratified_folds(s, 4, 0));
}

TEST(CrossValidate, SeparableClusters) {
    const auto s = clusters(8, 5, 1.0, 2);
    CVConfig cfg;
    cfg.repetitions = 10;
    const auto r = cross_validate(s, cfg);
    EXPECT_DOUBLE_EQ(r.mean, 1.0);
    EXPECT_DOUBLE_EQ(r.std, 0.0);
    EXPECT_EQ(r.fold_accuracies.size(), 50u);
    EXPECT_EQ(r.confusion.total(), 400u);
    EXPECT_EQ(r.confusion.row_sum(0), 50u);
}

TEST(CrossValidate, ShuffledLabelsAtChance) {
    auto s = clusters(8, 5, 1.0, 3);
    Rng rng(11);
    double total = 0;
    for (int k = 0; k < 50; ++k) {
        std::vector<std::string> labels;
        for (const auto& x : s) labels.push_back(x.author);
        shuffle(std::span(labels), rng);
        for (std::size_t i = 0; i < s.size(); ++i) s[i].author = labels[i];
        CVConfig cfg;
        cfg.repetitions = 5;
        cfg.seed = static_cast<std::uint64_t>(k);
        total += cross_validate(s, cfg).mean;
    }
    EXPECT_NEAR(total / 50.0, 0.125, 0.1);
}

TEST(CrossValidate, ConfusionTraceIsAccuracyAndMeanOfFolds) {
    const auto s = clusters(4, 5, 25.0, 5);
    CVConfig cfg;
    cfg.repetitions = 7;
    cfg.knn_k = 3;
    const auto r = cross_validate(s, cfg);
    double mean = 0;
    for (double a : r.fold_accuracies) {
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
        mean += a;
    }
    mean /= static_cast<double>(r.fold_accuracies.size());
    EXPECT_NEAR(r.mean, mean, 1e-12);
    // folds of equal size make the pooled accuracy equal to the mean
    EXPECT_NEAR(r.confusion.accuracy(), r.mean, 1e-12);
    EXPECT_EQ(static_cast<double>(r.confusion.correct()) / static_cast<double>(r.confusion.total()),
              r.confusion.accuracy());
    for (std::size_t i = 0; i < r.confusion.size(); ++i) EXPECT_EQ(r.confusion.row_sum(i), 5u * 7u);
    EXPECT_EQ(cross_validate(s, cfg).fold_accuracies, r.fold_accuracies);
}

TEST(PValue, Examples) {
    EXPECT_LE(binomial_p_value(33, 40, 0.125), 1e-15);
    EXPECT_NEAR(binomial_p_value(0, 40, 0.125), 1.0, 1e-12);
    EXPECT_NEAR(binomial_p_value(40, 40, 0.125) / std::pow(0.125, 40), 1.0, 1e-9);
    EXPECT_THROW(binomial_p_value(41, 40, 0.5), Error);
    EXPECT_THROW(binomial_p_value(1, 40, 1.0), Error);
}

TEST(PValue, MatchesDirectSumAndIsMonotone) {
    // direct evaluation with exact binomial coefficients for small n
    const std::size_t n = 20;
    const double p = 0.3;
    double prev = 2.0;
    for (std::size_t c = 0; c <= n; ++c) {
        double direct = 0;
        for (std::size_t a = c; a <= n; ++a) {
            double binom = 1;
            for (std::size_t k = 0; k < a; ++k) binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
            direct += binom * std::pow(p, static_cast<double>(a)) * std::pow(1 - p, static_cast<double>(n - a));
        }
        const double got = binomial_p_value(c, n, p);
        EXPECT_NEAR(got / direct, 1.0, 1e-10);
        EXPECT_LT(got, prev);
        prev = got;
    }
}

// ---------------------------------------------------------------------------

TEST(Pca, PlaneRecoveryPreservesDistances) {
    Rng rng(1);
    // orthonormal basis of a plane in 140-D
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(140, 2);
    for (int i = 0; i < 140; ++i) basis(i, 0) = uniform01(rng) - 0.5, basis(i, 1) = uniform01(rng) - 0.5;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(140, 2);
    std::vector<std::vector<double>> samples;
    std::vector<Eigen::Vector2d> coords;
    for (int s = 0; s < 12; ++s) {
        Eigen::Vector2d c(uniform01(rng) * 10, uniform01(rng) * 3);
        coords.push_back(c);
        Eigen::VectorXd x = q * c;
        samples.emplace_back(x.data(), x.data() + x.size());
    }
    const auto proj = pca_project(samples);
    EXPECT_FALSE(proj.degenerate);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            const double d0 = (coords[i] - coords[j]).norm();
            const double d1 = std::hypot(proj.points[i][0] - proj.points[j][0], proj.points[i][1] - proj.points[j][1]);
            EXPECT_NEAR(d0, d1, 1e-9);
        }
}

TEST(Pca, DuplicatesProjectIdentically) {
    Rng rng(2);
    std::vector<std::vector<double>> samples;
    for (int s = 0; s < 5; ++s) {
        std::vector<double> x(7);
        for (auto& v : x) v = uniform01(rng);
        samples.push_back(x);
        samples.push_back(x);
    }
    const auto proj = pca_project(samples);
    for (std::size_t i = 0; i < samples.size(); i += 2) {
        EXPECT_EQ(proj.points[i], proj.points[i + 1]);
    }
}

TEST(Pca, ReconstructionErrorIsTrailingEigenvalues) {
    Rng rng(3);
    const int n = 10, d = 140;
    std::vector<std::vector<double>> samples(n, std::vector<double>(d));
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = samples[i][j] = uniform01(rng);
    const auto proj = pca_project(samples);
    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    // oracle: singular values of the centered data
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const auto sv = svd.singularValues();
    double trailing = 0;
    for (int k = 2; k < sv.size(); ++k) trailing += sv(k) * sv(k) / (n - 1);
    // residual after projecting onto the two axes: total variance minus captured variance
    double captured = 0;
    for (const auto& p : proj.points) captured += p[0] * p[0] + p[1] * p[1];
    const double total = centered.squaredNorm();
    EXPECT_NEAR((total - captured) / (n - 1), trailing, 1e-9);
    EXPECT_NEAR(proj.explained_variance[0], sv(0) * sv(0) / (n - 1), 1e-9);
    EXPECT_NEAR(proj.total_variance - proj.explained_variance[0] - proj.explained_variance[1], trailing, 1e-9);
}

TEST(Pca, DegenerateAndPreconditions) {
    std::vector<std::vector<double>> same(4, std::vector<double>{1, 2, 3});
    const auto p = pca_project(same);
    EXPECT_TRUE(p.degenerate);
    for (const auto& pt : p.points) EXPECT_EQ(pt, (std::array<double, 2>{0, 0}));
    EXPECT_THROW(pca_project(std::vector<std::vector<double>>(2, {1.0, 2.0})), Error);
    EXPECT_THROW(pca_project(std::vector<std::vector<double>>(5, {1.0})), Error);
}

TEST(Pca, SignConvention) {
    Rng rng(9);
    std::vector<std::vector<double>> samples;
    for (int s = 0; s < 20; ++s) samples.push_back({uniform01(rng) * 5, uniform01(rng), uniform01(rng) * 0.1});
    const auto a = pca_project(samples);
    for (auto& s : samples)
        for (auto& v : s) v = -v;
    const auto b = pca_project(samples);
    // negating the data leaves the axes (and their signs) unchanged, so projections flip
    for (std::size_t i = 0; i < samples.size(); ++i) {
        EXPECT_NEAR(a.points[i][0], -b.points[i][0], 1e-9);
        EXPECT_NEAR(a.points[i][1], -b.points[i][1], 1e-9);
    }
}
