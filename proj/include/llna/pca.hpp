#pragma once

#include "error.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

namespace llna {

struct PcaProjection {
    std::vector<std::array<double, 2>> points;
    std::array<double, 2> explained_variance{0.0, 0.0};  // top two covariance eigenvalues
    double total_variance = 0.0;                         // trace of the covariance
    bool degenerate = false;                             // zero-variance input; points at the origin
};

/// Projects mean-centered samples onto the two leading principal axes
/// (covariance eigenvectors, descending eigenvalue). Each axis is signed so
/// that its largest-magnitude loading is positive.
inline PcaProjection pca_project(std::span<const std::vector<double>> samples) {
    if (samples.size() < 3) throw Error(ErrorKind::degenerate, "PCA needs at least 3 samples");
    const auto n = static_cast<Eigen::Index>(samples.size());
    const auto d = static_cast<Eigen::Index>(samples.front().size());
    if (d < 2) throw Error(ErrorKind::degenerate, "PCA needs at least 2 dimensions");

    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(samples[i].size()) != d) throw Error(ErrorKind::data, "PCA samples differ in length");
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = samples[i][j];
    }
    x.rowwise() -= x.colwise().mean();
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);

    PcaProjection out;
    out.points.assign(samples.size(), {0.0, 0.0});
    out.total_variance = cov.trace();
    if (out.total_variance <= 0.0) {
        out.degenerate = true;
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    // eigenvalues ascending
    Eigen::MatrixXd axes(d, 2);
    for (int a = 0; a < 2; ++a) {
        Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - a);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        axes.col(a) = v;
        out.explained_variance[static_cast<std::size_t>(a)] = std::max(0.0, eig.eigenvalues()(d - 1 - a));
    }
    const Eigen::MatrixXd proj = x * axes;
    for (Eigen::Index i = 0; i < n; ++i) out.points[static_cast<std::size_t>(i)] = {proj(i, 0), proj(i, 1)};
    return out;
}

}  // namespace llna
