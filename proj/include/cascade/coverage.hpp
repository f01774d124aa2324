#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cascade {

struct GmmConfig {
    int components = 2;
    int max_iters = 100;
    double tol = 1e-6;
    std::uint64_t seed = 0;
};

// Diagonal-covariance Gaussian mixture fit by EM with k-means++ seeding.
// Deterministic given the seed. A component whose weight collapses below 1e-8
// is re-seeded at the worst-fit point once; a second collapse is a fit error.
class GaussianMixture {
public:
    void fit(const Eigen::MatrixXd& data, const GmmConfig& cfg);

    // posterior component probabilities of x, floored at 1e-12
    Eigen::VectorXd responsibilities(const Eigen::VectorXd& x) const;

    int components() const { return static_cast<int>(weights_.size()); }
    const Eigen::VectorXd& weights() const { return weights_; }
    const Eigen::MatrixXd& means() const { return means_; }

private:
    Eigen::VectorXd log_density(const Eigen::VectorXd& x) const;

    Eigen::VectorXd weights_;
    Eigen::MatrixXd means_;  // components x dims
    Eigen::MatrixXd vars_;   // components x dims
};

// Topic coverage table: row i holds item i's coverage of each of d' topics,
// entries in [0, 1]. Set coverage composes as a noisy-or per topic.
class CoverageModel {
public:
    CoverageModel() = default;
    explicit CoverageModel(Eigen::MatrixXd coverage);

    int size() const { return static_cast<int>(coverage_.rows()); }
    int dim() const { return static_cast<int>(coverage_.cols()); }
    Eigen::VectorXd row(int i) const { return coverage_.row(i); }

    // c_i(A) = 1 - prod_{x in A} (1 - c_i(x)), componentwise over topics
    Eigen::VectorXd set_coverage(const std::vector<int>& subset) const;

    // marginal gain of adding candidate after prefix, componentwise
    Eigen::VectorXd coverage_difference(const std::vector<int>& prefix, int candidate) const;

    CoverageModel slice(const std::vector<int>& rows) const;

private:
    Eigen::MatrixXd coverage_;
};

// Centered, scaled coverage feature (2 * diff - 1) / sqrt(d'); always inside
// the unit ball.
Eigen::VectorXd bar_c(const Eigen::VectorXd& diff);

// Coverage of each embedding over d' topics, via GMM responsibilities.
CoverageModel build_coverage_from_embeddings(const Eigen::MatrixXd& embeddings, int d_prime,
                                             std::uint64_t seed);

}  // namespace cascade
