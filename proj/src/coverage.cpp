#include "cascade/coverage.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cascade/rng.hpp"

namespace cascade {

namespace {

constexpr double kVarFloor = 1e-8;
constexpr double kWeightFloor = 1e-8;
constexpr double kRespFloor = 1e-12;
constexpr double kLog2Pi = 1.83787706640934548356;

Eigen::MatrixXd kmeanspp_centers(const Eigen::MatrixXd& data, int k, Rng& rng) {
    const int n = static_cast<int>(data.rows());
    Eigen::MatrixXd centers(k, data.cols());
    centers.row(0) = data.row(rng.uniform_int(n));
    Eigen::VectorXd d2 = (data.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        int pick = -1;
        if (total > 0.0) {
            double target = rng.next_double() * total;
            for (int i = 0; i < n; ++i) {
                target -= d2(i);
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        if (pick < 0) pick = rng.uniform_int(n);
        centers.row(c) = data.row(pick);
        d2 = d2.cwiseMin((data.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    return centers;
}

}  // namespace

void GaussianMixture::fit(const Eigen::MatrixXd& data, const GmmConfig& cfg) {
    const int n = static_cast<int>(data.rows());
    if (cfg.components < 1) throw std::invalid_argument("GaussianMixture: need at least one component");
    if (n < cfg.components) throw std::invalid_argument("GaussianMixture: fewer points than components");

    Rng rng = Rng::stream(cfg.seed, "gmm");
    const int k = cfg.components;
    means_ = kmeanspp_centers(data, k, rng);
    const Eigen::RowVectorXd mean = data.colwise().mean();
    Eigen::RowVectorXd global_var =
        ((data.rowwise() - mean).array().square().colwise().sum() / n).cwiseMax(kVarFloor);
    vars_ = global_var.replicate(k, 1);
    weights_ = Eigen::VectorXd::Constant(k, 1.0 / k);

    Eigen::MatrixXd resp(n, k);
    double prev_ll = -std::numeric_limits<double>::infinity();
    bool reseeded = false;

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        // E step in log space
        double ll = 0.0;
        Eigen::VectorXd worst_fit = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd lp = log_density(data.row(i));
            const double m = lp.maxCoeff();
            const double lse = m + std::log((lp.array() - m).exp().sum());
            resp.row(i) = (lp.array() - lse).exp();
            ll += lse;
            worst_fit(i) = lse;
        }
        if (std::abs(ll - prev_ll) < cfg.tol) break;
        prev_ll = ll;

        // M step
        Eigen::VectorXd nc = resp.colwise().sum();
        int dead = -1;
        for (int c = 0; c < k; ++c)
            if (nc(c) / n < kWeightFloor) dead = c;
        if (dead >= 0) {
            if (reseeded) throw std::runtime_error("GaussianMixture: component collapsed twice");
            reseeded = true;
            int worst = 0;
            worst_fit.minCoeff(&worst);
            means_.row(dead) = data.row(worst);
            vars_.row(dead) = global_var;
            weights_.setConstant(1.0 / k);
            prev_ll = -std::numeric_limits<double>::infinity();
            continue;
        }
        weights_ = nc / n;
        for (int c = 0; c < k; ++c) {
            const Eigen::RowVectorXd mu = (resp.col(c).transpose() * data) / nc(c);
            means_.row(c) = mu;
            const Eigen::MatrixXd centered = data.rowwise() - mu;
            vars_.row(c) =
                ((centered.array().square().colwise() * resp.col(c).array()).colwise().sum() / nc(c))
                    .cwiseMax(kVarFloor);
        }
    }
}

Eigen::VectorXd GaussianMixture::log_density(const Eigen::VectorXd& x) const {
    const int k = components();
    Eigen::VectorXd lp(k);
    for (int c = 0; c < k; ++c) {
        const Eigen::ArrayXd diff = x.transpose().array() - means_.row(c).array();
        const Eigen::ArrayXd var = vars_.row(c).array();
        lp(c) = std::log(weights_(c)) -
                0.5 * (var.log() + kLog2Pi + diff.square() / var).sum();
    }
    return lp;
}

Eigen::VectorXd GaussianMixture::responsibilities(const Eigen::VectorXd& x) const {
    if (weights_.size() == 0) throw std::runtime_error("GaussianMixture: not fitted");
    const Eigen::VectorXd lp = log_density(x);
    const double m = lp.maxCoeff();
    const double lse = m + std::log((lp.array() - m).exp().sum());
    return (lp.array() - lse).exp().max(kRespFloor);
}

CoverageModel::CoverageModel(Eigen::MatrixXd coverage) : coverage_(std::move(coverage)) {
    if ((coverage_.array() < 0.0).any() || (coverage_.array() > 1.0).any())
        throw std::invalid_argument("CoverageModel: entries must lie in [0, 1]");
}

Eigen::VectorXd CoverageModel::set_coverage(const std::vector<int>& subset) const {
    Eigen::ArrayXd miss = Eigen::ArrayXd::Ones(dim());
    for (int i : subset) {
        if (i < 0 || i >= size())
            throw std::out_of_range("CoverageModel::set_coverage: item out of range");
        miss *= 1.0 - coverage_.row(i).transpose().array();
    }
    return 1.0 - miss;
}

Eigen::VectorXd CoverageModel::coverage_difference(const std::vector<int>& prefix,
                                                  int candidate) const {
    std::vector<int> extended = prefix;
    extended.push_back(candidate);
    return set_coverage(extended) - set_coverage(prefix);
}

CoverageModel CoverageModel::slice(const std::vector<int>& rows) const {
    Eigen::MatrixXd out(static_cast<int>(rows.size()), dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= size())
            throw std::out_of_range("CoverageModel::slice: row out of range");
        out.row(static_cast<int>(i)) = coverage_.row(rows[i]);
    }
    return CoverageModel(out);
}

Eigen::VectorXd bar_c(const Eigen::VectorXd& diff) {
    if (diff.size() == 0) throw std::invalid_argument("bar_c: empty difference vector");
    return (2.0 * diff.array() - 1.0) / std::sqrt(static_cast<double>(diff.size()));
}

CoverageModel build_coverage_from_embeddings(const Eigen::MatrixXd& embeddings, int d_prime,
                                             std::uint64_t seed) {
    GaussianMixture gm;
    GmmConfig cfg;
    cfg.components = d_prime;
    cfg.seed = seed;
    gm.fit(embeddings, cfg);
    Eigen::MatrixXd cov(embeddings.rows(), d_prime);
    for (int i = 0; i < embeddings.rows(); ++i)
        cov.row(i) = gm.responsibilities(embeddings.row(i)).transpose();
    return CoverageModel(cov.cwiseMin(1.0));
}

}  // namespace cascade
