#include "cascade/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace cascade {

SpdState::SpdState(int dim, double ridge) {
    if (dim <= 0) throw std::invalid_argument("SpdState: dimension must be positive");
    if (ridge <= 0.0) throw std::invalid_argument("SpdState: ridge must be positive");
    m_ = ridge * Eigen::MatrixXd::Identity(dim, dim);
    m_inv_ = (1.0 / ridge) * Eigen::MatrixXd::Identity(dim, dim);
}

void SpdState::rank_one_update(const Eigen::VectorXd& x, double weight) {
    if (x.size() != m_.rows())
        throw std::invalid_argument("SpdState::rank_one_update: dimension mismatch");
    if (weight < 0.0)
        throw std::invalid_argument("SpdState::rank_one_update: weight must be non-negative");
    if (weight == 0.0) return;

    m_.noalias() += weight * x * x.transpose();
    const Eigen::VectorXd v = m_inv_ * x;
    const double denom = 1.0 + weight * x.dot(v);
    m_inv_.noalias() -= (weight / denom) * v * v.transpose();
    m_inv_ = ((m_inv_ + m_inv_.transpose()) * 0.5).eval();

    if (++updates_ % kRefreshPeriod == 0) refresh();
}

void SpdState::refresh() {
    m_inv_ = m_.ldlt().solve(Eigen::MatrixXd::Identity(m_.rows(), m_.cols()));
    m_inv_ = ((m_inv_ + m_inv_.transpose()) * 0.5).eval();
}

double SpdState::mahalanobis_sq(const Eigen::VectorXd& u, const Eigen::VectorXd& w) const {
    if (u.size() != m_.rows() || w.size() != m_.rows())
        throw std::invalid_argument("SpdState::mahalanobis_sq: dimension mismatch");
    const Eigen::VectorXd d = u - w;
    return d.dot(m_ * d);
}

double SpdState::inv_quad(const Eigen::VectorXd& x) const {
    if (x.size() != m_.rows())
        throw std::invalid_argument("SpdState::inv_quad: dimension mismatch");
    return x.dot(m_inv_ * x);
}

Eigen::VectorXd SpdState::slab_project(const Eigen::VectorXd& w, const Eigen::VectorXd& x,
                                       double cap) const {
    if (w.size() != m_.rows() || x.size() != m_.rows())
        throw std::invalid_argument("SpdState::slab_project: dimension mismatch");
    if (cap <= 0.0)
        throw std::invalid_argument("SpdState::slab_project: cap must be positive");
    const double margin = w.dot(x);
    if (std::abs(margin) <= cap) return w;
    const double q = inv_quad(x);
    if (q <= 1e-12)
        throw std::runtime_error("SpdState::slab_project: vanishing inverse quadratic form");
    const double excess = margin > cap ? margin - cap : margin + cap;
    return w - (excess / q) * (m_inv_ * x);
}

}  // namespace cascade
