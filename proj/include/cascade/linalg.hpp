#pragma once

#include <Eigen/Dense>

namespace cascade {

// Symmetric positive definite matrix M together with a maintained inverse.
// Starts at ridge * I, grows by rank-one terms x x', so every eigenvalue stays
// at or above the ridge. The inverse is kept current with Sherman-Morrison,
// symmetrized after each step, and rebuilt from scratch every kRefreshPeriod
// updates to stop drift from accumulating.
class SpdState {
public:
    static constexpr long kRefreshPeriod = 1024;

    SpdState(int dim, double ridge);

    // M += weight * x x'. weight == 0 is an explicit no-op.
    void rank_one_update(const Eigen::VectorXd& x, double weight = 1.0);

    // (u - w)' M (u - w)
    double mahalanobis_sq(const Eigen::VectorXd& u, const Eigen::VectorXd& w) const;

    // x' M^{-1} x, the quadratic form behind confidence widths
    double inv_quad(const Eigen::VectorXd& x) const;

    // Nearest point of the slab {v : |v'x| <= cap} to w in the metric of M.
    // Closed form: w itself when feasible, otherwise
    //   w - ((w'x -/+ cap) / (x' M^{-1} x)) * M^{-1} x
    // with the sign matching the violated side.
    Eigen::VectorXd slab_project(const Eigen::VectorXd& w, const Eigen::VectorXd& x,
                                 double cap) const;

    const Eigen::MatrixXd& matrix() const { return m_; }
    const Eigen::MatrixXd& inverse() const { return m_inv_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    long updates() const { return updates_; }

private:
    void refresh();

    Eigen::MatrixXd m_;
    Eigen::MatrixXd m_inv_;
    long updates_ = 0;
};

}  // namespace cascade
