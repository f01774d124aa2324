#pragma once

// Independent reference implementations used only by tests. Everything here is
// deliberately written the slow, obvious way so it shares no code path with the
// library routines it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cascade/core.hpp"
#include "cascade/rng.hpp"

namespace testsupport {

// Valid profile with strictly decreasing rewards (no ties, so optimal values
// are attained at a unique candidate) and non-increasing losses.
inline cascade::RewardProfile random_profile(int b, cascade::Rng& rng) {
    std::vector<double> r(static_cast<std::size_t>(b)), l(static_cast<std::size_t>(b) + 1);
    double cur = 0.2 + 0.8 * rng.next_double();
    for (int j = 0; j < b; ++j) {
        r[static_cast<std::size_t>(j)] = cur;
        cur *= 0.3 + 0.65 * rng.next_double();
    }
    double loss = -0.9 * rng.next_double() - 0.01;
    for (int j = b; j >= 0; --j) {
        l[static_cast<std::size_t>(j)] = std::max(loss, -0.999);
        loss = std::min(loss * rng.next_double(), -1e-6);
    }
    for (int j = 1; j <= b; ++j)
        l[static_cast<std::size_t>(j)] =
            std::min(l[static_cast<std::size_t>(j)], l[static_cast<std::size_t>(j - 1)]);
    return cascade::RewardProfile(r, l);
}

// Expected payoff by brute force: enumerate all 2^s outcome strings of s
// independent attempts and weight the realized payoff of each.
inline double enum_expected_reward(const cascade::ProbSequence& probs,
                                   const cascade::RewardProfile& profile) {
    const int s = static_cast<int>(probs.size());
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << s); ++mask) {
        double weight = 1.0;
        for (int i = 0; i < s; ++i) {
            const bool hit = mask & (1u << i);
            weight *= hit ? probs[static_cast<std::size_t>(i)]
                          : 1.0 - probs[static_cast<std::size_t>(i)];
        }
        double payoff = profile.loss(s);
        for (int i = 0; i < s; ++i) {
            if (mask & (1u << i)) {
                payoff = profile.reward(i + 1);
                break;
            }
        }
        total += weight * payoff;
    }
    return total;
}

// Constrained minimizer of (z - w)' M (z - w) over {z : |z'x| <= cap} by
// projected gradient descent with Euclidean projection onto the slab.
inline Eigen::VectorXd pgd_slab_min(const Eigen::MatrixXd& m, const Eigen::VectorXd& w,
                                    const Eigen::VectorXd& x, double cap, int iters = 200000) {
    const double lip = 2.0 * m.operatorNorm();
    const double step = 1.0 / lip;
    const double xx = x.squaredNorm();
    Eigen::VectorXd z = w;
    const auto clip = [&](Eigen::VectorXd v) {
        const double margin = v.dot(x);
        if (margin > cap) v -= ((margin - cap) / xx) * x;
        else if (margin < -cap) v -= ((margin + cap) / xx) * x;
        return v;
    };
    z = clip(z);
    for (int i = 0; i < iters; ++i) z = clip(z - step * (2.0 * m * (z - w)));
    return z;
}

// Central finite-difference gradient of a scalar function.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& at, double h = 1e-6) {
    Eigen::VectorXd g(at.size());
    for (int i = 0; i < at.size(); ++i) {
        Eigen::VectorXd lo = at, hi = at;
        lo(i) -= h;
        hi(i) += h;
        g(i) = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

// Upper-tail probability of a chi-square statistic with dof degrees of
// freedom, evaluated with the regularized incomplete gamma function.
double chi_square_p_value(double stat, int dof);

}  // namespace testsupport
