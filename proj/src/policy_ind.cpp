#include "cascade/policy_ind.hpp"

#include <cmath>
#include <stdexcept>

#include "cascade/oracle.hpp"
#include "cascade/reward.hpp"

namespace cascade {

void PolicyConfig::validate() const {
    if (slab_cap <= 0.0) throw std::invalid_argument("PolicyConfig: slab_cap must be positive");
    if (alpha < 0.0) throw std::invalid_argument("PolicyConfig: alpha must be non-negative");
    if (learning_rate <= 0.0)
        throw std::invalid_argument("PolicyConfig: learning_rate must be positive");
    if (max_budget < 1) throw std::invalid_argument("PolicyConfig: max_budget must be at least 1");
    if (delta <= 0.0 || delta >= std::exp(-1.0))
        throw std::invalid_argument("PolicyConfig: delta must lie in (0, 1/e)");
}

double c_sigma(double cap) { return sigmoid(cap); }

double c_sigma_prime(double cap) {
    const double s = sigmoid(cap);
    return s * (1.0 - s);
}

double compute_alpha(int b, int d, long T, double delta, double cap) {
    if (b < 1 || d < 1 || T < 1) throw std::invalid_argument("compute_alpha: b, d, T must be positive");
    if (delta <= 0.0 || delta >= std::exp(-1.0))
        throw std::invalid_argument("compute_alpha: delta must lie in (0, 1/e)");
    if (cap <= 0.0) throw std::invalid_argument("compute_alpha: cap must be positive");

    const double cs = c_sigma(cap);
    const double csp = c_sigma_prime(cap);
    const double ratio_sq = (cs / csp) * (cs / csp);
    const double bd = static_cast<double>(b);
    const double Td = static_cast<double>(T);

    const double term1 = 2.0 * bd * cap * cap;
    const double term2 =
        ratio_sq * d *
        std::log(1.0 + (2.0 / bd) * (Td * cs / (1.0 - cs) + 4.0 * std::log(4.0 * (Td + 1.0) / delta)));
    const double term3 = 2.0 * (12.0 * ratio_sq + 36.0 * (1.0 + cap) / csp) *
                         std::log(2.0 * bd * (Td + 4.0) / delta);
    const double term4 = 20.0 * cap * cap * std::log(2.0 * bd * d * (Td + 1.0) / delta);
    return term1 + term2 + term3 + term4;
}

RetrySequence best_prefix_by_prob(const ProbSequence& probs, const RewardProfile& profile) {
    return bayes_sequence_independent(probs, profile);
}

IndPolicy::IndPolicy(int dim, const PolicyConfig& cfg) : spd_(dim, cfg.max_budget), cfg_(cfg) {
    cfg_.validate();
    w_ = Eigen::VectorXd::Zero(dim);
}

RetrySequence IndPolicy::select(const ActionSet& actions, const RewardProfile& profile) const {
    if (profile.budget() > cfg_.max_budget)
        throw std::invalid_argument("IndPolicy::select: round budget exceeds configured maximum");
    const int k = actions.size();
    if (k > 0 && actions.dim() != spd_.dim())
        throw std::invalid_argument("IndPolicy::select: feature dimension mismatch");

    ProbSequence optimistic(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const Eigen::VectorXd& x = actions.item(i);
        const double estimate = x.dot(w_);
        const double width = std::sqrt(spd_.inv_quad(x) * cfg_.alpha);
        optimistic[static_cast<std::size_t>(i)] = sigmoid(estimate + width);
    }
    return best_prefix_by_prob(optimistic, profile);
}

void IndPolicy::update(const RetrySequence& played, const ActionSet& actions,
                       const ProjectedFeedback& fb) {
    const std::vector<int> signs = feedback_signs(fb, played.length());
    for (int pos = 0; pos < played.length(); ++pos) {
        const int s = signs[static_cast<std::size_t>(pos)];
        if (s == 0) continue;
        const Eigen::VectorXd& x = actions.item(played.at(pos));
        const Eigen::VectorXd projected = spd_.slab_project(w_, x, cfg_.slab_cap);
        spd_.rank_one_update(x, 1.0);
        const double margin = x.dot(projected);
        const Eigen::VectorXd grad = sigmoid(-s * margin) * static_cast<double>(s) * x;
        w_ = projected + cfg_.learning_rate * (spd_.inverse() * grad);
    }
    steps_ += played.length();
}

}  // namespace cascade
