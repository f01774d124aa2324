#include "cascade/policy_dep.hpp"

#include <cmath>
#include <stdexcept>

#include "cascade/reward.hpp"

namespace cascade {

GreedySelection ucb_greedy_select(int k, const RewardProfile& profile, const SpdState& spd,
                                  const Eigen::VectorXd& w, double alpha,
                                  const FeatureFn& feature) {
    GreedySelection sel;
    const int s_max = std::min(profile.budget(), k);
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    std::vector<int> prefix;

    for (int step = 0; step < s_max; ++step) {
        int best = -1;
        double best_p = 0.0;
        Eigen::VectorXd best_f;
        for (int i = 0; i < k; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            const Eigen::VectorXd f = feature(prefix, i);
            const double width = std::sqrt(spd.inv_quad(f) * alpha);
            const double p = sigmoid(f.dot(w) + width);
            if (best < 0 || p > best_p) {
                best = i;
                best_p = p;
                best_f = f;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        prefix.push_back(best);
        sel.features.push_back(std::move(best_f));
        sel.optimistic.push_back(best_p);
    }
    sel.ordering = prefix;

    // prefix-length search under the optimistic probabilities, ties to shorter
    ProbSequence head;
    double best_v = expected_reward(head, profile);
    int best_s = 0;
    for (int s = 1; s <= s_max; ++s) {
        head.push_back(sel.optimistic[static_cast<std::size_t>(s - 1)]);
        const double v = expected_reward(head, profile);
        if (v > best_v) {
            best_v = v;
            best_s = s;
        }
    }
    sel.seq = RetrySequence(
        std::vector<int>(sel.ordering.begin(), sel.ordering.begin() + best_s));
    return sel;
}

DepPolicy::DepPolicy(int d_prime, const PolicyConfig& cfg)
    : spd_(d_prime, cfg.max_budget), cfg_(cfg) {
    cfg_.validate();
    w_ = Eigen::VectorXd::Zero(d_prime);
}

RetrySequence DepPolicy::select(const ActionSet& actions, const CoverageModel& coverage,
                                const RewardProfile& profile) {
    if (profile.budget() > cfg_.max_budget)
        throw std::invalid_argument("DepPolicy::select: round budget exceeds configured maximum");
    if (coverage.size() != actions.size())
        throw std::invalid_argument("DepPolicy::select: coverage must cover the action set");
    if (coverage.size() > 0 && coverage.dim() != spd_.dim())
        throw std::invalid_argument("DepPolicy::select: coverage dimension mismatch");

    const FeatureFn feature = [&coverage](const std::vector<int>& prefix, int item) {
        return bar_c(coverage.coverage_difference(prefix, item));
    };
    GreedySelection sel =
        ucb_greedy_select(actions.size(), profile, spd_, w_, cfg_.alpha, feature);
    cached_ordering_ = sel.ordering;
    cached_features_ = std::move(sel.features);
    return sel.seq;
}

void DepPolicy::update(const RetrySequence& played, const CoverageModel& coverage,
                       const ProjectedFeedback& fb) {
    // reuse the features computed at selection when the played sequence is a
    // prefix of the last ordering; otherwise recompute the same pure function
    bool cached = played.length() <= static_cast<int>(cached_ordering_.size());
    for (int pos = 0; cached && pos < played.length(); ++pos)
        cached = played.at(pos) == cached_ordering_[static_cast<std::size_t>(pos)];

    std::vector<Eigen::VectorXd> features;
    if (cached) {
        features.assign(cached_features_.begin(),
                        cached_features_.begin() + played.length());
    } else {
        std::vector<int> prefix;
        for (int pos = 0; pos < played.length(); ++pos) {
            features.push_back(bar_c(coverage.coverage_difference(prefix, played.at(pos))));
            prefix.push_back(played.at(pos));
        }
    }

    const std::vector<int> signs = feedback_signs(fb, played.length());
    for (int pos = 0; pos < played.length(); ++pos) {
        const int s = signs[static_cast<std::size_t>(pos)];
        if (s == 0) continue;
        const Eigen::VectorXd& f = features[static_cast<std::size_t>(pos)];
        const Eigen::VectorXd projected = spd_.slab_project(w_, f, cfg_.slab_cap);
        spd_.rank_one_update(f, 1.0);
        const double margin = f.dot(projected);
        const Eigen::VectorXd grad = sigmoid(-s * margin) * static_cast<double>(s) * f;
        w_ = projected + cfg_.learning_rate * (spd_.inverse() * grad);
    }
    steps_ += played.length();
}

}  // namespace cascade
