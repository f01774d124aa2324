#pragma once

#include <functional>

#include "cascade/core.hpp"
#include "cascade/coverage.hpp"
#include "cascade/linalg.hpp"
#include "cascade/policy_ind.hpp"

namespace cascade {

// prefix-conditional feature of an item (bar-c of its coverage difference, or
// any other map into the unit ball)
using FeatureFn = std::function<Eigen::VectorXd(const std::vector<int>& prefix, int item)>;

struct GreedySelection {
    RetrySequence seq;                        // value-maximizing prefix of the ordering
    std::vector<int> ordering;                // full greedy ordering
    std::vector<Eigen::VectorXd> features;    // conditional feature per ordered position
    ProbSequence optimistic;                  // optimistic probability per ordered position
};

// Greedy optimistic ordering: position by position take the remaining item
// with the largest sigma(f'w + eps), eps^2 = f' M^{-1} f * alpha, where f is
// the item's conditional feature given the chosen prefix. Then pick the best
// prefix length under those probabilities.
GreedySelection ucb_greedy_select(int k, const RewardProfile& profile, const SpdState& spd,
                                  const Eigen::VectorXd& w, double alpha,
                                  const FeatureFn& feature);

// Learner for the dependent outcome model. Same update machinery as the
// independent policy, but features are coverage differences of the played
// prefix, computed against the round's CoverageModel (rows aligned with the
// round's ActionSet). Features seen at selection are cached and reused by the
// following update.
class DepPolicy {
public:
    DepPolicy(int d_prime, const PolicyConfig& cfg);

    RetrySequence select(const ActionSet& actions, const CoverageModel& coverage,
                         const RewardProfile& profile);
    void update(const RetrySequence& played, const CoverageModel& coverage,
                const ProjectedFeedback& fb);

    const Eigen::VectorXd& weights() const { return w_; }
    const SpdState& spd() const { return spd_; }
    long step_count() const { return steps_; }

private:
    SpdState spd_;
    Eigen::VectorXd w_;
    long steps_ = 0;
    PolicyConfig cfg_;
    std::vector<int> cached_ordering_;
    std::vector<Eigen::VectorXd> cached_features_;
};

}  // namespace cascade
