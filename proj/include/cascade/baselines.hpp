#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/policy_ind.hpp"
#include "cascade/rng.hpp"

namespace cascade {

// Uniform length in {0, .., min(b, k)}, then a uniformly random ordered subset
// of that length.
RetrySequence random_sequence(int k, int budget, Rng& rng);

class RandomPolicy {
public:
    explicit RandomPolicy(Rng rng) : rng_(rng) {}
    RetrySequence select(const ActionSet& actions, const RewardProfile& profile);

private:
    Rng rng_;
};

// With probability eps play a random sequence, otherwise run the learner's
// selection with exploration switched off (alpha = 0). Updates always feed the
// learner, so it also learns from exploratory plays.
class EpsGreedyPolicy {
public:
    EpsGreedyPolicy(int dim, const PolicyConfig& cfg, double eps, Rng rng);

    RetrySequence select(const ActionSet& actions, const RewardProfile& profile);
    void update(const RetrySequence& played, const ActionSet& actions,
                const ProjectedFeedback& fb);

    bool explored_last() const { return explored_last_; }
    const IndPolicy& learner() const { return learner_; }

private:
    IndPolicy learner_;
    double eps_;
    Rng rng_;
    bool explored_last_ = false;
};

// Tabular cascading UCB baseline. Per-arm statistics are keyed by the item's
// stable id; the per-arm index is min(1, mean + sqrt(1.5 ln t / n)), arms never
// pulled get index 1. No feature generalization, so an arm seen once in a
// stream of fresh items never accumulates counts.
class CascadeUcb1Policy {
public:
    RetrySequence select(const ActionSet& actions, const RewardProfile& profile, long t) const;
    void update(const RetrySequence& played, const ActionSet& actions,
                const ProjectedFeedback& fb);

    double index(std::int64_t id, long t) const;
    long pulls(std::int64_t id) const;

private:
    struct Arm {
        long n = 0;
        double mean = 0.0;
    };
    std::unordered_map<std::int64_t, Arm> arms_;
};

struct GlmFitResult {
    Eigen::VectorXd w;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objectives;  // penalized objective after each accepted step
};

// Ridge-penalized logistic MLE by damped Newton-Raphson: at most max_iters
// iterations, step halving whenever a full step fails to decrease the
// objective, stop when the gradient norm falls below grad_tol. Labels are +-1.
GlmFitResult fit_logistic_mle(const std::vector<Eigen::VectorXd>& xs, const std::vector<int>& ys,
                              double lambda, const Eigen::VectorXd& w0, int max_iters = 50,
                              double grad_tol = 1e-8);

// Explore-then-commit style GLM baseline: refit the MLE on all observed
// (feature, sign) pairs once per round before selecting, score items with
// sigma(x'w + eps), eps^2 = x' H^{-1} x * alpha_explore with H the penalized
// Hessian at the fit. A failed fit falls back to the previous weights.
class GlmMlePolicy {
public:
    GlmMlePolicy(int dim, double lambda, double alpha_explore, int max_budget);

    RetrySequence select(const ActionSet& actions, const RewardProfile& profile);
    void update(const RetrySequence& played, const ActionSet& actions,
                const ProjectedFeedback& fb);

    const Eigen::VectorXd& weights() const { return w_; }

private:
    void refit();

    int dim_;
    double lambda_;
    double alpha_explore_;
    int max_budget_;
    std::vector<Eigen::VectorXd> xs_;
    std::vector<int> ys_;
    Eigen::VectorXd w_;
    Eigen::MatrixXd hessian_;
    bool warned_ = false;
};

}  // namespace cascade
