#pragma once

#include "cascade/core.hpp"
#include "cascade/linalg.hpp"

namespace cascade {

struct PolicyConfig {
    double slab_cap = 1.0;     // admissible bound D on |w'x|
    double alpha = 1.0;        // exploration width scale (0 disables exploration)
    double learning_rate = 1.0;
    int max_budget = 1;        // b: ridge of the initial matrix and cap on budgets
    double delta = 0.1;        // confidence level, must lie in (0, 1/e)

    void validate() const;
};

double c_sigma(double cap);        // sigma(D)
double c_sigma_prime(double cap);  // sigma'(D)

// Theoretical exploration scale: the four-term closed form
//   2 b D^2
//   + (c/c')^2 d log(1 + (2/b)(T c/(1-c) + 4 log(4(T+1)/delta)))
//   + 2 (12 (c/c')^2 + 36 (1+D)/c') log(2b(T+4)/delta)
//   + 20 D^2 log(2bd(T+1)/delta)
// with c = c_sigma(D), c' = c_sigma_prime(D).
double compute_alpha(int b, int d, long T, double delta, double cap);

// Online learner for the independent outcome model. Keeps M (initially b * I)
// and w (initially 0); selection scores every item with an optimistic logistic
// probability sigma(x'w + eps), eps^2 = x' M^{-1} x * alpha, sorts, and picks
// the best prefix length. Updates walk the played positions in order: observed
// positions project w onto the slab |w'x| <= D in the metric of the current M,
// add x x' to M, then take a Newton step with the updated inverse; positions
// past the first success are skipped entirely.
class IndPolicy {
public:
    IndPolicy(int dim, const PolicyConfig& cfg);

    RetrySequence select(const ActionSet& actions, const RewardProfile& profile) const;
    void update(const RetrySequence& played, const ActionSet& actions,
                const ProjectedFeedback& fb);

    const Eigen::VectorXd& weights() const { return w_; }
    const SpdState& spd() const { return spd_; }
    long step_count() const { return steps_; }
    const PolicyConfig& config() const { return cfg_; }

private:
    SpdState spd_;
    Eigen::VectorXd w_;
    long steps_ = 0;  // total positions committed across rounds
    PolicyConfig cfg_;
};

// shared by the optimistic policies: sort candidate probabilities descending
// (ties to the smaller index) and return the value-maximizing prefix
RetrySequence best_prefix_by_prob(const ProbSequence& probs, const RewardProfile& profile);

}  // namespace cascade
