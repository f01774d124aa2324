#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cascade {

// Success probabilities per position, listed in the order the items are tried.
using ProbSequence = std::vector<double>;

// Items offered in one round: feature vectors on or inside the unit ball plus
// stable integer ids.
class ActionSet {
public:
    ActionSet() = default;
    ActionSet(std::vector<Eigen::VectorXd> items, std::vector<std::int64_t> ids);

    int size() const { return static_cast<int>(items_.size()); }
    int dim() const { return items_.empty() ? 0 : static_cast<int>(items_[0].size()); }
    const Eigen::VectorXd& item(int i) const { return items_.at(static_cast<std::size_t>(i)); }
    std::int64_t id(int i) const { return ids_.at(static_cast<std::size_t>(i)); }

private:
    std::vector<Eigen::VectorXd> items_;
    std::vector<std::int64_t> ids_;
};

// Payoff schedule of one round with budget b: reward(k) is earned when the
// first success happens at position k (1-based), loss(s) is charged when all
// s attempted items fail. loss(0) is the cost of trying nothing.
// Rewards satisfy 1 >= r_1 >= ... >= r_b > 0, losses 0 > l_0 >= ... >= l_b > -1.
class RewardProfile {
public:
    RewardProfile(std::vector<double> rewards, std::vector<double> losses);

    int budget() const { return static_cast<int>(rewards_.size()); }
    double reward(int k) const;
    double loss(int s) const;
    const std::vector<double>& rewards() const { return rewards_; }
    const std::vector<double>& losses() const { return losses_; }

private:
    std::vector<double> rewards_;
    std::vector<double> losses_;
};

// Ordered distinct item indices the learner commits to trying this round.
class RetrySequence {
public:
    RetrySequence() = default;
    explicit RetrySequence(std::vector<int> items);

    int length() const { return static_cast<int>(items_.size()); }
    bool empty() const { return items_.empty(); }
    int at(int pos) const { return items_.at(static_cast<std::size_t>(pos)); }
    const std::vector<int>& items() const { return items_; }

private:
    std::vector<int> items_;
};

// Latent Bernoulli outcome of every item in the round's ActionSet.
struct OutcomeVector {
    std::vector<std::uint8_t> bits;
};

// What the learner actually observes: the outcomes of attempted positions, cut
// off after the first success. Either all zeros (every attempt failed) or zeros
// followed by a single trailing one.
struct ProjectedFeedback {
    std::vector<std::uint8_t> observed;
    bool terminated_by_success = false;
};

ProjectedFeedback make_feedback(std::vector<std::uint8_t> observed);

// Walk the retry sequence through the latent outcomes: record failures until
// the first success (inclusive), then stop.
ProjectedFeedback project_feedback(const OutcomeVector& y, const RetrySequence& j);

// Per-position update signs for a played length s: -1 observed failure,
// +1 observed success, 0 never attempted because of early termination.
std::vector<int> feedback_signs(const ProjectedFeedback& fb, int s);

}  // namespace cascade
