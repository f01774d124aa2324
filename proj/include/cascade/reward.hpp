#pragma once

#include "cascade/core.hpp"

namespace cascade {

// numerically stable logistic function
double sigmoid(double z);

// Payoff actually earned for playing j against latent outcomes y: reward(k) if
// the first success lands at position k, loss(|j|) if every attempt fails,
// loss(0) for the empty sequence.
double realized_reward(const RetrySequence& j, const OutcomeVector& y,
                       const RewardProfile& profile);

// Same payoff recovered from the observed prefix alone.
double reward_from_feedback(const ProjectedFeedback& fb, const RewardProfile& profile);

// Expected payoff of trying s positions with success probabilities probs,
// computed by the backward recursion
//   E_{s+1} = loss(s),  E_k = p_k * reward(k) + (1 - p_k) * E_{k+1},
// returning E_1. Probabilities are clamped into [1e-12, 1 - 1e-12] first.
double expected_reward(const ProbSequence& probs, const RewardProfile& profile);

}  // namespace cascade
