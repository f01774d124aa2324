#include "cascade/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cascade {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double realized_reward(const RetrySequence& j, const OutcomeVector& y,
                       const RewardProfile& profile) {
    if (j.length() > profile.budget())
        throw std::invalid_argument("realized_reward: sequence longer than budget");
    for (int pos = 0; pos < j.length(); ++pos) {
        const int idx = j.at(pos);
        if (idx >= static_cast<int>(y.bits.size()))
            throw std::out_of_range("realized_reward: sequence index outside outcome vector");
        if (y.bits[static_cast<std::size_t>(idx)]) return profile.reward(pos + 1);
    }
    return profile.loss(j.length());
}

double reward_from_feedback(const ProjectedFeedback& fb, const RewardProfile& profile) {
    const int n = static_cast<int>(fb.observed.size());
    if (fb.terminated_by_success) return profile.reward(n);
    return profile.loss(n);
}

double expected_reward(const ProbSequence& probs, const RewardProfile& profile) {
    const int s = static_cast<int>(probs.size());
    if (s > profile.budget())
        throw std::invalid_argument("expected_reward: more positions than budget");
    double e = profile.loss(s);
    for (int k = s; k >= 1; --k) {
        const double p = std::clamp(probs[static_cast<std::size_t>(k - 1)], 1e-12, 1.0 - 1e-12);
        e = p * profile.reward(k) + (1.0 - p) * e;
    }
    return e;
}

}  // namespace cascade
