#include "cascade/core.hpp"

#include <stdexcept>
#include <unordered_set>

namespace cascade {

ActionSet::ActionSet(std::vector<Eigen::VectorXd> items, std::vector<std::int64_t> ids)
    : items_(std::move(items)), ids_(std::move(ids)) {
    if (items_.size() != ids_.size())
        throw std::invalid_argument("ActionSet: items and ids must have equal length");
    std::unordered_set<std::int64_t> seen;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (items_[i].size() != items_[0].size())
            throw std::invalid_argument("ActionSet: inconsistent feature dimensions");
        if (items_[i].norm() > 1.0 + 1e-9)
            throw std::invalid_argument("ActionSet: feature norm exceeds 1");
        if (!seen.insert(ids_[i]).second)
            throw std::invalid_argument("ActionSet: duplicate item id");
    }
}

RewardProfile::RewardProfile(std::vector<double> rewards, std::vector<double> losses)
    : rewards_(std::move(rewards)), losses_(std::move(losses)) {
    if (rewards_.empty())
        throw std::invalid_argument("RewardProfile: budget must be at least 1");
    if (losses_.size() != rewards_.size() + 1)
        throw std::invalid_argument("RewardProfile: need one loss per length 0..b");
    if (rewards_.front() > 1.0)
        throw std::invalid_argument("RewardProfile: r_1 must not exceed 1");
    for (std::size_t i = 0; i < rewards_.size(); ++i) {
        if (rewards_[i] <= 0.0)
            throw std::invalid_argument("RewardProfile: rewards must be strictly positive");
        if (i > 0 && rewards_[i] > rewards_[i - 1])
            throw std::invalid_argument("RewardProfile: rewards must be non-increasing");
    }
    for (std::size_t i = 0; i < losses_.size(); ++i) {
        if (losses_[i] >= 0.0)
            throw std::invalid_argument("RewardProfile: losses must be strictly negative");
        if (losses_[i] <= -1.0)
            throw std::invalid_argument("RewardProfile: losses must stay above -1");
        if (i > 0 && losses_[i] > losses_[i - 1])
            throw std::invalid_argument("RewardProfile: losses must be non-increasing");
    }
}

double RewardProfile::reward(int k) const {
    if (k < 1 || k > budget())
        throw std::out_of_range("RewardProfile::reward: position out of range");
    return rewards_[static_cast<std::size_t>(k - 1)];
}

double RewardProfile::loss(int s) const {
    if (s < 0 || s > budget())
        throw std::out_of_range("RewardProfile::loss: length out of range");
    return losses_[static_cast<std::size_t>(s)];
}

RetrySequence::RetrySequence(std::vector<int> items) : items_(std::move(items)) {
    std::unordered_set<int> seen;
    for (int idx : items_) {
        if (idx < 0)
            throw std::invalid_argument("RetrySequence: negative item index");
        if (!seen.insert(idx).second)
            throw std::invalid_argument("RetrySequence: duplicate item index");
    }
}

ProjectedFeedback make_feedback(std::vector<std::uint8_t> observed) {
    ProjectedFeedback fb;
    fb.observed = std::move(observed);
    for (std::size_t i = 0; i < fb.observed.size(); ++i) {
        if (fb.observed[i] > 1)
            throw std::invalid_argument("ProjectedFeedback: entries must be 0 or 1");
        if (fb.observed[i] == 1 && i + 1 != fb.observed.size())
            throw std::invalid_argument("ProjectedFeedback: success must be the final entry");
    }
    fb.terminated_by_success = !fb.observed.empty() && fb.observed.back() == 1;
    return fb;
}

ProjectedFeedback project_feedback(const OutcomeVector& y, const RetrySequence& j) {
    ProjectedFeedback fb;
    for (int pos = 0; pos < j.length(); ++pos) {
        const int idx = j.at(pos);
        if (idx >= static_cast<int>(y.bits.size()))
            throw std::out_of_range("project_feedback: sequence index outside outcome vector");
        fb.observed.push_back(y.bits[static_cast<std::size_t>(idx)]);
        if (y.bits[static_cast<std::size_t>(idx)]) {
            fb.terminated_by_success = true;
            break;
        }
    }
    return fb;
}

std::vector<int> feedback_signs(const ProjectedFeedback& fb, int s) {
    if (s < static_cast<int>(fb.observed.size()))
        throw std::invalid_argument("feedback_signs: played length shorter than feedback");
    if (!fb.terminated_by_success && s != static_cast<int>(fb.observed.size()))
        throw std::invalid_argument("feedback_signs: all-failure feedback must cover the full length");
    std::vector<int> signs(static_cast<std::size_t>(s), 0);
    for (std::size_t i = 0; i < fb.observed.size(); ++i)
        signs[i] = fb.observed[i] ? 1 : -1;
    return signs;
}

}  // namespace cascade
