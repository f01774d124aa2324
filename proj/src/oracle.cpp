#include "cascade/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cascade/reward.hpp"

namespace cascade {

namespace {

// indices sorted by probability descending, ties to the smaller index
std::vector<int> sorted_by_prob(const ProbSequence& probs) {
    std::vector<int> order(probs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double pa = probs[static_cast<std::size_t>(a)];
        const double pb = probs[static_cast<std::size_t>(b)];
        if (pa != pb) return pa > pb;
        return a < b;
    });
    return order;
}

}  // namespace

BayesResult bayes_independent(const ProbSequence& probs, const RewardProfile& profile) {
    for (double p : probs)
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("bayes_independent: probability outside [0, 1]");

    const std::vector<int> order = sorted_by_prob(probs);
    const int s_max = std::min<int>(profile.budget(), static_cast<int>(probs.size()));

    ProbSequence prefix;
    double best = expected_reward(prefix, profile);
    int best_s = 0;
    for (int s = 1; s <= s_max; ++s) {
        prefix.push_back(probs[static_cast<std::size_t>(order[s - 1])]);
        const double v = expected_reward(prefix, profile);
        if (v > best) {
            best = v;
            best_s = s;
        }
    }
    return {RetrySequence(std::vector<int>(order.begin(), order.begin() + best_s)), best};
}

RetrySequence bayes_sequence_independent(const ProbSequence& probs, const RewardProfile& profile) {
    return bayes_independent(probs, profile).seq;
}

namespace {

struct BruteSearch {
    int k;
    int s_max;
    const RewardProfile& profile;
    const CondProbFn& cond_prob;
    std::vector<int> prefix;
    ProbSequence probs;
    std::vector<bool> used;
    double best_value;
    std::vector<int> best_seq;

    // depth-first in ascending item order, so sequences are visited in
    // lexicographic order and strict improvement keeps the smallest winner
    void recurse() {
        if (static_cast<int>(prefix.size()) == s_max) return;
        for (int i = 0; i < k; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            probs.push_back(cond_prob(prefix, i));
            prefix.push_back(i);
            used[static_cast<std::size_t>(i)] = true;
            const double v = expected_reward(probs, profile);
            if (v > best_value) {
                best_value = v;
                best_seq = prefix;
            }
            recurse();
            used[static_cast<std::size_t>(i)] = false;
            prefix.pop_back();
            probs.pop_back();
        }
    }
};

}  // namespace

BayesResult brute_force_bayes(int k, const RewardProfile& profile, const CondProbFn& cond_prob) {
    if (k < 0) throw std::invalid_argument("brute_force_bayes: negative item count");
    if (k > 10 || profile.budget() > 6)
        throw std::invalid_argument("brute_force_bayes: instance too large (k <= 10, b <= 6)");

    BruteSearch search{k,
                       std::min(profile.budget(), k),
                       profile,
                       cond_prob,
                       {},
                       {},
                       std::vector<bool>(static_cast<std::size_t>(k), false),
                       expected_reward({}, profile),
                       {}};
    search.recurse();
    return {RetrySequence(search.best_seq), search.best_value};
}

BayesResult brute_force_bayes(const ProbSequence& probs, const RewardProfile& profile) {
    return brute_force_bayes(
        static_cast<int>(probs.size()), profile,
        [&probs](const std::vector<int>&, int item) {
            return probs[static_cast<std::size_t>(item)];
        });
}

std::vector<int> greedy_order(int k, int s, const CondProbFn& cond_prob) {
    if (s < 0 || s > k)
        throw std::invalid_argument("greedy_order: length must lie in [0, k]");
    std::vector<int> prefix;
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    for (int step = 0; step < s; ++step) {
        int best = -1;
        double best_p = 0.0;
        for (int i = 0; i < k; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            const double p = cond_prob(prefix, i);
            if (best < 0 || p > best_p) {
                best = i;
                best_p = p;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        prefix.push_back(best);
    }
    return prefix;
}

}  // namespace cascade
