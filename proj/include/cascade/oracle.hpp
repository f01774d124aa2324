#pragma once

#include <functional>

#include "cascade/core.hpp"

namespace cascade {

struct BayesResult {
    RetrySequence seq;
    double value = 0.0;
};

// Conditional success probability of an item given the prefix already tried.
using CondProbFn = std::function<double(const std::vector<int>& prefix, int item)>;

// Bayes-optimal sequence when outcomes are independent with known marginals:
// sort by probability (descending, ties to the smaller index), then evaluate
// every prefix length s = 0..min(b, k) and keep the best. There is no
// unimodality in s, so the whole range is scanned; ties go to the shorter
// prefix.
BayesResult bayes_independent(const ProbSequence& probs, const RewardProfile& profile);
RetrySequence bayes_sequence_independent(const ProbSequence& probs, const RewardProfile& profile);

// Exhaustive reference: every ordered sequence of distinct items with length
// 0..min(b, k), values from the conditional model. Ties break to the
// lexicographically smallest sequence. Guarded to k <= 10 and b <= 6.
BayesResult brute_force_bayes(int k, const RewardProfile& profile, const CondProbFn& cond_prob);
BayesResult brute_force_bayes(const ProbSequence& probs, const RewardProfile& profile);

// Greedy ordering of length s under a conditional model: each step appends the
// remaining item with the highest conditional probability given the prefix,
// ties to the smaller index.
std::vector<int> greedy_order(int k, int s, const CondProbFn& cond_prob);

}  // namespace cascade
