#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/env.hpp"
#include "cascade/policy_ind.hpp"

namespace cascade {

enum class EnvKind { synthetic_independent, synthetic_dependent, dataset };

EnvKind env_kind_from_string(const std::string& name);
std::string to_string(EnvKind k);

// Everything a run needs. Policies are named: ind, dep, random, eps_greedy,
// cascade_ucb1, glm_mle, bayes.
struct ExperimentConfig {
    EnvKind env = EnvKind::synthetic_independent;
    long T = 1000;             // rounds; datasets stop early at end of stream
    std::uint64_t seed = 1;
    Scenario scenario = Scenario::exponential;
    int budget = 5;
    int d = 5;
    int k = 20;
    int d_prime = 4;
    double u_norm = 1.0;
    std::vector<std::string> policies = {"ind", "random"};

    double alpha = 0.1;
    bool theoretical_alpha = false;
    double learning_rate = 1.0;
    double slab_cap = 1.0;
    double delta = 0.1;
    double eps = 0.1;
    double glm_lambda = 1.0;
    double glm_alpha = 0.1;

    std::string dataset_path;
    int chunk = 100;
    std::uint64_t gmm_seed = 7;

    std::string out = "run.csv";

    void validate() const;
};

struct RoundRecord {
    long t = 0;
    RetrySequence played;
    int s_observed = 0;
    double reward = 0.0;
    double cum_reward = 0.0;
    std::optional<double> bayes_value;
    std::optional<double> expected_value;  // true expected payoff of the played sequence
    std::optional<double> regret_cum;
};

struct PolicyResult {
    std::string name;
    std::vector<RoundRecord> rounds;
    double final_cr = 0.0;
    std::optional<double> final_regret;
};

struct RunResult {
    std::vector<PolicyResult> policies;
    long rounds_run = 0;
    double cr_max = 0.0;  // best possible cumulative reward, sum of r_1 per round
};

RunResult run_experiment(const ExperimentConfig& cfg);

// rows grouped by policy in config order, t ascending; doubles as %.17g
void write_csv(const RunResult& result, std::ostream& out);

// key = value lines; the config echo excludes the seed so only realized
// quantities change when the seed does
std::string summary_text(const RunResult& result, const ExperimentConfig& cfg);

// run, write the CSV to cfg.out, the summary to cfg.out + ".summary.txt" and
// to stdout
RunResult run_and_write(const ExperimentConfig& cfg);

// normalized cumulative reward; nullopt when the normalization is degenerate
std::optional<double> ncr(double cr_alg, double cr_random, double cr_max);

}  // namespace cascade
