#pragma once

#include <optional>
#include <string>

#include "cascade/core.hpp"
#include "cascade/coverage.hpp"
#include "cascade/rng.hpp"

namespace cascade {

enum class Scenario { vanilla, exponential };

Scenario scenario_from_string(const std::string& name);
std::string to_string(Scenario s);

// vanilla: every reward 1, every loss -1e-9 (numerically zero but valid).
// exponential: reward(j) = 2^(1-j), loss(j) = (4/5) * 2^(-j) - 1.
RewardProfile scenario_profile(Scenario s, int budget);

// One round as the harness sees it. true_probs holds marginal success
// probabilities when the outcome model is independent (synthetic or dataset);
// it is empty in the dependent model. dataset_rows maps the round's items back
// to rows of the source file when one exists.
struct Round {
    ActionSet actions;
    RewardProfile profile;
    ProbSequence true_probs;
    std::vector<int> dataset_rows;
};

// ---- independent synthetic model ----

struct SyntheticIndependentConfig {
    int d = 5;
    int k = 20;
    int budget = 5;
    Scenario scenario = Scenario::exponential;
    double cap = 1.0;     // admissible bound on |u'x|
    double u_norm = 1.0;  // norm of the planted parameter, at most cap
};

class SyntheticIndependentEnv {
public:
    SyntheticIndependentEnv(const SyntheticIndependentConfig& cfg, std::uint64_t seed);
    Round next();
    const Eigen::VectorXd& u() const { return u_; }

private:
    SyntheticIndependentConfig cfg_;
    Eigen::VectorXd u_;
    Rng rng_;
    long t_ = 0;
};

OutcomeVector sample_outcome_independent(const ProbSequence& probs, Rng& rng);

// ---- dependent synthetic model ----

struct SyntheticDependentConfig {
    int d_prime = 4;
    int k = 20;
    int budget = 5;
    Scenario scenario = Scenario::vanilla;
    double u_norm = 1.0;  // planted parameter has positive topic weights
};

struct DepRound {
    ActionSet actions;
    RewardProfile profile;
    CoverageModel coverage;
};

class SyntheticDependentEnv {
public:
    SyntheticDependentEnv(const SyntheticDependentConfig& cfg, std::uint64_t seed);
    DepRound next();
    const Eigen::VectorXd& u() const { return u_; }

private:
    SyntheticDependentConfig cfg_;
    Eigen::VectorXd u_;
    Rng rng_;
    long t_ = 0;
};

// success probability of each position of seq, conditioned on every earlier
// position having failed: sigma(bar_c(coverage difference)' u)
ProbSequence conditional_probs(const CoverageModel& coverage, const Eigen::VectorXd& u,
                               const std::vector<int>& seq);

// walk a cascade with the given per-position conditional probabilities:
// failures until the first success, then stop
ProjectedFeedback walk_cascade(const ProbSequence& cond_probs, Rng& rng);

ProjectedFeedback sample_outcome_dependent(const CoverageModel& coverage,
                                           const Eigen::VectorXd& u,
                                           const RetrySequence& played, Rng& rng);

// ---- chunked dataset replay ----

struct DatasetConfig {
    std::string path;
    int chunk = 100;
    int budget = 5;
    Scenario scenario = Scenario::exponential;
};

// CSV with header id,p,f1,..,fd. Embeddings are renormalized to unit norm on
// load when any row exceeds norm 1 + 1e-6, and rows marginally past the unit
// sphere (rounded output of a normalizer, say) are clipped onto it. Rounds
// are consecutive non-overlapping chunks; next() signals end of stream with
// nullopt.
class DatasetEnv {
public:
    explicit DatasetEnv(const DatasetConfig& cfg);

    std::optional<Round> next();
    void reset() { cursor_ = 0; }

    int items() const { return static_cast<int>(probs_.size()); }
    int chunks() const;
    int dim() const { return static_cast<int>(embeddings_.cols()); }
    const Eigen::MatrixXd& embeddings() const { return embeddings_; }

private:
    DatasetConfig cfg_;
    Eigen::MatrixXd embeddings_;
    std::vector<double> probs_;
    std::vector<std::int64_t> ids_;
    int cursor_ = 0;
};

}  // namespace cascade
