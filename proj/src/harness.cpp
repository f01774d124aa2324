#include "cascade/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "cascade/baselines.hpp"
#include "cascade/coverage.hpp"
#include "cascade/oracle.hpp"
#include "cascade/policy_dep.hpp"
#include "cascade/reward.hpp"

namespace cascade {

namespace {

const std::vector<std::string> kKnownPolicies = {
    "ind", "dep", "random", "eps_greedy", "cascade_ucb1", "glm_mle", "bayes"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// desk scale is where the exhaustive oracle stays affordable
bool desk_scale(int k, int budget) { return k <= 8 && budget <= 6; }

struct RoundData {
    ActionSet actions;
    RewardProfile profile;
    ProbSequence true_probs;        // empty in the dependent model
    const CoverageModel* coverage;  // null unless available
    long t;
};

class Runner {
public:
    explicit Runner(std::string name) : name_(std::move(name)) {}
    virtual ~Runner() = default;
    const std::string& name() const { return name_; }
    virtual RetrySequence act(const RoundData& round) = 0;
    virtual void learn(const RetrySequence&, const ProjectedFeedback&, const RoundData&) {}

private:
    std::string name_;
};

class IndRunner : public Runner {
public:
    IndRunner(int dim, const PolicyConfig& cfg) : Runner("ind"), policy_(dim, cfg) {}
    RetrySequence act(const RoundData& r) override { return policy_.select(r.actions, r.profile); }
    void learn(const RetrySequence& played, const ProjectedFeedback& fb,
               const RoundData& r) override {
        policy_.update(played, r.actions, fb);
    }

private:
    IndPolicy policy_;
};

class DepRunner : public Runner {
public:
    DepRunner(int d_prime, const PolicyConfig& cfg) : Runner("dep"), policy_(d_prime, cfg) {}
    RetrySequence act(const RoundData& r) override {
        if (!r.coverage) throw std::logic_error("dep policy needs a coverage model");
        return policy_.select(r.actions, *r.coverage, r.profile);
    }
    void learn(const RetrySequence& played, const ProjectedFeedback& fb,
               const RoundData& r) override {
        policy_.update(played, *r.coverage, fb);
    }

private:
    DepPolicy policy_;
};

class RandomRunner : public Runner {
public:
    explicit RandomRunner(Rng rng) : Runner("random"), policy_(rng) {}
    RetrySequence act(const RoundData& r) override { return policy_.select(r.actions, r.profile); }

private:
    RandomPolicy policy_;
};

class EpsRunner : public Runner {
public:
    EpsRunner(int dim, const PolicyConfig& cfg, double eps, Rng rng)
        : Runner("eps_greedy"), policy_(dim, cfg, eps, rng) {}
    RetrySequence act(const RoundData& r) override { return policy_.select(r.actions, r.profile); }
    void learn(const RetrySequence& played, const ProjectedFeedback& fb,
               const RoundData& r) override {
        policy_.update(played, r.actions, fb);
    }

private:
    EpsGreedyPolicy policy_;
};

class Cucb1Runner : public Runner {
public:
    Cucb1Runner() : Runner("cascade_ucb1") {}
    RetrySequence act(const RoundData& r) override {
        return policy_.select(r.actions, r.profile, r.t);
    }
    void learn(const RetrySequence& played, const ProjectedFeedback& fb,
               const RoundData& r) override {
        policy_.update(played, r.actions, fb);
    }

private:
    CascadeUcb1Policy policy_;
};

class GlmRunner : public Runner {
public:
    GlmRunner(int dim, double lambda, double alpha, int max_budget)
        : Runner("glm_mle"), policy_(dim, lambda, alpha, max_budget) {}
    RetrySequence act(const RoundData& r) override { return policy_.select(r.actions, r.profile); }
    void learn(const RetrySequence& played, const ProjectedFeedback& fb,
               const RoundData& r) override {
        policy_.update(played, r.actions, fb);
    }

private:
    GlmMlePolicy policy_;
};

class BayesRunner : public Runner {
public:
    explicit BayesRunner(const Eigen::VectorXd* dep_u) : Runner("bayes"), dep_u_(dep_u) {}
    RetrySequence act(const RoundData& r) override {
        if (!r.true_probs.empty() || r.actions.size() == 0)
            return bayes_sequence_independent(r.true_probs, r.profile);
        if (!r.coverage || !dep_u_)
            throw std::logic_error("bayes policy needs true probabilities");
        const CoverageModel& cov = *r.coverage;
        const Eigen::VectorXd& u = *dep_u_;
        return brute_force_bayes(r.actions.size(), r.profile,
                                 [&cov, &u](const std::vector<int>& prefix, int item) {
                                     return sigmoid(bar_c(cov.coverage_difference(prefix, item)).dot(u));
                                 })
            .seq;
    }

private:
    const Eigen::VectorXd* dep_u_;
};

}  // namespace

EnvKind env_kind_from_string(const std::string& name) {
    if (name == "synthetic_independent") return EnvKind::synthetic_independent;
    if (name == "synthetic_dependent") return EnvKind::synthetic_dependent;
    if (name == "dataset") return EnvKind::dataset;
    throw std::invalid_argument("unknown env kind: " + name);
}

std::string to_string(EnvKind k) {
    switch (k) {
        case EnvKind::synthetic_independent: return "synthetic_independent";
        case EnvKind::synthetic_dependent: return "synthetic_dependent";
        default: return "dataset";
    }
}

void ExperimentConfig::validate() const {
    if (T < 0) throw std::invalid_argument("config: T must be non-negative");
    if (budget < 1) throw std::invalid_argument("config: budget must be at least 1");
    if (d < 1 || k < 1 || d_prime < 1)
        throw std::invalid_argument("config: d, k, d_prime must be positive");
    if (policies.empty()) throw std::invalid_argument("config: need at least one policy");
    for (const auto& p : policies) {
        if (std::find(kKnownPolicies.begin(), kKnownPolicies.end(), p) == kKnownPolicies.end())
            throw std::invalid_argument("config: unknown policy " + p);
        if (std::count(policies.begin(), policies.end(), p) != 1)
            throw std::invalid_argument("config: duplicate policy " + p);
    }
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("config: eps must lie in [0, 1]");
    if (glm_lambda <= 0.0) throw std::invalid_argument("config: glm_lambda must be positive");
    if (glm_alpha < 0.0) throw std::invalid_argument("config: glm_alpha must be non-negative");
    if (chunk < 1) throw std::invalid_argument("config: chunk must be positive");
    if (env == EnvKind::dataset && dataset_path.empty())
        throw std::invalid_argument("config: dataset env needs dataset_path");
    const bool has_dep = std::find(policies.begin(), policies.end(), "dep") != policies.end();
    if (has_dep && env == EnvKind::synthetic_independent)
        throw std::invalid_argument("config: dep policy needs a coverage model");
    const bool has_bayes = std::find(policies.begin(), policies.end(), "bayes") != policies.end();
    if (has_bayes && env == EnvKind::synthetic_dependent && !desk_scale(k, budget))
        throw std::invalid_argument(
            "config: bayes policy in the dependent model needs k <= 8 and budget <= 6");

    PolicyConfig pc;
    pc.slab_cap = slab_cap;
    pc.alpha = alpha;
    pc.learning_rate = learning_rate;
    pc.max_budget = budget;
    pc.delta = delta;
    pc.validate();
}

std::optional<double> ncr(double cr_alg, double cr_random, double cr_max) {
    const double denom = cr_max - cr_random;
    if (denom <= 1e-12) return std::nullopt;
    return (cr_alg - cr_random) / denom;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    std::unique_ptr<SyntheticIndependentEnv> ind_env;
    std::unique_ptr<SyntheticDependentEnv> dep_env;
    std::unique_ptr<DatasetEnv> data_env;
    long rounds_planned = cfg.T;
    int policy_dim = cfg.d;

    switch (cfg.env) {
        case EnvKind::synthetic_independent: {
            SyntheticIndependentConfig ec{cfg.d, cfg.k, cfg.budget, cfg.scenario, cfg.slab_cap,
                                          cfg.u_norm};
            ind_env = std::make_unique<SyntheticIndependentEnv>(ec, cfg.seed);
            policy_dim = cfg.d;
            break;
        }
        case EnvKind::synthetic_dependent: {
            SyntheticDependentConfig ec{cfg.d_prime, cfg.k, cfg.budget, cfg.scenario, cfg.u_norm};
            dep_env = std::make_unique<SyntheticDependentEnv>(ec, cfg.seed);
            policy_dim = cfg.d_prime;
            break;
        }
        case EnvKind::dataset: {
            DatasetConfig ec{cfg.dataset_path, cfg.chunk, cfg.budget, cfg.scenario};
            data_env = std::make_unique<DatasetEnv>(ec);
            rounds_planned = std::min<long>(cfg.T, data_env->chunks());
            policy_dim = data_env->dim();
            break;
        }
    }

    PolicyConfig pc;
    pc.slab_cap = cfg.slab_cap;
    pc.alpha = cfg.alpha;
    pc.learning_rate = cfg.learning_rate;
    pc.max_budget = cfg.budget;
    pc.delta = cfg.delta;

    const bool has_dep = std::find(cfg.policies.begin(), cfg.policies.end(), "dep") != cfg.policies.end();
    const int dep_dim = cfg.d_prime;
    if (cfg.theoretical_alpha) {
        const int alpha_dim = has_dep && cfg.env != EnvKind::dataset ? dep_dim : policy_dim;
        pc.alpha = compute_alpha(cfg.budget, alpha_dim, std::max<long>(rounds_planned, 1), cfg.delta,
                                 cfg.slab_cap);
    }

    // coverage for dep runs over a dataset: fit once over every embedding,
    // then slice the rows of each chunk
    std::optional<CoverageModel> dataset_coverage;
    if (has_dep && data_env)
        dataset_coverage = build_coverage_from_embeddings(data_env->embeddings(), cfg.d_prime,
                                                          cfg.gmm_seed);

    std::vector<std::unique_ptr<Runner>> runners;
    std::vector<Rng> dep_outcome_streams;
    for (const auto& name : cfg.policies) {
        if (name == "ind") {
            runners.push_back(std::make_unique<IndRunner>(policy_dim, pc));
        } else if (name == "dep") {
            runners.push_back(std::make_unique<DepRunner>(dep_dim, pc));
        } else if (name == "random") {
            runners.push_back(std::make_unique<RandomRunner>(Rng::stream(cfg.seed, "policy/random")));
        } else if (name == "eps_greedy") {
            runners.push_back(std::make_unique<EpsRunner>(policy_dim, pc, cfg.eps,
                                                          Rng::stream(cfg.seed, "policy/eps_greedy")));
        } else if (name == "cascade_ucb1") {
            runners.push_back(std::make_unique<Cucb1Runner>());
        } else if (name == "glm_mle") {
            runners.push_back(std::make_unique<GlmRunner>(policy_dim, cfg.glm_lambda, cfg.glm_alpha,
                                                          cfg.budget));
        } else {
            runners.push_back(std::make_unique<BayesRunner>(dep_env ? &dep_env->u() : nullptr));
        }
        dep_outcome_streams.push_back(Rng::stream(cfg.seed, "outcome/" + name));
    }

    RunResult result;
    result.policies.resize(runners.size());
    for (std::size_t i = 0; i < runners.size(); ++i) result.policies[i].name = runners[i]->name();

    Rng outcome_stream = Rng::stream(cfg.seed, "outcome");
    std::vector<double> cum_reward(runners.size(), 0.0);
    std::vector<double> cum_regret(runners.size(), 0.0);

    for (long t = 1;; ++t) {
        if (rounds_planned >= 0 && t > rounds_planned) break;

        std::optional<Round> round;
        CoverageModel round_cov;
        const CoverageModel* cov = nullptr;
        if (ind_env) {
            round = ind_env->next();
        } else if (dep_env) {
            DepRound dr = dep_env->next();
            round = Round{std::move(dr.actions), dr.profile, {}, {}};
            round_cov = std::move(dr.coverage);
            cov = &round_cov;
        } else {
            round = data_env->next();
            if (!round) break;
            if (dataset_coverage) {
                round_cov = dataset_coverage->slice(round->dataset_rows);
                cov = &round_cov;
            }
        }

        const RoundData rd{std::move(round->actions), std::move(round->profile),
                           std::move(round->true_probs), cov, t};
        result.cr_max += rd.profile.reward(1);

        // one Bayes value per round, shared by every policy's regret column
        std::optional<double> bayes_value;
        if (!rd.true_probs.empty() || rd.actions.size() == 0) {
            bayes_value = bayes_independent(rd.true_probs, rd.profile).value;
        } else if (dep_env && desk_scale(rd.actions.size(), rd.profile.budget())) {
            const Eigen::VectorXd& u = dep_env->u();
            bayes_value =
                brute_force_bayes(rd.actions.size(), rd.profile,
                                  [&](const std::vector<int>& prefix, int item) {
                                      return sigmoid(bar_c(cov->coverage_difference(prefix, item)).dot(u));
                                  })
                    .value;
        }

        OutcomeVector shared_y;
        const bool independent_outcomes = !rd.true_probs.empty() || rd.actions.size() == 0;
        if (independent_outcomes) shared_y = sample_outcome_independent(rd.true_probs, outcome_stream);

        for (std::size_t i = 0; i < runners.size(); ++i) {
            const RetrySequence played = runners[i]->act(rd);
            ProjectedFeedback fb;
            if (independent_outcomes) {
                fb = project_feedback(shared_y, played);
            } else {
                fb = sample_outcome_dependent(*cov, dep_env->u(), played, dep_outcome_streams[i]);
            }
            const double reward = reward_from_feedback(fb, rd.profile);
            runners[i]->learn(played, fb, rd);

            RoundRecord rec;
            rec.t = t;
            rec.played = played;
            rec.s_observed = static_cast<int>(fb.observed.size());
            rec.reward = reward;
            cum_reward[i] += reward;
            rec.cum_reward = cum_reward[i];

            if (independent_outcomes) {
                ProbSequence seq_probs;
                for (int pos = 0; pos < played.length(); ++pos)
                    seq_probs.push_back(rd.true_probs[static_cast<std::size_t>(played.at(pos))]);
                rec.expected_value = expected_reward(seq_probs, rd.profile);
            } else if (bayes_value) {
                rec.expected_value =
                    expected_reward(conditional_probs(*cov, dep_env->u(), played.items()), rd.profile);
            }
            rec.bayes_value = bayes_value;
            if (bayes_value && rec.expected_value) {
                cum_regret[i] += *bayes_value - *rec.expected_value;
                rec.regret_cum = cum_regret[i];
            }
            result.policies[i].rounds.push_back(std::move(rec));
        }
        result.rounds_run = t;
    }

    for (std::size_t i = 0; i < runners.size(); ++i) {
        result.policies[i].final_cr = cum_reward[i];
        if (!result.policies[i].rounds.empty() && result.policies[i].rounds.back().regret_cum)
            result.policies[i].final_regret = cum_regret[i];
    }
    return result;
}

void write_csv(const RunResult& result, std::ostream& out) {
    out << "policy,t,s_chosen,s_observed,reward,cum_reward,bayes_value,regret_cum\n";
    for (const auto& pr : result.policies) {
        for (const auto& rec : pr.rounds) {
            out << pr.name << ',' << rec.t << ',' << rec.played.length() << ',' << rec.s_observed
                << ',' << fmt(rec.reward) << ',' << fmt(rec.cum_reward) << ',';
            if (rec.bayes_value) out << fmt(*rec.bayes_value);
            out << ',';
            if (rec.regret_cum) out << fmt(*rec.regret_cum);
            out << '\n';
        }
    }
}

std::string summary_text(const RunResult& result, const ExperimentConfig& cfg) {
    std::ostringstream ss;
    ss << "# run summary\n";
    ss << "config.env = " << to_string(cfg.env) << '\n';
    ss << "config.scenario = " << to_string(cfg.scenario) << '\n';
    ss << "config.T = " << cfg.T << '\n';
    ss << "config.budget = " << cfg.budget << '\n';
    ss << "config.d = " << cfg.d << '\n';
    ss << "config.k = " << cfg.k << '\n';
    ss << "config.d_prime = " << cfg.d_prime << '\n';
    ss << "config.u_norm = " << fmt(cfg.u_norm) << '\n';
    std::string names;
    for (const auto& p : cfg.policies) names += (names.empty() ? "" : ",") + p;
    ss << "config.policies = " << names << '\n';
    ss << "config.alpha = " << fmt(cfg.alpha) << '\n';
    ss << "config.theoretical_alpha = " << (cfg.theoretical_alpha ? 1 : 0) << '\n';
    ss << "config.learning_rate = " << fmt(cfg.learning_rate) << '\n';
    ss << "config.slab_cap = " << fmt(cfg.slab_cap) << '\n';
    ss << "config.delta = " << fmt(cfg.delta) << '\n';
    ss << "config.eps = " << fmt(cfg.eps) << '\n';
    ss << "config.glm_lambda = " << fmt(cfg.glm_lambda) << '\n';
    ss << "config.glm_alpha = " << fmt(cfg.glm_alpha) << '\n';
    ss << "config.dataset = " << cfg.dataset_path << '\n';
    ss << "config.chunk = " << cfg.chunk << '\n';
    ss << "config.gmm_seed = " << cfg.gmm_seed << '\n';
    ss << "run.seed = " << cfg.seed << '\n';
    ss << "run.rounds = " << result.rounds_run << '\n';
    ss << "run.cr_max = " << fmt(result.cr_max) << '\n';

    const PolicyResult* random_result = nullptr;
    for (const auto& pr : result.policies)
        if (pr.name == "random") random_result = &pr;

    for (const auto& pr : result.policies) {
        if (result.rounds_run == 0) continue;
        ss << "policy." << pr.name << ".final_cr = " << fmt(pr.final_cr) << '\n';
        ss << "policy." << pr.name << ".avg_cr = "
           << fmt(pr.final_cr / static_cast<double>(result.rounds_run)) << '\n';
        if (pr.final_regret)
            ss << "policy." << pr.name << ".final_regret = " << fmt(*pr.final_regret) << '\n';
        if (random_result) {
            const auto n = ncr(pr.final_cr, random_result->final_cr, result.cr_max);
            if (n) ss << "policy." << pr.name << ".ncr = " << fmt(*n) << '\n';
        }
    }
    return ss.str();
}

RunResult run_and_write(const ExperimentConfig& cfg) {
    RunResult result = run_experiment(cfg);
    std::ofstream csv(cfg.out);
    if (!csv) throw std::runtime_error("cannot open output file " + cfg.out);
    write_csv(result, csv);
    const std::string summary = summary_text(result, cfg);
    std::ofstream sidecar(cfg.out + ".summary.txt");
    if (!sidecar) throw std::runtime_error("cannot open summary sidecar for " + cfg.out);
    sidecar << summary;
    std::cout << summary;
    return result;
}

}  // namespace cascade
