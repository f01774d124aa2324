#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cascade/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cascade_sim: flexible-length cascading bandit simulator"};
    app.set_config("--config", "",
                   "TOML config file; keys mirror the long flags, quoted when dotted, "
                   "e.g. \"env.k\" = 20");
    app.allow_config_extras(CLI::config_extras_mode::error);

    cascade::ExperimentConfig cfg;
    std::string env_kind = "synthetic_independent";
    std::string scenario = "exponential";

    app.add_option("--T", cfg.T, "rounds to run (datasets stop early at end of stream)");
    app.add_option("--seed", cfg.seed, "master seed");
    app.add_option("--out", cfg.out, "output CSV path (summary goes to <out>.summary.txt)");
    app.add_option("--scenario", scenario, "vanilla or exponential");
    app.add_option("--budget", cfg.budget, "retry budget per round");
    app.add_option("--policy", cfg.policies,
                   "policies to run: ind, dep, random, eps_greedy, cascade_ucb1, glm_mle, bayes")
        ->delimiter(',');

    app.add_option("--env.kind", env_kind,
                   "synthetic_independent, synthetic_dependent or dataset");
    app.add_option("--env.d", cfg.d, "feature dimension of the independent model");
    app.add_option("--env.k", cfg.k, "items per round");
    app.add_option("--env.d_prime", cfg.d_prime, "topic dimension of the dependent model");
    app.add_option("--env.u_norm", cfg.u_norm, "norm of the planted parameter");
    app.add_option("--env.dataset", cfg.dataset_path, "CSV file with columns id,p,f1,..,fd");
    app.add_option("--env.chunk", cfg.chunk, "items per dataset round");
    app.add_option("--env.gmm_seed", cfg.gmm_seed, "seed of the coverage mixture fit");

    app.add_option("--learner.alpha", cfg.alpha, "exploration width scale");
    app.add_flag("--learner.theoretical_alpha", cfg.theoretical_alpha,
                 "replace alpha with the theoretical value");
    app.add_option("--learner.learning_rate", cfg.learning_rate, "Newton step size");
    app.add_option("--learner.slab_cap", cfg.slab_cap, "admissible bound on |w'x|");
    app.add_option("--learner.delta", cfg.delta, "confidence level in (0, 1/e)");
    app.add_option("--learner.eps", cfg.eps, "exploration rate of eps_greedy");
    app.add_option("--learner.glm_lambda", cfg.glm_lambda, "ridge weight of glm_mle");
    app.add_option("--learner.glm_alpha", cfg.glm_alpha, "exploration scale of glm_mle");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.env = cascade::env_kind_from_string(env_kind);
        cfg.scenario = cascade::scenario_from_string(scenario);
        cascade::run_and_write(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
