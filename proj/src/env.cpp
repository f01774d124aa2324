#include "cascade/env.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cascade/reward.hpp"

namespace cascade {

Scenario scenario_from_string(const std::string& name) {
    if (name == "vanilla") return Scenario::vanilla;
    if (name == "exponential") return Scenario::exponential;
    throw std::invalid_argument("unknown scenario: " + name);
}

std::string to_string(Scenario s) {
    return s == Scenario::vanilla ? "vanilla" : "exponential";
}

RewardProfile scenario_profile(Scenario s, int budget) {
    if (budget < 1) throw std::invalid_argument("scenario_profile: budget must be at least 1");
    std::vector<double> rewards(static_cast<std::size_t>(budget));
    std::vector<double> losses(static_cast<std::size_t>(budget) + 1);
    if (s == Scenario::vanilla) {
        for (auto& r : rewards) r = 1.0;
        for (auto& l : losses) l = -1e-9;
    } else {
        for (int j = 1; j <= budget; ++j)
            rewards[static_cast<std::size_t>(j - 1)] = std::pow(2.0, 1.0 - j);
        for (int j = 0; j <= budget; ++j)
            losses[static_cast<std::size_t>(j)] = 0.8 * std::pow(2.0, -j) - 1.0;
    }
    return RewardProfile(std::move(rewards), std::move(losses));
}

namespace {

// uniform direction scaled to land uniformly in the unit ball
Eigen::VectorXd sample_unit_ball(int d, Rng& rng) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = rng.next_gaussian();
    const double norm = x.norm();
    if (norm == 0.0) return Eigen::VectorXd::Zero(d);
    const double radius = std::pow(rng.next_double(), 1.0 / d);
    return x * (radius / norm);
}

}  // namespace

SyntheticIndependentEnv::SyntheticIndependentEnv(const SyntheticIndependentConfig& cfg,
                                                 std::uint64_t seed)
    : cfg_(cfg), rng_(Rng::stream(seed, "env")) {
    if (cfg.d < 1 || cfg.k < 1 || cfg.budget < 1)
        throw std::invalid_argument("SyntheticIndependentEnv: d, k, budget must be positive");
    if (cfg.cap <= 0.0 || cfg.u_norm < 0.0 || cfg.u_norm > cfg.cap)
        throw std::invalid_argument("SyntheticIndependentEnv: need 0 <= u_norm <= cap");
    Eigen::VectorXd dir(cfg.d);
    for (int i = 0; i < cfg.d; ++i) dir(i) = rng_.next_gaussian();
    const double norm = dir.norm();
    u_ = norm > 0.0 ? Eigen::VectorXd(dir * (cfg.u_norm / norm))
                    : Eigen::VectorXd::Zero(cfg.d);
}

Round SyntheticIndependentEnv::next() {
    ++t_;
    std::vector<Eigen::VectorXd> items;
    std::vector<std::int64_t> ids;
    ProbSequence probs;
    items.reserve(static_cast<std::size_t>(cfg_.k));
    for (int i = 0; i < cfg_.k; ++i) {
        Eigen::VectorXd x = sample_unit_ball(cfg_.d, rng_);
        const double margin = u_.dot(x);
        if (std::abs(margin) > cfg_.cap + 1e-12)
            throw std::logic_error("SyntheticIndependentEnv: sampled item violates |u'x| <= cap");
        probs.push_back(sigmoid(margin));
        items.push_back(std::move(x));
        ids.push_back(t_ * static_cast<std::int64_t>(cfg_.k) + i);
    }
    return {ActionSet(std::move(items), std::move(ids)),
            scenario_profile(cfg_.scenario, cfg_.budget), std::move(probs), {}};
}

OutcomeVector sample_outcome_independent(const ProbSequence& probs, Rng& rng) {
    OutcomeVector y;
    y.bits.reserve(probs.size());
    for (double p : probs) {
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("sample_outcome_independent: probability outside [0, 1]");
        y.bits.push_back(rng.bernoulli(p) ? 1 : 0);
    }
    return y;
}

SyntheticDependentEnv::SyntheticDependentEnv(const SyntheticDependentConfig& cfg,
                                             std::uint64_t seed)
    : cfg_(cfg), rng_(Rng::stream(seed, "env")) {
    if (cfg.d_prime < 1 || cfg.k < 1 || cfg.budget < 1)
        throw std::invalid_argument("SyntheticDependentEnv: d_prime, k, budget must be positive");
    if (cfg.u_norm < 0.0)
        throw std::invalid_argument("SyntheticDependentEnv: u_norm must be non-negative");
    // positive topic weights, scaled to the requested norm
    Eigen::VectorXd raw(cfg.d_prime);
    for (int i = 0; i < cfg.d_prime; ++i) raw(i) = 0.3 + 0.7 * rng_.next_double();
    u_ = raw * (cfg.u_norm / raw.norm());
}

DepRound SyntheticDependentEnv::next() {
    ++t_;
    const double shrink = 1.0 / std::sqrt(static_cast<double>(cfg_.d_prime));
    Eigen::MatrixXd cov(cfg_.k, cfg_.d_prime);
    std::vector<Eigen::VectorXd> items;
    std::vector<std::int64_t> ids;
    for (int i = 0; i < cfg_.k; ++i) {
        for (int jj = 0; jj < cfg_.d_prime; ++jj) cov(i, jj) = rng_.next_double();
        items.push_back(cov.row(i).transpose() * shrink);  // keeps norms inside the unit ball
        ids.push_back(t_ * static_cast<std::int64_t>(cfg_.k) + i);
    }
    return {ActionSet(std::move(items), std::move(ids)),
            scenario_profile(cfg_.scenario, cfg_.budget), CoverageModel(cov)};
}

ProbSequence conditional_probs(const CoverageModel& coverage, const Eigen::VectorXd& u,
                               const std::vector<int>& seq) {
    ProbSequence probs;
    std::vector<int> prefix;
    for (int item : seq) {
        const Eigen::VectorXd f = bar_c(coverage.coverage_difference(prefix, item));
        probs.push_back(sigmoid(f.dot(u)));
        prefix.push_back(item);
    }
    return probs;
}

ProjectedFeedback walk_cascade(const ProbSequence& cond_probs, Rng& rng) {
    ProjectedFeedback fb;
    for (double p : cond_probs) {
        const bool hit = rng.bernoulli(p);
        fb.observed.push_back(hit ? 1 : 0);
        if (hit) {
            fb.terminated_by_success = true;
            break;
        }
    }
    return fb;
}

ProjectedFeedback sample_outcome_dependent(const CoverageModel& coverage,
                                           const Eigen::VectorXd& u,
                                           const RetrySequence& played, Rng& rng) {
    return walk_cascade(conditional_probs(coverage, u, played.items()), rng);
}

DatasetEnv::DatasetEnv(const DatasetConfig& cfg) : cfg_(cfg) {
    if (cfg.chunk < 1) throw std::invalid_argument("DatasetEnv: chunk size must be positive");
    std::ifstream in(cfg.path);
    if (!in) throw std::runtime_error("DatasetEnv: cannot open " + cfg.path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("DatasetEnv: empty file");
    if (line.rfind("id,p,", 0) != 0)
        throw std::runtime_error("DatasetEnv: header must start with id,p,");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("DatasetEnv: no data rows");

    const std::size_t width = rows[0].size();
    if (width < 3) throw std::runtime_error("DatasetEnv: need at least one feature column");
    const int d = static_cast<int>(width) - 2;
    embeddings_.resize(static_cast<int>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width) throw std::runtime_error("DatasetEnv: ragged row");
        ids_.push_back(static_cast<std::int64_t>(rows[i][0]));
        const double p = rows[i][1];
        if (p < 0.0 || p > 1.0) throw std::runtime_error("DatasetEnv: probability outside [0, 1]");
        probs_.push_back(p);
        for (int j = 0; j < d; ++j) embeddings_(static_cast<int>(i), j) = rows[i][static_cast<std::size_t>(j) + 2];
    }

    if ((embeddings_.rowwise().norm().array() > 1.0 + 1e-6).any()) {
        for (int i = 0; i < embeddings_.rows(); ++i) {
            const double norm = embeddings_.row(i).norm();
            if (norm > 0.0) embeddings_.row(i) /= norm;
        }
    }
    // rows written with limited precision can land a hair outside the unit
    // sphere without tripping the bulk renormalization above; clip them so
    // every action set built from this table is admissible
    for (int i = 0; i < embeddings_.rows(); ++i) {
        const double norm = embeddings_.row(i).norm();
        if (norm > 1.0) embeddings_.row(i) /= norm;
    }
}

int DatasetEnv::chunks() const {
    return (items() + cfg_.chunk - 1) / cfg_.chunk;
}

std::optional<Round> DatasetEnv::next() {
    if (cursor_ >= items()) return std::nullopt;
    const int begin = cursor_;
    const int end = std::min(items(), begin + cfg_.chunk);
    cursor_ = end;

    std::vector<Eigen::VectorXd> items;
    std::vector<std::int64_t> ids;
    ProbSequence probs;
    std::vector<int> rows;
    for (int i = begin; i < end; ++i) {
        items.push_back(embeddings_.row(i).transpose());
        ids.push_back(ids_[static_cast<std::size_t>(i)]);
        probs.push_back(probs_[static_cast<std::size_t>(i)]);
        rows.push_back(i);
    }
    return Round{ActionSet(std::move(items), std::move(ids)),
                 scenario_profile(cfg_.scenario, cfg_.budget), std::move(probs),
                 std::move(rows)};
}

}  // namespace cascade
