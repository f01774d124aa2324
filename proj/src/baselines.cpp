#include "cascade/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "cascade/oracle.hpp"
#include "cascade/reward.hpp"

namespace cascade {

RetrySequence random_sequence(int k, int budget, Rng& rng) {
    const int s_max = std::min(budget, k);
    const int s = rng.uniform_int(s_max + 1);
    std::vector<int> pool(static_cast<std::size_t>(k));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < s; ++i)
        std::swap(pool[static_cast<std::size_t>(i)],
                  pool[static_cast<std::size_t>(i + rng.uniform_int(k - i))]);
    pool.resize(static_cast<std::size_t>(s));
    return RetrySequence(std::move(pool));
}

RetrySequence RandomPolicy::select(const ActionSet& actions, const RewardProfile& profile) {
    return random_sequence(actions.size(), profile.budget(), rng_);
}

EpsGreedyPolicy::EpsGreedyPolicy(int dim, const PolicyConfig& cfg, double eps, Rng rng)
    : learner_(dim, [&cfg] {
          PolicyConfig exploit = cfg;
          exploit.alpha = 0.0;
          return exploit;
      }()),
      eps_(eps),
      rng_(rng) {
    if (eps < 0.0 || eps > 1.0)
        throw std::invalid_argument("EpsGreedyPolicy: eps must lie in [0, 1]");
}

RetrySequence EpsGreedyPolicy::select(const ActionSet& actions, const RewardProfile& profile) {
    explored_last_ = rng_.bernoulli(eps_);
    if (explored_last_) return random_sequence(actions.size(), profile.budget(), rng_);
    return learner_.select(actions, profile);
}

void EpsGreedyPolicy::update(const RetrySequence& played, const ActionSet& actions,
                             const ProjectedFeedback& fb) {
    learner_.update(played, actions, fb);
}

double CascadeUcb1Policy::index(std::int64_t id, long t) const {
    const auto it = arms_.find(id);
    if (it == arms_.end() || it->second.n == 0) return 1.0;
    const double bonus = std::sqrt(1.5 * std::log(static_cast<double>(t)) / it->second.n);
    return std::min(1.0, it->second.mean + bonus);
}

long CascadeUcb1Policy::pulls(std::int64_t id) const {
    const auto it = arms_.find(id);
    return it == arms_.end() ? 0 : it->second.n;
}

RetrySequence CascadeUcb1Policy::select(const ActionSet& actions, const RewardProfile& profile,
                                        long t) const {
    if (t < 1) throw std::invalid_argument("CascadeUcb1Policy::select: t must be at least 1");
    const int k = actions.size();
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = index(actions.id(i), t);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ia = idx[static_cast<std::size_t>(a)];
        const double ib = idx[static_cast<std::size_t>(b)];
        if (ia != ib) return ia > ib;
        return actions.id(a) < actions.id(b);
    });

    // prefix-length search treating clamped indices as success probabilities
    const int s_max = std::min(profile.budget(), k);
    ProbSequence head;
    double best_v = expected_reward(head, profile);
    int best_s = 0;
    for (int s = 1; s <= s_max; ++s) {
        head.push_back(idx[static_cast<std::size_t>(order[s - 1])]);
        const double v = expected_reward(head, profile);
        if (v > best_v) {
            best_v = v;
            best_s = s;
        }
    }
    return RetrySequence(std::vector<int>(order.begin(), order.begin() + best_s));
}

void CascadeUcb1Policy::update(const RetrySequence& played, const ActionSet& actions,
                               const ProjectedFeedback& fb) {
    const std::vector<int> signs = feedback_signs(fb, played.length());
    for (int pos = 0; pos < played.length(); ++pos) {
        const int s = signs[static_cast<std::size_t>(pos)];
        if (s == 0) continue;
        Arm& arm = arms_[actions.id(played.at(pos))];
        arm.n += 1;
        const double obs = s > 0 ? 1.0 : 0.0;
        arm.mean += (obs - arm.mean) / static_cast<double>(arm.n);
    }
}

namespace {

double logistic_objective(const std::vector<Eigen::VectorXd>& xs, const std::vector<int>& ys,
                          double lambda, const Eigen::VectorXd& w) {
    double obj = 0.5 * lambda * w.squaredNorm();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double m = ys[i] * xs[i].dot(w);
        // log(1 + exp(-m)) without overflow
        obj += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    }
    return obj;
}

}  // namespace

GlmFitResult fit_logistic_mle(const std::vector<Eigen::VectorXd>& xs, const std::vector<int>& ys,
                              double lambda, const Eigen::VectorXd& w0, int max_iters,
                              double grad_tol) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("fit_logistic_mle: features and labels must align");
    if (lambda <= 0.0) throw std::invalid_argument("fit_logistic_mle: lambda must be positive");
    for (int y : ys)
        if (y != 1 && y != -1)
            throw std::invalid_argument("fit_logistic_mle: labels must be +-1");

    const int d = static_cast<int>(w0.size());
    GlmFitResult res;
    res.w = w0;
    double obj = logistic_objective(xs, ys, lambda, res.w);
    res.objectives.push_back(obj);

    int iter = 0;
    for (; iter < max_iters; ++iter) {
        Eigen::VectorXd grad = lambda * res.w;
        Eigen::MatrixXd hess = lambda * Eigen::MatrixXd::Identity(d, d);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double m = ys[i] * xs[i].dot(res.w);
            grad.noalias() -= ys[i] * sigmoid(-m) * xs[i];
            const double sp = sigmoid(xs[i].dot(res.w));
            hess.noalias() += sp * (1.0 - sp) * xs[i] * xs[i].transpose();
        }
        res.iterations = iter;
        if (grad.norm() < grad_tol) {
            res.converged = true;
            return res;
        }
        const Eigen::VectorXd step = hess.ldlt().solve(grad);
        // accept any step that does not increase the objective beyond rounding
        // noise; near the optimum the true decrease per Newton step drops under
        // double resolution long before the gradient tolerance is met
        const double slack = 1e-12 * (std::abs(obj) + 1.0);
        double eta = 1.0;
        Eigen::VectorXd cand = res.w - eta * step;
        double cand_obj = logistic_objective(xs, ys, lambda, cand);
        int halvings = 0;
        while (cand_obj > obj + slack && halvings < 40) {
            eta *= 0.5;
            cand = res.w - eta * step;
            cand_obj = logistic_objective(xs, ys, lambda, cand);
            ++halvings;
        }
        if (cand_obj > obj + slack) break;  // no descent direction left
        res.w = cand;
        obj = cand_obj;
        res.objectives.push_back(obj);
    }
    res.iterations = iter;
    Eigen::VectorXd grad = lambda * res.w;
    for (std::size_t i = 0; i < xs.size(); ++i)
        grad.noalias() -= ys[i] * sigmoid(-ys[i] * xs[i].dot(res.w)) * xs[i];
    res.converged = grad.norm() < grad_tol;
    return res;
}

GlmMlePolicy::GlmMlePolicy(int dim, double lambda, double alpha_explore, int max_budget)
    : dim_(dim), lambda_(lambda), alpha_explore_(alpha_explore), max_budget_(max_budget) {
    if (dim < 1) throw std::invalid_argument("GlmMlePolicy: dimension must be positive");
    if (lambda <= 0.0) throw std::invalid_argument("GlmMlePolicy: lambda must be positive");
    if (alpha_explore < 0.0)
        throw std::invalid_argument("GlmMlePolicy: alpha_explore must be non-negative");
    w_ = Eigen::VectorXd::Zero(dim);
    hessian_ = lambda * Eigen::MatrixXd::Identity(dim, dim);
}

void GlmMlePolicy::refit() {
    GlmFitResult fit = fit_logistic_mle(xs_, ys_, lambda_, w_);
    if (!fit.converged && !warned_) {
        std::cerr << "glm_mle: Newton solve did not converge, keeping previous fit\n";
        warned_ = true;
    }
    if (fit.converged) w_ = fit.w;
    hessian_ = lambda_ * Eigen::MatrixXd::Identity(dim_, dim_);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        const double sp = sigmoid(xs_[i].dot(w_));
        hessian_.noalias() += sp * (1.0 - sp) * xs_[i] * xs_[i].transpose();
    }
}

RetrySequence GlmMlePolicy::select(const ActionSet& actions, const RewardProfile& profile) {
    if (profile.budget() > max_budget_)
        throw std::invalid_argument("GlmMlePolicy::select: round budget exceeds configured maximum");
    if (!xs_.empty()) refit();
    const Eigen::MatrixXd hinv =
        hessian_.ldlt().solve(Eigen::MatrixXd::Identity(dim_, dim_));
    const int k = actions.size();
    ProbSequence optimistic(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const Eigen::VectorXd& x = actions.item(i);
        const double width = std::sqrt(x.dot(hinv * x) * alpha_explore_);
        optimistic[static_cast<std::size_t>(i)] = sigmoid(x.dot(w_) + width);
    }
    return best_prefix_by_prob(optimistic, profile);
}

void GlmMlePolicy::update(const RetrySequence& played, const ActionSet& actions,
                          const ProjectedFeedback& fb) {
    const std::vector<int> signs = feedback_signs(fb, played.length());
    for (int pos = 0; pos < played.length(); ++pos) {
        const int s = signs[static_cast<std::size_t>(pos)];
        if (s == 0) continue;
        xs_.push_back(actions.item(played.at(pos)));
        ys_.push_back(s);
    }
}

}  // namespace cascade
