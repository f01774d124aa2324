#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cascade/core.hpp"
#include "cascade/oracle.hpp"
#include "cascade/policy_ind.hpp"
#include "cascade/reward.hpp"
#include "cascade/rng.hpp"
#include "support/oracles.hpp"

using namespace cascade;

namespace {

RewardProfile vanilla_profile(int b) {
    std::vector<double> r(static_cast<std::size_t>(b), 1.0);
    std::vector<double> l(static_cast<std::size_t>(b) + 1, -1e-9);
    return RewardProfile(r, l);
}

ActionSet random_actions(Rng& rng, int k, int d) {
    std::vector<Eigen::VectorXd> items;
    std::vector<std::int64_t> ids;
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd x(d);
        for (int j = 0; j < d; ++j) x(j) = rng.next_gaussian();
        x /= x.norm();
        x *= std::pow(rng.next_double(), 1.0 / d);
        items.push_back(x);
        ids.push_back(i);
    }
    return ActionSet(items, ids);
}

// optimistic probabilities rebuilt through the public accessors only
ProbSequence replicate_scores(const IndPolicy& policy, const ActionSet& actions) {
    ProbSequence probs(static_cast<std::size_t>(actions.size()));
    for (int i = 0; i < actions.size(); ++i) {
        const Eigen::VectorXd& x = actions.item(i);
        const double width = std::sqrt(policy.spd().inv_quad(x) * policy.config().alpha);
        probs[static_cast<std::size_t>(i)] = sigmoid(x.dot(policy.weights()) + width);
    }
    return probs;
}

ProjectedFeedback feedback_from_bits(const std::vector<std::uint8_t>& bits) {
    return make_feedback(bits);
}

}  // namespace

TEST_CASE("config validation") {
    PolicyConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    PolicyConfig bad = cfg;
    bad.slab_cap = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.alpha = -0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.max_budget = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.delta = 0.4;  // above 1/e
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.delta = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("compute_alpha closed form") {
    // independent transcription using e^D identities:
    //   c/(1-c) = e^D, c/c' = 1 + e^D, 1/c' = (1+e^D)^2 / e^D
    const auto alt = [](int b, int d, long T, double delta, double D) {
        const double eD = std::exp(D);
        const double r2 = (1.0 + eD) * (1.0 + eD);
        const double t1 = 2.0 * b * D * D;
        const double t2 =
            r2 * d * std::log(1.0 + (2.0 / b) * (T * eD + 4.0 * std::log(4.0 * (T + 1.0) / delta)));
        const double t3 = 2.0 * (12.0 * r2 + 36.0 * (1.0 + D) * r2 / eD) *
                          std::log(2.0 * b * (T + 4.0) / delta);
        const double t4 = 20.0 * D * D * std::log(2.0 * b * d * (T + 1.0) / delta);
        return t1 + t2 + t3 + t4;
    };

    for (int b : {1, 3, 5})
        for (int d : {1, 5, 20})
            for (long T : {1L, 100L, 100000L})
                for (double delta : {0.01, 0.3})
                    for (double D : {0.25, 1.0, 2.5}) {
                        const double got = compute_alpha(b, d, T, delta, D);
                        const double want = alt(b, d, T, delta, D);
                        CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
                        // dominates the leading 2 b D^2 term strictly
                        CHECK(got > 2.0 * b * D * D);
                    }

    // grows with the slab cap and with the horizon
    CHECK(compute_alpha(5, 5, 1000, 0.1, 1.0) < compute_alpha(5, 5, 1000, 0.1, 2.0));
    CHECK(compute_alpha(5, 5, 1000, 0.1, 1.0) < compute_alpha(5, 5, 10000, 0.1, 1.0));

    CHECK_THROWS_AS(compute_alpha(0, 5, 10, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_alpha(5, 0, 10, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_alpha(5, 5, 0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_alpha(5, 5, 10, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_alpha(5, 5, 10, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("fresh policy plays the leading prefix under a flat profile") {
    PolicyConfig cfg;
    cfg.max_budget = 3;
    IndPolicy policy(4, cfg);

    // sign-pattern items with entries +-1/2 have exactly equal norms, so with
    // w = 0 every optimistic score ties bitwise, the sort falls back to index
    // order, and the flat profile wants the full budget
    std::vector<Eigen::VectorXd> items;
    std::vector<std::int64_t> ids;
    const double h = 0.5;
    const std::vector<std::vector<double>> pats = {
        {h, h, h, h}, {h, h, h, -h}, {h, h, -h, h},
        {h, -h, h, h}, {-h, h, h, h}, {h, -h, -h, h}};
    for (std::size_t i = 0; i < pats.size(); ++i) {
        Eigen::VectorXd x(4);
        for (int j = 0; j < 4; ++j) x(j) = pats[i][static_cast<std::size_t>(j)];
        items.push_back(x);
        ids.push_back(100 + static_cast<std::int64_t>(i));
    }
    ActionSet actions(items, ids);
    const RetrySequence seq = policy.select(actions, vanilla_profile(3));
    REQUIRE(seq.length() == 3);
    CHECK(seq.at(0) == 0);
    CHECK(seq.at(1) == 1);
    CHECK(seq.at(2) == 2);

    // fewer items than budget: play them all
    ActionSet two({items[0], items[1]}, {0, 1});
    const RetrySequence short_seq = policy.select(two, vanilla_profile(3));
    CHECK(short_seq.length() == 2);
}

TEST_CASE("select guards") {
    PolicyConfig cfg;
    cfg.max_budget = 2;
    IndPolicy policy(3, cfg);
    Rng rng(1);
    CHECK_THROWS_AS(policy.select(random_actions(rng, 4, 3), vanilla_profile(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(policy.select(random_actions(rng, 4, 2), vanilla_profile(2)),
                    std::invalid_argument);
}

TEST_CASE("one dimensional update walkthrough") {
    PolicyConfig cfg;
    cfg.max_budget = 1;
    cfg.slab_cap = 1.0;
    cfg.learning_rate = 1.0;
    IndPolicy policy(1, cfg);

    Eigen::VectorXd x(1);
    x << 1.0;
    ActionSet actions({x}, {0});
    const RetrySequence played({0});

    // one observed failure: M goes 1 -> 2, gradient is -1/2, Newton step
    // moves w to -1/4
    policy.update(played, actions, feedback_from_bits({0}));
    CHECK(policy.spd().matrix()(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(policy.weights()(0) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(policy.step_count() == 1);

    // symmetric success pulls back toward zero: grad = sigma(0.25) at sign +1
    const double before = policy.weights()(0);
    policy.update(played, actions, feedback_from_bits({1}));
    const double expected = before + sigmoid(-before) / 3.0;
    CHECK(policy.spd().matrix()(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(policy.weights()(0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(policy.step_count() == 2);
}

TEST_CASE("positions after the first success are full no-ops") {
    PolicyConfig cfg;
    cfg.max_budget = 4;
    IndPolicy policy(3, cfg);
    Rng rng(11);
    ActionSet actions = random_actions(rng, 6, 3);

    const RetrySequence played({2, 0, 5, 1});
    // success at the second slot: only two positions carry information
    policy.update(played, actions, feedback_from_bits({0, 1}));
    CHECK(policy.spd().updates() == 2);
    CHECK(policy.step_count() == 4);  // the counter tracks committed length

    // an all-failure round touches every position
    policy.update(played, actions, feedback_from_bits({0, 0, 0, 0}));
    CHECK(policy.spd().updates() == 6);
    CHECK(policy.step_count() == 8);

    // empty play changes nothing at all
    const Eigen::VectorXd w_before = policy.weights();
    policy.update(RetrySequence(), actions, ProjectedFeedback{});
    CHECK((policy.weights() - w_before).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(policy.spd().updates() == 6);
    CHECK(policy.step_count() == 8);
}

TEST_CASE("update replays exactly through the public pieces") {
    PolicyConfig cfg;
    cfg.max_budget = 4;
    cfg.slab_cap = 0.8;
    cfg.learning_rate = 0.7;
    const int d = 5;
    IndPolicy policy(d, cfg);
    Rng rng(23);

    for (int round = 0; round < 60; ++round) {
        ActionSet actions = random_actions(rng, 8, d);
        const RetrySequence played = policy.select(actions, testsupport::random_profile(4, rng));

        std::vector<std::uint8_t> bits;
        bool success = false;
        for (int pos = 0; pos < played.length() && !success; ++pos) {
            success = rng.bernoulli(0.4);
            bits.push_back(success ? 1 : 0);
        }
        const ProjectedFeedback fb = played.length() ? feedback_from_bits(bits)
                                                    : ProjectedFeedback{};

        // shadow the update with an independent walk over the same pieces
        SpdState shadow_spd = policy.spd();
        Eigen::VectorXd shadow_w = policy.weights();
        const std::vector<int> signs = feedback_signs(fb, played.length());
        for (int pos = 0; pos < played.length(); ++pos) {
            const int s = signs[static_cast<std::size_t>(pos)];
            if (s == 0) continue;
            const Eigen::VectorXd& x = actions.item(played.at(pos));
            const Eigen::VectorXd proj = shadow_spd.slab_project(shadow_w, x, cfg.slab_cap);
            CHECK(std::abs(proj.dot(x)) <= cfg.slab_cap + 1e-9);
            shadow_spd.rank_one_update(x, 1.0);
            const double margin = x.dot(proj);
            const Eigen::VectorXd grad = sigmoid(-s * margin) * static_cast<double>(s) * x;
            shadow_w = proj + cfg.learning_rate * (shadow_spd.inverse() * grad);
        }

        policy.update(played, actions, fb);
        CHECK((policy.weights() - shadow_w).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((policy.spd().matrix() - shadow_spd.matrix()).lpNorm<Eigen::Infinity>() == 0.0);

        // selection is likewise a pure function of the public state
        ActionSet probe = random_actions(rng, 8, d);
        const RewardProfile profile = testsupport::random_profile(4, rng);
        const RetrySequence got = policy.select(probe, profile);
        const RetrySequence want = best_prefix_by_prob(replicate_scores(policy, probe), profile);
        REQUIRE(got.length() == want.length());
        for (int i = 0; i < got.length(); ++i) CHECK(got.at(i) == want.at(i));
    }
}

TEST_CASE("newton direction matches the logistic loss gradient") {
    // the step direction sigma(-s m) s x is minus the gradient of
    // log(1 + exp(-s x'w)), checked by central differences
    Rng rng(37);
    const int d = 4;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd w(d), x(d);
        for (int j = 0; j < d; ++j) {
            w(j) = rng.next_gaussian();
            x(j) = rng.next_gaussian();
        }
        x /= x.norm();
        const int s = rng.bernoulli(0.5) ? 1 : -1;

        const auto loss = [&](const Eigen::VectorXd& v) {
            const double m = -s * x.dot(v);
            return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
        };
        const Eigen::VectorXd fd = testsupport::fd_gradient(loss, w);
        const Eigen::VectorXd analytic = sigmoid(-s * x.dot(w)) * static_cast<double>(s) * x;
        const double rel = (fd + analytic).norm() / std::max(1.0, analytic.norm());
        CHECK(rel <= 1e-6);
    }
}

TEST_CASE("optimistic scores grow with alpha") {
    Rng rng(41);
    const int d = 4;
    PolicyConfig low;
    low.max_budget = 3;
    low.alpha = 0.05;
    PolicyConfig high = low;
    high.alpha = 2.0;

    IndPolicy a(d, low), b(d, high);
    // train both identically so the widths act on the same center
    for (int round = 0; round < 20; ++round) {
        ActionSet actions = random_actions(rng, 6, d);
        const RetrySequence played({0, 1});
        const ProjectedFeedback fb = feedback_from_bits({0, 1});
        a.update(played, actions, fb);
        b.update(played, actions, fb);
    }
    ActionSet probe = random_actions(rng, 6, d);
    const ProbSequence pa = replicate_scores(a, probe);
    const ProbSequence pb = replicate_scores(b, probe);
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pb[i] >= pa[i]);

    // alpha = 0 reduces to the plain plug-in probability
    PolicyConfig zero = low;
    zero.alpha = 0.0;
    IndPolicy c(d, zero);
    const ProbSequence pc = replicate_scores(c, probe);
    for (std::size_t i = 0; i < pc.size(); ++i)
        CHECK(pc[i] == doctest::Approx(sigmoid(probe.item(static_cast<int>(i))
                                                   .dot(c.weights()))).epsilon(1e-15));
}

TEST_CASE("identical histories give identical policies") {
    PolicyConfig cfg;
    cfg.max_budget = 3;
    IndPolicy a(4, cfg), b(4, cfg);
    Rng rng(53);
    for (int round = 0; round < 30; ++round) {
        ActionSet actions = random_actions(rng, 7, 4);
        const RewardProfile profile = testsupport::random_profile(3, rng);
        const RetrySequence sa = a.select(actions, profile);
        const RetrySequence sb = b.select(actions, profile);
        REQUIRE(sa.length() == sb.length());
        for (int i = 0; i < sa.length(); ++i) REQUIRE(sa.at(i) == sb.at(i));

        std::vector<std::uint8_t> bits;
        bool success = false;
        for (int pos = 0; pos < sa.length() && !success; ++pos) {
            success = rng.bernoulli(0.5);
            bits.push_back(success ? 1 : 0);
        }
        const ProjectedFeedback fb =
            sa.length() ? feedback_from_bits(bits) : ProjectedFeedback{};
        a.update(sa, actions, fb);
        b.update(sb, actions, fb);
    }
    CHECK((a.weights() - b.weights()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((a.spd().matrix() - b.spd().matrix()).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("regret per round shrinks on a fixed instance") {
    // fixed action set and hidden parameter; per-round shortfall against the
    // clairvoyant prefix should drop sharply once the estimate settles
    Rng rng(67);
    const int d = 3, k = 10, b = 3;
    std::vector<Eigen::VectorXd> items;
    std::vector<std::int64_t> ids;
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd x(d);
        for (int j = 0; j < d; ++j) x(j) = rng.next_gaussian();
        items.push_back(x / x.norm());
        ids.push_back(i);
    }
    ActionSet actions(items, ids);
    Eigen::VectorXd u(d);
    for (int j = 0; j < d; ++j) u(j) = rng.next_gaussian();
    u *= 0.9 / u.norm();

    ProbSequence truth(k);
    for (int i = 0; i < k; ++i) truth[static_cast<std::size_t>(i)] = sigmoid(u.dot(items[i]));
    const RewardProfile profile = vanilla_profile(b);
    const BayesResult best = bayes_independent(truth, profile);

    PolicyConfig cfg;
    cfg.max_budget = b;
    cfg.alpha = 0.1;
    IndPolicy policy(d, cfg);

    const int T = 3000;
    const int tenth = T / 10;
    double first = 0.0, last = 0.0;
    for (int t = 0; t < T; ++t) {
        const RetrySequence seq = policy.select(actions, profile);
        ProbSequence played_probs;
        for (int i = 0; i < seq.length(); ++i)
            played_probs.push_back(truth[static_cast<std::size_t>(seq.at(i))]);
        const double gap = best.value - expected_reward(played_probs, profile);
        if (t < tenth) first += gap;
        if (t >= T - tenth) last += gap;

        std::vector<std::uint8_t> bits;
        bool success = false;
        for (int pos = 0; pos < seq.length() && !success; ++pos) {
            success = rng.bernoulli(truth[static_cast<std::size_t>(seq.at(pos))]);
            bits.push_back(success ? 1 : 0);
        }
        policy.update(seq, actions,
                      seq.length() ? feedback_from_bits(bits) : ProjectedFeedback{});
    }
    CHECK(last <= 0.5 * first + 1e-9);
    CHECK(first >= 0.0);
}
