#include <doctest.h>

#include "rankguard/rank.hpp"
#include "rankguard/rng.hpp"
#include "rankguard/simulate.hpp"

using namespace rankguard;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}
LabelMap labels(std::initializer_list<int> xs) {
    LabelMap v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (int x : xs) v[i++] = x;
    return v;
}
}  // namespace

TEST_CASE("fractional ranks average ties, 1-based") {
    const Eigen::VectorXd r = fractional_ranks(vec({10, 20, 20, 30}));
    CHECK(r[0] == 1.0);
    CHECK(r[1] == 2.5);
    CHECK(r[2] == 2.5);
    CHECK(r[3] == 4.0);

    const Eigen::VectorXd all_tied = fractional_ranks(vec({7, 7, 7}));
    CHECK(all_tied[0] == 2.0);
    CHECK(all_tied[1] == 2.0);
    CHECK(all_tied[2] == 2.0);
}

TEST_CASE("spearman hand-computed cases") {
    CHECK(std::abs(spearman(vec({1, 2, 3}), vec({3, 1, 2})) - (-0.5)) <= 1e-15);
    CHECK(spearman(vec({1, 2, 3, 4}), vec({10, 20, 30, 40})) == doctest::Approx(1.0));
    CHECK(spearman(vec({1, 2, 3, 4}), vec({8, 6, 4, 2})) == doctest::Approx(-1.0));
    // tied inputs go through fractional ranks
    CHECK(spearman(vec({1, 1, 2}), vec({1, 2, 3})) ==
          doctest::Approx(0.8660254037844387).epsilon(1e-14));
    CHECK(spearman(vec({3, 1, 4, 1, 5}), vec({2, 7, 1, 8, 2})) ==
          doctest::Approx(-0.7894736842105264).epsilon(1e-14));
}

TEST_CASE("spearman rejects unusable input") {
    CHECK_THROWS_AS(spearman(vec({1, 2}), vec({1, 2, 3})), SchemaError);
    CHECK_THROWS_AS(spearman(vec({1}), vec({2})), EmptyInputError);
    CHECK_THROWS_AS(spearman(vec({1, 1, 1}), vec({1, 2, 3})), DegenerateInputError);
    CHECK_THROWS_AS(spearman(vec({1, 2, std::nan("")}), vec({1, 2, 3})), SchemaError);
}

TEST_CASE("spearman matches the tie-free closed form") {
    Rng rng(99);
    const int n = 25;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) xs[i] = ys[i] = i + 1;
        for (int i = n - 1; i > 0; --i) {
            std::swap(xs[i], xs[rng.uniform_int(static_cast<std::uint64_t>(i + 1))]);
            std::swap(ys[i], ys[rng.uniform_int(static_cast<std::uint64_t>(i + 1))]);
        }
        double d2 = 0.0;
        for (int i = 0; i < n; ++i) d2 += (xs[i] - ys[i]) * (xs[i] - ys[i]);
        const double formula = 1.0 - 6.0 * d2 / (n * (double(n) * n - 1.0));
        const double got = spearman(Eigen::Map<Eigen::VectorXd>(xs.data(), n),
                                    Eigen::Map<Eigen::VectorXd>(ys.data(), n));
        REQUIRE(std::abs(got - formula) <= 1e-12);
    }
}

TEST_CASE("rank_report keeps the raw pairs for scatter output") {
    const RankReport r = rank_report(vec({1, 2, 3}), vec({3, 1, 2}));
    CHECK(r.n == 3);
    CHECK(r.scatter.size() == 3);
    CHECK(r.scatter[0] == std::pair<double, double>{1.0, 3.0});
    CHECK(std::abs(r.spearman + 0.5) <= 1e-15);
}

TEST_CASE("check_pair on the worked four-point instance") {
    const LabelMap f = labels({0, 0, 1, 1});
    const LabelMap h1 = f;
    const LabelMap h2 = labels({1, 0, 1, 0});
    const Pmf mu_s(vec({0.3, 0.2, 0.2, 0.3}));
    const Pmf mu_r(vec({0.25, 0.25, 0.25, 0.25}));

    const TheoremVerdict v = check_pair(h1, h2, f, mu_r, mu_s);
    CHECK(v.delta_eps_s == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(v.delta_eps_r == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(v.delta_restricted == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(v.delta_full == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(v.condition_held);
    CHECK(v.conclusion_held);
    CHECK(v.corollary1_condition);  // 0.6 >= 0.2
    CHECK(v.implication_held());
    CHECK(v.slack == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(v.corollary2_slack == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("check_pair slack inequalities hold on random instances") {
    InstanceGenConfig cfg;
    cfg.lambda = 0.6;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const FiniteInstance inst = generate_instance(cfg, seed);
        for (std::size_t i = 0; i < inst.hypotheses.size(); ++i) {
            for (std::size_t j = 0; j < inst.hypotheses.size(); ++j) {
                if (i == j) continue;
                const TheoremVerdict v = check_pair(inst, i, j);
                REQUIRE(v.slack >= -1e-12);
                REQUIRE(v.corollary2_slack >= -1e-12);
                REQUIRE(v.implication_held());
                REQUIRE(v.delta_restricted <= v.delta_full + 1e-15);
            }
        }
    }
}

TEST_CASE("check_pair validates hypothesis indices") {
    const FiniteInstance inst = generate_instance(InstanceGenConfig{}, 4);
    CHECK_THROWS_AS(check_pair(inst, 0, inst.hypotheses.size()), SchemaError);
    CHECK_THROWS_AS(check_pair(inst, 1, 1), SchemaError);
}

TEST_CASE("pairwise rank preservation with a scalar threshold") {
    const Eigen::VectorXd errs_s = vec({0.1, 0.2, 0.3});
    const Eigen::VectorXd errs_r = vec({0.2, 0.1, 0.3});

    const RankPreservationStats st = pairwise_rank_preservation(errs_s, errs_r, 0.0);
    CHECK(st.pairs == 6);
    CHECK(st.triggered == 3);
    CHECK(st.triggered_preserved == 2);
    CHECK(st.untriggered_preserved == 1);
    CHECK_FALSE(st.vacuous);
    CHECK(st.triggered_fraction() == doctest::Approx(2.0 / 3.0));
    CHECK(st.untriggered_fraction() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("an unreachable threshold makes the run vacuous") {
    const RankPreservationStats st =
        pairwise_rank_preservation(vec({0.1, 0.2}), vec({0.2, 0.1}), 10.0);
    CHECK(st.vacuous);
    CHECK(st.triggered == 0);
    CHECK(st.triggered_fraction() == 1.0);  // by convention
}

TEST_CASE("pairwise rank preservation validates shapes") {
    CHECK_THROWS_AS(pairwise_rank_preservation(vec({1, 2}), vec({1, 2, 3}), 0.0), SchemaError);
    CHECK_THROWS_AS(pairwise_rank_preservation(vec({1}), vec({1}), 0.0), EmptyInputError);
    const Eigen::MatrixXd wrong = Eigen::MatrixXd::Zero(3, 2);
    CHECK_THROWS_AS(pairwise_rank_preservation(vec({1, 2}), vec({1, 2}), wrong), SchemaError);
}

TEST_CASE("exact instances always have a fully preserved triggered set") {
    InstanceGenConfig cfg;
    cfg.lambda = 0.8;  // large divergence: many pairs will not trigger
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const FiniteInstance inst = generate_instance(cfg, seed);
        const RankPreservationStats st = pairwise_rank_preservation(inst);
        REQUIRE(st.pairs == inst.hypotheses.size() * (inst.hypotheses.size() - 1));
        REQUIRE(st.triggered_fraction() == 1.0);
    }
}
