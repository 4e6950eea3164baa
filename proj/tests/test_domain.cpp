#include <doctest.h>

#include <algorithm>
#include <set>

#include "rankguard/domain.hpp"
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

TEST_CASE("FiniteDomain rejects degenerate shapes") {
    CHECK_THROWS_AS(FiniteDomain(0, 2), SchemaError);
    CHECK_THROWS_AS(FiniteDomain(3, 1), SchemaError);
    CHECK_NOTHROW(FiniteDomain(1, 2));
}

TEST_CASE("validate_labels checks length and range") {
    const FiniteDomain d(3, 2);
    CHECK_NOTHROW(d.validate_labels(labels({0, 1, 0}), "h"));
    CHECK_THROWS_AS(d.validate_labels(labels({0, 1}), "h"), SchemaError);
    CHECK_THROWS_AS(d.validate_labels(labels({0, 1, 2}), "h"), SchemaError);
    CHECK_THROWS_AS(d.validate_labels(labels({0, -1, 0}), "h"), SchemaError);
}

TEST_CASE("Pmf keeps exact-sum masses bitwise and normalizes near misses") {
    const Pmf exact(vec({0.25, 0.25, 0.25, 0.25}));
    CHECK(exact[0] == 0.25);
    CHECK(exact.masses().sum() == 1.0);

    // off by well under the tolerance: accepted, renormalized to sum 1
    Eigen::VectorXd near = vec({0.25, 0.25, 0.25, 0.25});
    near[0] += 1e-12;
    const Pmf fixed(near);
    CHECK(fixed.masses().sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Pmf rejects bad mass vectors") {
    CHECK_THROWS_AS(Pmf(Eigen::VectorXd()), SchemaError);
    CHECK_THROWS_AS(Pmf(vec({0.5, -0.5, 1.0})), SchemaError);
    CHECK_THROWS_AS(Pmf(vec({0.5, std::nan(""), 0.5})), SchemaError);
    CHECK_THROWS_AS(Pmf(vec({0.5, 0.4})), SchemaError);  // sums to 0.9
}

TEST_CASE("Pmf mass of an index set") {
    const Pmf mu(vec({0.1, 0.2, 0.3, 0.4}));
    CHECK(mu.mass({0, 2}) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(mu.mass({}) == 0.0);
}

TEST_CASE("exact_risk sums the disagreement mass") {
    const Pmf mu(vec({0.1, 0.2, 0.3, 0.4}));
    const LabelMap f = labels({0, 0, 0, 0});
    const LabelMap h = labels({1, 0, 1, 0});  // wrong at points 0 and 2
    CHECK(exact_risk(mu, h, f) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(exact_risk(mu, f, f) == 0.0);
    CHECK_THROWS_AS(exact_risk(mu, labels({0, 1}), f), SchemaError);
}

TEST_CASE("empirical_risk counts mismatches") {
    SamplePredictions p;
    p.predicted = labels({1, 0, 1, 0});
    p.actual = labels({1, 1, 1, 1});
    CHECK(empirical_risk(p) == 0.5);
    p.predicted = labels({});
    p.actual = labels({});
    CHECK_THROWS_AS(empirical_risk(p), EmptyInputError);
}

TEST_CASE("risk_difference and disagreement regions on a worked case") {
    const Pmf mu(vec({0.1, 0.2, 0.3, 0.4}));
    const LabelMap f = labels({0, 0, 0, 0});
    const LabelMap h1 = labels({0, 1, 0, 0});  // wrong only at 1 -> risk 0.2
    const LabelMap h2 = labels({1, 0, 0, 0});  // wrong only at 0 -> risk 0.1
    CHECK(risk_difference(mu, h1, h2, f) == doctest::Approx(-0.1).epsilon(1e-12));

    const DisagreementRegions r = disagreement_regions(h1, h2, f);
    CHECK(r.omega1 == std::vector<Eigen::Index>{1});
    CHECK(r.omega2 == std::vector<Eigen::Index>{0});

    const RiskDecomposition d = lemma1_check(mu, h1, h2, f);
    CHECK(d.mass_omega1 == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(d.mass_omega2 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(d.delta == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(d.residual <= 1e-15);
}

TEST_CASE("identical hypotheses have empty regions and zero residual") {
    const Pmf mu(vec({0.5, 0.5}));
    const LabelMap f = labels({0, 1});
    const LabelMap h = labels({1, 1});
    const RiskDecomposition d = lemma1_check(mu, h, h, f);
    CHECK(d.delta == 0.0);
    CHECK(d.mass_omega1 == 0.0);
    CHECK(d.mass_omega2 == 0.0);
    CHECK(d.residual == 0.0);
}

TEST_CASE("risk decomposition identity holds on random instances") {
    InstanceGenConfig cfg;
    cfg.domain_size_max = 32;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const FiniteInstance inst = generate_instance(cfg, seed);
        const std::size_t h = inst.hypotheses.size();
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < h; ++j) {
                if (i == j) continue;
                const LabelMap& h1 = inst.hypotheses[i];
                const LabelMap& h2 = inst.hypotheses[j];
                for (const Pmf* mu : {&inst.mu_r, &inst.mu_s}) {
                    const RiskDecomposition d = lemma1_check(*mu, h1, h2, inst.f);
                    REQUIRE(d.residual <= 1e-12);
                }
                // omega1 and omega2 cover exactly the pairwise disagreement set
                const DisagreementRegions r = disagreement_regions(h1, h2, inst.f);
                std::set<Eigen::Index> covered(r.omega1.begin(), r.omega1.end());
                covered.insert(r.omega2.begin(), r.omega2.end());
                std::set<Eigen::Index> disagree;
                for (Eigen::Index x = 0; x < h1.size(); ++x)
                    if (h1[x] != h2[x]) disagree.insert(x);
                REQUIRE(covered == disagree);
            }
        }
    }
}

TEST_CASE("FiniteInstance validates cross-field consistency") {
    FiniteInstance inst;
    inst.domain = FiniteDomain(2, 2);
    inst.mu_r = Pmf(vec({0.5, 0.5}));
    inst.mu_s = Pmf(vec({0.5, 0.5}));
    inst.f = labels({0, 1});
    inst.hypotheses = {labels({0, 1})};
    CHECK_NOTHROW(inst.validate());

    inst.hypotheses.clear();
    CHECK_THROWS_AS(inst.validate(), SchemaError);
    inst.hypotheses = {labels({0, 1, 0})};
    CHECK_THROWS_AS(inst.validate(), SchemaError);
    inst.hypotheses = {labels({0, 1})};
    inst.f = labels({0, 2});
    CHECK_THROWS_AS(inst.validate(), SchemaError);
}
