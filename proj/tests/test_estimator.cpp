#include <doctest.h>

#include <algorithm>
#include <set>

#include "rankguard/estimator.hpp"
#include "rankguard/rng.hpp"

using namespace rankguard;

namespace {

FeatureSampleSet blob_pair(double center_a, double center_b, int per_blob, SampleSource source,
                           std::uint64_t seed) {
    Rng rng(seed);
    FeatureSampleSet s;
    s.source = source;
    s.points.resize(2 * per_blob, 1);
    for (int i = 0; i < per_blob; ++i) s.points(i, 0) = center_a + 0.1 * rng.gaussian();
    for (int i = 0; i < per_blob; ++i) s.points(per_blob + i, 0) = center_b + 0.1 * rng.gaussian();
    return s;
}

/// Samples of a discrete 1-D mixture: bin i sits at x = 10 * i with mass pmf[i].
FeatureSampleSet binned(const std::vector<double>& pmf, int count, SampleSource source,
                        std::uint64_t seed) {
    Rng rng(seed);
    FeatureSampleSet s;
    s.source = source;
    s.points.resize(count, 1);
    for (int i = 0; i < count; ++i) {
        const double u = rng.uniform01();
        double acc = 0.0;
        std::size_t bin = pmf.size() - 1;
        for (std::size_t b = 0; b < pmf.size(); ++b) {
            acc += pmf[b];
            if (u < acc) {
                bin = b;
                break;
            }
        }
        s.points(i, 0) = 10.0 * static_cast<double>(bin);
    }
    return s;
}

}  // namespace

TEST_CASE("sample source names round-trip") {
    CHECK(to_string(SampleSource::real) == "real");
    CHECK(to_string(SampleSource::synthetic) == "synthetic");
    CHECK(sample_source_from_string("real") == SampleSource::real);
    CHECK(sample_source_from_string("synthetic") == SampleSource::synthetic);
    CHECK_THROWS_AS(sample_source_from_string("fake"), SchemaError);
}

TEST_CASE("kmeans recovers two well-separated blobs") {
    const FeatureSampleSet s = blob_pair(0.0, 100.0, 50, SampleSource::real, 7);
    const KmeansResult km = kmeans(s.points, 2, 1);
    REQUIRE(km.centroids.rows() == 2);
    std::vector<double> centers = {km.centroids(0, 0), km.centroids(1, 0)};
    std::sort(centers.begin(), centers.end());
    CHECK(centers[0] == doctest::Approx(0.0).epsilon(0.5));
    CHECK(centers[1] == doctest::Approx(100.0).epsilon(0.5));
    // assignments split exactly at the gap
    std::set<int> first_half, second_half;
    for (int i = 0; i < 50; ++i) first_half.insert(km.assignments[i]);
    for (int i = 50; i < 100; ++i) second_half.insert(km.assignments[i]);
    CHECK(first_half.size() == 1);
    CHECK(second_half.size() == 1);
    CHECK(first_half != second_half);
}

TEST_CASE("kmeans rejects degenerate requests") {
    FeatureSampleSet s = blob_pair(0.0, 1.0, 5, SampleSource::real, 1);
    CHECK_THROWS_AS(kmeans(Eigen::MatrixXd(), 2, 0), EmptyInputError);
    CHECK_THROWS_AS(kmeans(s.points, 0, 0), InvalidConfigError);
    CHECK_THROWS_AS(kmeans(s.points, 11, 0), InvalidConfigError);  // k > n
}

TEST_CASE("kmeans is deterministic in the seed") {
    const FeatureSampleSet s = blob_pair(0.0, 10.0, 40, SampleSource::real, 3);
    const KmeansResult a = kmeans(s.points, 4, 42);
    const KmeansResult b = kmeans(s.points, 4, 42);
    CHECK((a.centroids.array() == b.centroids.array()).all());
    CHECK((a.assignments.array() == b.assignments.array()).all());
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("identical sample sets estimate to exactly zero") {
    const std::vector<double> p(8, 0.125);
    FeatureSampleSet real = binned(p, 4000, SampleSource::real, 11);
    FeatureSampleSet synth = real;
    synth.source = SampleSource::synthetic;
    EstimatorParams params;
    params.clusters = 8;
    CHECK(estimate_l1(real, synth, 5, params) == 0.0);
}

TEST_CASE("disjoint supports estimate to exactly two") {
    const std::vector<double> p = {0.25, 0.25, 0.25, 0.25, 0.0, 0.0, 0.0, 0.0};
    const std::vector<double> q = {0.0, 0.0, 0.0, 0.0, 0.25, 0.25, 0.25, 0.25};
    const FeatureSampleSet real = binned(p, 4000, SampleSource::real, 21);
    const FeatureSampleSet synth = binned(q, 4000, SampleSource::synthetic, 22);
    EstimatorParams params;
    params.clusters = 8;
    CHECK(estimate_l1(real, synth, 5, params) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("half-shifted mixture estimates near its exact divergence") {
    // exact un-halved L1: 4 * |0.125 - 0.2| + 4 * |0.125 - 0.05| = 0.6
    const std::vector<double> p(8, 0.125);
    const std::vector<double> q = {0.2, 0.2, 0.2, 0.2, 0.05, 0.05, 0.05, 0.05};
    const FeatureSampleSet real = binned(p, 20000, SampleSource::real, 31);
    const FeatureSampleSet synth = binned(q, 20000, SampleSource::synthetic, 32);
    EstimatorParams params;
    params.clusters = 8;
    const double est = estimate_l1(real, synth, 9, params);
    CHECK(est == doctest::Approx(0.6).epsilon(0.1));
}

TEST_CASE("estimate is deterministic in the seed") {
    const std::vector<double> q = {0.2, 0.2, 0.2, 0.2, 0.05, 0.05, 0.05, 0.05};
    const FeatureSampleSet real = binned(std::vector<double>(8, 0.125), 2000,
                                         SampleSource::real, 41);
    const FeatureSampleSet synth = binned(q, 2000, SampleSource::synthetic, 42);
    CHECK(estimate_l1(real, synth, 123) == estimate_l1(real, synth, 123));
}

TEST_CASE("estimate_l1 validates its inputs") {
    FeatureSampleSet real = blob_pair(0, 1, 10, SampleSource::real, 1);
    FeatureSampleSet synth = blob_pair(0, 1, 10, SampleSource::synthetic, 2);

    FeatureSampleSet wrong_dim = synth;
    wrong_dim.points.resize(20, 2);
    wrong_dim.points.setZero();
    CHECK_THROWS_AS(estimate_l1(real, wrong_dim, 0), SchemaError);

    FeatureSampleSet empty;
    empty.source = SampleSource::synthetic;
    CHECK_THROWS_AS(estimate_l1(real, empty, 0), EmptyInputError);

    FeatureSampleSet mislabeled = synth;
    mislabeled.source = SampleSource::real;
    CHECK_THROWS_AS(estimate_l1(real, mislabeled, 0), SchemaError);

    EstimatorParams bad;
    bad.clusters = 0;
    CHECK_THROWS_AS(estimate_l1(real, synth, 0, bad), InvalidConfigError);
    bad.clusters = 8;
    bad.restarts = 0;
    CHECK_THROWS_AS(estimate_l1(real, synth, 0, bad), InvalidConfigError);
}
