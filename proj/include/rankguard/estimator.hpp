#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "rankguard/errors.hpp"

namespace rankguard {

enum class SampleSource { real, synthetic };

std::string to_string(SampleSource s);
SampleSource sample_source_from_string(const std::string& s);

/// A set of feature vectors from one source, one sample per row.
struct FeatureSampleSet {
    Eigen::MatrixXd points;  ///< rows = samples, cols = feature dimensions
    SampleSource source = SampleSource::real;

    Eigen::Index count() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }

    void validate() const {
        if (points.rows() == 0) throw EmptyInputError("sample set has no points");
        if (points.cols() < 1) throw SchemaError("sample set needs at least one dimension");
        if (!points.allFinite()) throw SchemaError("sample set contains non-finite coordinates");
    }
};

struct KmeansResult {
    Eigen::MatrixXd centroids;    ///< k rows
    Eigen::VectorXi assignments;  ///< one centroid index per input row
    int iterations = 0;
};

struct KmeansParams {
    int max_iter = 100;
    double tol = 1e-6;
};

/// Lloyd's algorithm with seeded k-means++ initialization. Deterministic for
/// a given seed: ties in assignment go to the lowest centroid index, and an
/// emptied cluster is re-seeded to the point farthest from its current
/// centroid rather than dropped.
KmeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    const KmeansParams& params = {});

struct EstimatorParams {
    int clusters = 20;
    int restarts = 5;
    KmeansParams kmeans;
};

/// Cluster-histogram estimate of the un-halved L1 divergence between the two
/// sample distributions: pool both sets, cluster the pool, compare the
/// per-source normalized histograms over cluster occupancy, and average the
/// resulting sums over independent clustering restarts (in restart-index
/// order, so the value does not depend on scheduling). Result is in [0, 2].
double estimate_l1(const FeatureSampleSet& real_samples, const FeatureSampleSet& synth_samples,
                   std::uint64_t seed, const EstimatorParams& params = {});

/// Estimate plus the inputs that produced it, for report emission.
struct EstimateReport {
    double estimate = 0.0;
    int clusters = 0;
    int restarts = 0;
    std::uint64_t seed = 0;
    Eigen::Index real_count = 0;
    Eigen::Index synth_count = 0;
    Eigen::Index dim = 0;
};

}  // namespace rankguard
