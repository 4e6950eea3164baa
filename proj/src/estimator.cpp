#include "rankguard/estimator.hpp"

#include <limits>
#include <string>
#include <vector>

#include "rankguard/rng.hpp"

namespace rankguard {

std::string to_string(SampleSource s) {
    return s == SampleSource::real ? "real" : "synthetic";
}

SampleSource sample_source_from_string(const std::string& s) {
    if (s == "real") return SampleSource::real;
    if (s == "synthetic") return SampleSource::synthetic;
    throw SchemaError("unknown sample source '" + s + "', expected 'real' or 'synthetic'");
}

namespace {

/// Index of the nearest centroid; ties resolve to the lowest index.
Eigen::Index nearest_centroid(const Eigen::MatrixXd& centroids,
                              const Eigen::RowVectorXd& point) {
    Eigen::Index best = 0;
    double best_d = (centroids.row(0) - point).squaredNorm();
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
        const double d = (centroids.row(c) - point).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

/// k-means++: first centroid uniform, the rest drawn with probability
/// proportional to squared distance from the nearest centroid so far.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& points, int k, Rng& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n))));

    Eigen::VectorXd dist2 = (points.rowwise() - Eigen::RowVectorXd(centroids.row(0))).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = dist2.sum();
        Eigen::Index chosen;
        if (total <= 0.0) {
            // all remaining mass at existing centroids: fall back to uniform
            chosen = static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        } else {
            const double target = rng.uniform01() * total;
            double acc = 0.0;
            chosen = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += dist2[i];
                if (acc > target) {
                    chosen = i;
                    break;
                }
            }
        }
        centroids.row(c) = points.row(chosen);
        dist2 = dist2.cwiseMin(
            (points.rowwise() - Eigen::RowVectorXd(centroids.row(c))).rowwise().squaredNorm());
    }
    return centroids;
}

}  // namespace

KmeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    const KmeansParams& params) {
    const Eigen::Index n = points.rows();
    if (n == 0) throw EmptyInputError("kmeans needs at least one point");
    if (k < 1) throw InvalidConfigError("kmeans needs k >= 1, got " + std::to_string(k));
    if (k > n)
        throw InvalidConfigError("kmeans needs k <= point count: k = " + std::to_string(k) +
                                 ", points = " + std::to_string(n));

    Rng rng(seed);
    KmeansResult result;
    result.centroids = seed_centroids(points, k, rng);
    result.assignments.resize(n);

    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k));
    Eigen::MatrixXd sums(k, points.cols());

    for (int iter = 0; iter < params.max_iter; ++iter) {
        result.iterations = iter + 1;

        for (Eigen::Index i = 0; i < n; ++i)
            result.assignments[i] = static_cast<int>(nearest_centroid(result.centroids, points.row(i)));

        sums.setZero();
        std::fill(counts.begin(), counts.end(), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(result.assignments[i]) += points.row(i);
            ++counts[static_cast<std::size_t>(result.assignments[i])];
        }

        // Re-seed each emptied cluster to the point farthest from its own
        // centroid; the donor's old cluster keeps its remaining points.
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            Eigen::Index farthest = 0;
            double worst = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int a = result.assignments[i];
                if (counts[static_cast<std::size_t>(a)] <= 1) continue;  // don't empty another
                const double d = (points.row(i) - result.centroids.row(a)).squaredNorm();
                if (d > worst) {
                    worst = d;
                    farthest = i;
                }
            }
            const int old = result.assignments[farthest];
            sums.row(old) -= points.row(farthest);
            --counts[static_cast<std::size_t>(old)];
            result.assignments[farthest] = c;
            sums.row(c) = points.row(farthest);
            counts[static_cast<std::size_t>(c)] = 1;
        }

        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            const Eigen::RowVectorXd updated =
                sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            movement = std::max(movement, (updated - result.centroids.row(c)).norm());
            result.centroids.row(c) = updated;
        }
        if (movement < params.tol) break;
    }

    // Assignments must reflect the final centroid positions.
    for (Eigen::Index i = 0; i < n; ++i)
        result.assignments[i] = static_cast<int>(nearest_centroid(result.centroids, points.row(i)));
    return result;
}

double estimate_l1(const FeatureSampleSet& real_samples, const FeatureSampleSet& synth_samples,
                   std::uint64_t seed, const EstimatorParams& params) {
    real_samples.validate();
    synth_samples.validate();
    if (real_samples.source != SampleSource::real)
        throw SchemaError("first sample set must be tagged 'real', got '" +
                          to_string(real_samples.source) + "'");
    if (synth_samples.source != SampleSource::synthetic)
        throw SchemaError("second sample set must be tagged 'synthetic', got '" +
                          to_string(synth_samples.source) + "'");
    if (real_samples.dim() != synth_samples.dim())
        throw SchemaError("sample sets differ in dimension: " + std::to_string(real_samples.dim()) +
                          " vs " + std::to_string(synth_samples.dim()));
    if (params.restarts < 1)
        throw InvalidConfigError("estimator needs at least 1 restart, got " +
                                 std::to_string(params.restarts));

    const Eigen::Index n_real = real_samples.count();
    const Eigen::Index n_synth = synth_samples.count();
    Eigen::MatrixXd pool(n_real + n_synth, real_samples.dim());
    pool.topRows(n_real) = real_samples.points;
    pool.bottomRows(n_synth) = synth_samples.points;

    Eigen::VectorXd p(params.clusters), q(params.clusters);
    double total = 0.0;
    for (int t = 0; t < params.restarts; ++t) {
        const KmeansResult km =
            kmeans(pool, params.clusters, derive_seed(seed, {static_cast<std::uint64_t>(t)}),
                   params.kmeans);
        p.setZero();
        q.setZero();
        for (Eigen::Index i = 0; i < n_real; ++i) p[km.assignments[i]] += 1.0;
        for (Eigen::Index i = 0; i < n_synth; ++i) q[km.assignments[n_real + i]] += 1.0;
        p /= static_cast<double>(n_real);
        q /= static_cast<double>(n_synth);
        total += (p - q).cwiseAbs().sum();
    }
    return total / static_cast<double>(params.restarts);
}

}  // namespace rankguard
