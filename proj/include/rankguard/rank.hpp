#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rankguard/domain.hpp"
#include "rankguard/errors.hpp"

namespace rankguard {

/// Fractional (average-tie) ranks, 1-based: ties receive the mean of the
/// positions they occupy, so the ranks of (10, 20, 20, 30) are (1, 2.5, 2.5, 4).
inline Eigen::VectorXd fractional_ranks(const Eigen::VectorXd& values) {
    const Eigen::Index n = values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });

    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) are tied; their shared rank is the 1-based average
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

/// Spearman rank correlation: Pearson correlation of the fractional ranks.
/// Inputs with zero rank variance carry no ordering information, so they are
/// rejected rather than silently mapped to NaN.
inline double spearman(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
    if (xs.size() != ys.size())
        throw SchemaError("rank correlation needs paired samples: " + std::to_string(xs.size()) +
                          " vs " + std::to_string(ys.size()));
    if (xs.size() < 2)
        throw EmptyInputError("rank correlation needs at least 2 pairs, got " +
                              std::to_string(xs.size()));
    for (Eigen::Index i = 0; i < xs.size(); ++i)
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            throw SchemaError("rank correlation input has a non-finite value at index " +
                              std::to_string(i));

    const Eigen::VectorXd rx = fractional_ranks(xs);
    const Eigen::VectorXd ry = fractional_ranks(ys);
    const Eigen::ArrayXd dx = rx.array() - rx.mean();
    const Eigen::ArrayXd dy = ry.array() - ry.mean();
    const double vx = (dx * dx).sum();
    const double vy = (dy * dy).sum();
    if (vx == 0.0 || vy == 0.0)
        throw DegenerateInputError("rank correlation is undefined when one input is constant");
    return (dx * dy).sum() / std::sqrt(vx * vy);
}

/// Rank statistics for one pair of error sequences, plus the raw pairs for
/// scatter-plot emission.
struct RankReport {
    double spearman = 0.0;
    Eigen::Index n = 0;
    std::vector<std::pair<double, double>> scatter;  ///< (error_a, error_b)
};

inline RankReport rank_report(const Eigen::VectorXd& errs_a, const Eigen::VectorXd& errs_b) {
    RankReport r;
    r.spearman = spearman(errs_a, errs_b);
    r.n = errs_a.size();
    r.scatter.reserve(static_cast<std::size_t>(errs_a.size()));
    for (Eigen::Index i = 0; i < errs_a.size(); ++i) r.scatter.emplace_back(errs_a[i], errs_b[i]);
    return r;
}

/// Everything the rank-preservation statement says about one ordered
/// hypothesis pair (h1, h2) under measures mu_s (synthetic) and mu_r (real)
/// sharing the truth f.
struct TheoremVerdict {
    double delta_eps_s = 0.0;       ///< synthetic risk gap eps_s(h2) - eps_s(h1)
    double delta_eps_r = 0.0;       ///< real risk gap eps_r(h2) - eps_r(h1)
    double delta_restricted = 0.0;  ///< L1 over the disagreement set of (h1, h2)
    double delta_full = 0.0;        ///< L1 over the whole domain

    bool condition_held = false;         ///< delta_eps_s >= delta_restricted
    bool conclusion_held = false;        ///< delta_eps_r >= 0
    bool corollary1_condition = false;   ///< delta_eps_s >= delta_full

    /// Margin of the proof chain delta_eps_r >= delta_eps_s - delta_restricted;
    /// non-negative up to float residue whether or not the condition held.
    double slack = 0.0;

    /// Margin of the gap bound delta_eps_s - delta_eps_r <= delta_full,
    /// i.e. delta_full - (delta_eps_s - delta_eps_r); same sign guarantee.
    double corollary2_slack = 0.0;

    /// The implication under verification: condition => conclusion.
    bool implication_held() const { return !condition_held || conclusion_held; }
};

/// Evaluates one ordered pair in a single fused pass over the domain: the
/// four risk sums and both divergences accumulate together, so batch
/// verification does no per-pair allocation.
inline TheoremVerdict check_pair(const LabelMap& h1, const LabelMap& h2, const LabelMap& f,
                                 const Pmf& mu_r, const Pmf& mu_s) {
    double eps1_r = 0.0, eps2_r = 0.0, eps1_s = 0.0, eps2_s = 0.0;
    double restricted = 0.0, full = 0.0;
    const Eigen::Index n = h1.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = mu_r[i];
        const double s = mu_s[i];
        const double gap = std::abs(r - s);
        full += gap;
        if (h1[i] != f[i]) {
            eps1_r += r;
            eps1_s += s;
        }
        if (h2[i] != f[i]) {
            eps2_r += r;
            eps2_s += s;
        }
        if (h1[i] != h2[i]) restricted += gap;
    }
    TheoremVerdict v;
    v.delta_eps_s = eps2_s - eps1_s;
    v.delta_eps_r = eps2_r - eps1_r;
    v.delta_restricted = restricted;
    v.delta_full = full;
    v.condition_held = v.delta_eps_s >= v.delta_restricted;
    v.conclusion_held = v.delta_eps_r >= 0.0;
    v.corollary1_condition = v.delta_eps_s >= v.delta_full;
    v.slack = v.delta_eps_r - (v.delta_eps_s - v.delta_restricted);
    v.corollary2_slack = v.delta_full - (v.delta_eps_s - v.delta_eps_r);
    return v;
}

/// Verdict for the ordered hypothesis pair (i, j) of an instance.
inline TheoremVerdict check_pair(const FiniteInstance& inst, std::size_t i, std::size_t j) {
    if (i >= inst.hypotheses.size() || j >= inst.hypotheses.size())
        throw SchemaError("hypothesis index out of range: (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") with " + std::to_string(inst.hypotheses.size()) +
                          " hypotheses");
    if (i == j)
        throw SchemaError("check_pair needs two distinct hypotheses, got index " +
                          std::to_string(i) + " twice");
    return check_pair(inst.hypotheses[i], inst.hypotheses[j], inst.f, inst.mu_r, inst.mu_s);
}

/// Fractions of ordered pairs whose real-domain ranking matches the
/// synthetic-domain ranking, split by whether the gap condition triggered.
struct RankPreservationStats {
    std::size_t pairs = 0;                  ///< ordered pairs (i, j), i != j
    std::size_t triggered = 0;              ///< pairs with delta_eps_s >= delta
    std::size_t triggered_preserved = 0;    ///< triggered and delta_eps_r >= 0
    std::size_t untriggered_preserved = 0;  ///< not triggered but still delta_eps_r >= 0
    bool vacuous = false;                   ///< no pair triggered the condition

    /// Preserved fraction among triggered pairs; 1 by convention when vacuous.
    double triggered_fraction() const {
        return triggered == 0 ? 1.0
                              : static_cast<double>(triggered_preserved) /
                                    static_cast<double>(triggered);
    }
    /// Diagnostic: preserved fraction among pairs that did not trigger.
    double untriggered_fraction() const {
        const std::size_t untriggered = pairs - triggered;
        return untriggered == 0 ? 1.0
                                : static_cast<double>(untriggered_preserved) /
                                      static_cast<double>(untriggered);
    }
};

/// Rank preservation over all ordered index pairs of two error vectors,
/// thresholded by a per-pair matrix of restricted divergences.
inline RankPreservationStats pairwise_rank_preservation(const Eigen::VectorXd& errs_s,
                                                        const Eigen::VectorXd& errs_r,
                                                        const Eigen::MatrixXd& delta_restricted) {
    if (errs_s.size() != errs_r.size())
        throw SchemaError("error vectors differ in length: " + std::to_string(errs_s.size()) +
                          " vs " + std::to_string(errs_r.size()));
    if (errs_s.size() < 2)
        throw EmptyInputError("rank preservation needs at least 2 hypotheses, got " +
                              std::to_string(errs_s.size()));
    if (delta_restricted.rows() != errs_s.size() || delta_restricted.cols() != errs_s.size())
        throw SchemaError("delta matrix is " + std::to_string(delta_restricted.rows()) + "x" +
                          std::to_string(delta_restricted.cols()) + ", expected " +
                          std::to_string(errs_s.size()) + " square");

    RankPreservationStats st;
    const Eigen::Index n = errs_s.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            ++st.pairs;
            const bool preserved = errs_r[j] - errs_r[i] >= 0.0;
            if (errs_s[j] - errs_s[i] >= delta_restricted(i, j)) {
                ++st.triggered;
                if (preserved) ++st.triggered_preserved;
            } else if (preserved) {
                ++st.untriggered_preserved;
            }
        }
    }
    st.vacuous = st.triggered == 0;
    return st;
}

/// Same, with a single threshold shared by every pair.
inline RankPreservationStats pairwise_rank_preservation(const Eigen::VectorXd& errs_s,
                                                        const Eigen::VectorXd& errs_r,
                                                        double delta) {
    const Eigen::MatrixXd m = Eigen::MatrixXd::Constant(errs_s.size(), errs_s.size(), delta);
    return pairwise_rank_preservation(errs_s, errs_r, m);
}

/// Rank preservation of one exact instance: errors and per-pair restricted
/// divergences are computed from the measures themselves, so the triggered
/// fraction is exactly 1 on any valid instance.
inline RankPreservationStats pairwise_rank_preservation(const FiniteInstance& inst) {
    const std::size_t h = inst.hypotheses.size();
    if (h < 2) throw EmptyInputError("rank preservation needs at least 2 hypotheses");
    RankPreservationStats st;
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < h; ++j) {
            if (i == j) continue;
            const TheoremVerdict v = check_pair(inst, i, j);
            ++st.pairs;
            if (v.condition_held) {
                ++st.triggered;
                if (v.conclusion_held) ++st.triggered_preserved;
            } else if (v.conclusion_held) {
                ++st.untriggered_preserved;
            }
        }
    }
    st.vacuous = st.triggered == 0;
    return st;
}

}  // namespace rankguard
