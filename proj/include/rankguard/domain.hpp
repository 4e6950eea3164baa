#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rankguard/errors.hpp"

namespace rankguard {

/// Assignment of a class label in [0, c) to each of n domain points.
/// Represents both the ground-truth labeling f and candidate hypotheses h.
using LabelMap = Eigen::VectorXi;

/// The measurable space: n atomic points, each labeled with one of c classes.
struct FiniteDomain {
    Eigen::Index n = 0;
    Eigen::Index c = 0;

    FiniteDomain() = default;
    FiniteDomain(Eigen::Index n_, Eigen::Index c_) : n(n_), c(c_) {
        if (n < 1) throw SchemaError("domain size must be at least 1, got " + std::to_string(n));
        if (c < 2) throw SchemaError("class count must be at least 2, got " + std::to_string(c));
    }

    /// Throws unless every entry of h is a valid label for this domain.
    void validate_labels(const LabelMap& h, const std::string& what) const {
        if (h.size() != n)
            throw SchemaError(what + " has " + std::to_string(h.size()) +
                              " entries, domain has " + std::to_string(n) + " points");
        for (Eigen::Index i = 0; i < h.size(); ++i)
            if (h[i] < 0 || h[i] >= c)
                throw SchemaError(what + "[" + std::to_string(i) + "] = " + std::to_string(h[i]) +
                                  " is outside [0, " + std::to_string(c) + ")");
    }
};

/// Probability mass function over a finite domain. Masses must be
/// non-negative and sum to 1 within 1e-9; the stored vector is normalized
/// exactly unless the raw sum is already 1.0, so values written by this
/// library parse back bit-for-bit.
class Pmf {
public:
    static constexpr double kSumTolerance = 1e-9;

    Pmf() = default;

    explicit Pmf(Eigen::VectorXd masses) : p_(std::move(masses)) {
        if (p_.size() == 0) throw SchemaError("pmf must have at least one mass");
        for (Eigen::Index i = 0; i < p_.size(); ++i) {
            if (!std::isfinite(p_[i]) || p_[i] < 0.0)
                throw SchemaError("pmf mass at index " + std::to_string(i) +
                                  " is negative or non-finite");
        }
        const double total = p_.sum();
        if (std::abs(total - 1.0) > kSumTolerance)
            throw SchemaError("pmf masses sum to " + std::to_string(total) +
                              ", expected 1 within " + std::to_string(kSumTolerance));
        // Normalize to a fixed point of divide-by-sum. A single division can
        // leave the sum an ulp off 1.0, and a vector parsed back from a file
        // this library wrote re-enters this constructor: it must not move.
        for (int pass = 0; pass < 100; ++pass) {
            const double s = p_.sum();
            if (s == 1.0) break;
            const Eigen::VectorXd scaled = p_ / s;
            if ((scaled.array() == p_.array()).all()) break;
            p_ = scaled;
        }
    }

    Eigen::Index size() const { return p_.size(); }
    double operator[](Eigen::Index i) const { return p_[i]; }
    const Eigen::VectorXd& masses() const { return p_; }

    /// Total mass of a set of point indices.
    double mass(const std::vector<Eigen::Index>& points) const {
        double m = 0.0;
        for (Eigen::Index i : points) m += p_[i];
        return m;
    }

private:
    Eigen::VectorXd p_;
};

/// One verification unit: a domain, the real and synthetic measures, the
/// shared ground-truth labeling, and the candidate hypotheses to rank.
struct FiniteInstance {
    FiniteDomain domain;
    Pmf mu_r;  ///< real-data measure
    Pmf mu_s;  ///< synthetic-data measure
    LabelMap f;
    std::vector<LabelMap> hypotheses;

    /// Cross-field consistency; individual fields validate on construction.
    void validate() const {
        if (mu_r.size() != domain.n)
            throw SchemaError("mu_r has " + std::to_string(mu_r.size()) +
                              " masses, domain has " + std::to_string(domain.n) + " points");
        if (mu_s.size() != domain.n)
            throw SchemaError("mu_s has " + std::to_string(mu_s.size()) +
                              " masses, domain has " + std::to_string(domain.n) + " points");
        domain.validate_labels(f, "f");
        if (hypotheses.empty()) throw SchemaError("instance needs at least one hypothesis");
        for (std::size_t k = 0; k < hypotheses.size(); ++k)
            domain.validate_labels(hypotheses[k], "hypotheses[" + std::to_string(k) + "]");
    }
};

/// Paired predicted/actual labels over N evaluation samples.
struct SamplePredictions {
    Eigen::VectorXi predicted;
    Eigen::VectorXi actual;
};

namespace detail {
inline void require_same_length(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b)
        throw SchemaError(std::string(what) + ": lengths differ, " + std::to_string(a) + " vs " +
                          std::to_string(b));
}
}  // namespace detail

/// True risk of h against truth f under measure mu: the mass of the
/// disagreement set {x : h(x) != f(x)}.
inline double exact_risk(const Pmf& mu, const LabelMap& h, const LabelMap& f) {
    detail::require_same_length(mu.size(), h.size(), "exact_risk");
    detail::require_same_length(h.size(), f.size(), "exact_risk");
    double risk = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i)
        if (h[i] != f[i]) risk += mu[i];
    return risk;
}

/// Fraction of samples where the prediction disagrees with the actual label.
inline double empirical_risk(const SamplePredictions& preds) {
    detail::require_same_length(preds.predicted.size(), preds.actual.size(), "empirical_risk");
    if (preds.predicted.size() == 0)
        throw EmptyInputError("empirical risk needs at least one sample");
    Eigen::Index wrong = 0;
    for (Eigen::Index i = 0; i < preds.predicted.size(); ++i)
        if (preds.predicted[i] != preds.actual[i]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(preds.predicted.size());
}

/// Risk gap eps(h2) - eps(h1) under mu. Positive means h1 is the better model.
inline double risk_difference(const Pmf& mu, const LabelMap& h1, const LabelMap& h2,
                              const LabelMap& f) {
    return exact_risk(mu, h2, f) - exact_risk(mu, h1, f);
}

/// The two halves of the disagreement set between h1 and h2:
/// omega1 holds the points where h1 is wrong, omega2 those where h2 is wrong.
/// Their union is exactly {x : h1(x) != h2(x)}; the intersection holds the
/// points where both are wrong in different ways.
struct DisagreementRegions {
    std::vector<Eigen::Index> omega1;  ///< h1 != h2 and h1 != f
    std::vector<Eigen::Index> omega2;  ///< h1 != h2 and h2 != f
};

inline DisagreementRegions disagreement_regions(const LabelMap& h1, const LabelMap& h2,
                                                const LabelMap& f) {
    detail::require_same_length(h1.size(), h2.size(), "disagreement_regions");
    detail::require_same_length(h1.size(), f.size(), "disagreement_regions");
    DisagreementRegions r;
    for (Eigen::Index i = 0; i < h1.size(); ++i) {
        if (h1[i] == h2[i]) continue;
        if (h1[i] != f[i]) r.omega1.push_back(i);
        if (h2[i] != f[i]) r.omega2.push_back(i);
    }
    return r;
}

/// Decomposition of the risk gap over the disagreement regions. The identity
/// delta == mass_omega2 - mass_omega1 is exact in the reals; `residual`
/// records how far floating point lets the two sides drift.
struct RiskDecomposition {
    double mass_omega2 = 0.0;
    double mass_omega1 = 0.0;
    double delta = 0.0;     ///< eps(h2) - eps(h1)
    double residual = 0.0;  ///< |(mass_omega2 - mass_omega1) - delta|
};

inline RiskDecomposition lemma1_check(const Pmf& mu, const LabelMap& h1, const LabelMap& h2,
                                      const LabelMap& f) {
    RiskDecomposition d;
    d.delta = risk_difference(mu, h1, h2, f);
    const DisagreementRegions regions = disagreement_regions(h1, h2, f);
    d.mass_omega1 = mu.mass(regions.omega1);
    d.mass_omega2 = mu.mass(regions.omega2);
    d.residual = std::abs((d.mass_omega2 - d.mass_omega1) - d.delta);
    return d;
}

}  // namespace rankguard
