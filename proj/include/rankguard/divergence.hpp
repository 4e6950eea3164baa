#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rankguard/domain.hpp"
#include "rankguard/errors.hpp"

namespace rankguard {

// Divergence convention: everything in this library is the *un-halved* L1
// sum over points of |mu_r(x) - mu_s(x)|, which ranges over [0, 2]. The
// rank-preservation bounds are stated against this quantity; halving it
// would silently weaken them by a factor of two. The conventional halved
// total variation is exposed only as a derived accessor for reporting.

/// Un-halved L1 distance between two measures on the same domain.
inline double exact_l1(const Pmf& mu_r, const Pmf& mu_s) {
    detail::require_same_length(mu_r.size(), mu_s.size(), "exact_l1");
    return (mu_r.masses() - mu_s.masses()).cwiseAbs().sum();
}

/// Un-halved L1 distance accumulated only over the given point set.
inline double restricted_l1(const Pmf& mu_r, const Pmf& mu_s,
                            const std::vector<Eigen::Index>& region) {
    detail::require_same_length(mu_r.size(), mu_s.size(), "restricted_l1");
    double total = 0.0;
    for (Eigen::Index i : region) {
        if (i < 0 || i >= mu_r.size())
            throw SchemaError("region point " + std::to_string(i) + " is outside [0, " +
                              std::to_string(mu_r.size()) + ")");
        total += std::abs(mu_r[i] - mu_s[i]);
    }
    return total;
}

/// Divergence between two measures: the full-domain L1 and, when a
/// restriction set was supplied, the L1 over that set alone.
struct DivergenceReport {
    double full_l1 = 0.0;
    std::optional<double> restricted_l1;

    /// Both values use the un-halved sum; see the convention note above.
    static constexpr const char* convention = "unhalved";

    /// Conventional total variation distance, for display only.
    double halved_tv() const { return 0.5 * full_l1; }
};

inline DivergenceReport divergence_report(const Pmf& mu_r, const Pmf& mu_s) {
    DivergenceReport r;
    r.full_l1 = exact_l1(mu_r, mu_s);
    return r;
}

inline DivergenceReport divergence_report(const Pmf& mu_r, const Pmf& mu_s,
                                          const std::vector<Eigen::Index>& region) {
    DivergenceReport r;
    r.full_l1 = exact_l1(mu_r, mu_s);
    r.restricted_l1 = rankguard::restricted_l1(mu_r, mu_s, region);
    return r;
}

}  // namespace rankguard
