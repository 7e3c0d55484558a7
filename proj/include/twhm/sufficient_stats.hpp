#pragma once

#include <Eigen/Core>
#include <stdexcept>

#include "twhm/model.hpp"
#include "twhm/param_vector.hpp"
#include "twhm/snapshot_series.hpp"

namespace twhm {

/// Per-pair counts over transitions t = 1..n:
///   a = sum_t X^t,  b = sum_t X^t X^{t-1},  d = sum_t (1-X^t)(1-X^{t-1}).
/// Counts are exact integers for observed data; the same container carries
/// the real-valued population analogs used by the expected Hessian.
struct SufficientStats {
    int p = 0;
    int n = 0;
    Eigen::ArrayXd a, b, d; // pair-rank indexed, i < j

    std::int64_t pairs() const { return a.size(); }

    void check_params(const ParamVector& theta) const {
        if (theta.p() != p)
            throw std::invalid_argument("SufficientStats: parameter dimension mismatch");
    }
};

inline SufficientStats sufficient_stats(const SnapshotSeries& series) {
    if (series.n() < 1)
        throw std::invalid_argument("sufficient_stats: need at least one transition");
    SufficientStats s;
    s.p = series.p();
    s.n = series.n();
    const std::int64_t pairs = pair_count(s.p);
    s.a = Eigen::ArrayXd::Zero(pairs);
    s.b = Eigen::ArrayXd::Zero(pairs);
    s.d = Eigen::ArrayXd::Zero(pairs);
    for (int t = 1; t <= s.n; ++t) {
        const Snapshot& cur = series.frame(t);
        const Snapshot& prev = series.frame(t - 1);
        for (std::int64_t r = 0; r < pairs; ++r) {
            const bool x = cur.edge_by_rank(r);
            const bool xp = prev.edge_by_rank(r);
            if (x) {
                s.a[r] += 1.0;
                if (xp) s.b[r] += 1.0;
            } else if (!xp) {
                s.d[r] += 1.0;
            }
        }
    }
    return s;
}

/// Population sufficient statistics at theta: each count replaced by its
/// stationary expectation over n transitions.
inline SufficientStats expected_stats(const ParamVector& theta, int n) {
    if (n < 1) throw std::invalid_argument("expected_stats: n must be >= 1");
    SufficientStats s;
    s.p = theta.p();
    s.n = n;
    const std::int64_t pairs = pair_count(s.p);
    s.a.resize(pairs);
    s.b.resize(pairs);
    s.d.resize(pairs);
    std::int64_t r = 0;
    for (int i = 0; i < s.p; ++i)
        for (int j = i + 1; j < s.p; ++j, ++r) {
            const PairTerms t = PairTerms::from_params(theta, i, j);
            s.a[r] = n * t.p_stat();
            s.b[r] = n * t.e_on_on();
            s.d[r] = n * t.e_off_off();
        }
    return s;
}

} // namespace twhm
