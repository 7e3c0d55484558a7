#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "twhm/model.hpp"
#include "twhm/parallel.hpp"
#include "twhm/param_vector.hpp"
#include "twhm/rng.hpp"
#include "twhm/snapshot_series.hpp"

namespace twhm {

struct SimConfig {
    ParamVector theta;
    int n = 1;                    // transitions; the series holds n + 1 snapshots
    std::uint64_t seed = 0;
    std::optional<Snapshot> init; // user-supplied X^0; stationary draw if absent

    void validate() const {
        theta.validate();
        if (n < 1) throw std::invalid_argument("SimConfig: n must be >= 1");
        if (init && init->p() != theta.p())
            throw std::invalid_argument("SimConfig: initial snapshot node count mismatch");
    }
};

namespace detail {
// Inverse of pair_rank: smallest i of the pair with lexicographic rank r.
inline int pair_row(int p, std::int64_t r) {
    const double pd = static_cast<double>(p);
    double disc = (2.0 * pd - 1.0) * (2.0 * pd - 1.0) - 8.0 * static_cast<double>(r);
    int i = static_cast<int>(std::floor(((2.0 * pd - 1.0) - std::sqrt(disc)) / 2.0));
    if (i < 0) i = 0;
    while (i > 0 && pair_rank(p, i, i + 1) > r) --i;
    while (pair_rank(p, i + 1, i + 2) <= r && i + 2 < p) ++i;
    return i;
}
} // namespace detail

/// Draws a path of the edge process. Each pair-step consumes one uniform from
/// a counter-based stream keyed by (seed, i, j, t), so the result is a pure
/// function of the configuration no matter how the pair loop is scheduled.
/// Transition t: u < p_new -> edge on; u < p_new + p_keep -> copy X^{t-1};
/// otherwise edge off. X^0 is drawn edge-wise Bernoulli(p_stat) when no
/// initial snapshot is given.
inline SnapshotSeries simulate(const SimConfig& cfg) {
    cfg.validate();
    const int p = cfg.theta.p();
    const int n = cfg.n;
    const std::int64_t pairs = pair_count(p);

    std::vector<Snapshot> frames(static_cast<std::size_t>(n) + 1, Snapshot(p));
    if (cfg.init) frames[0] = *cfg.init;

    parallel_for(pairs, [&](std::int64_t begin, std::int64_t end) {
        int i = detail::pair_row(p, begin);
        int j = static_cast<int>(begin - pair_rank(p, i, i + 1)) + i + 1;
        for (std::int64_t r = begin; r < end; ++r) {
            const PairTerms t = PairTerms::from_params(cfg.theta, i, j);
            const double p_new = t.p_new();
            const double p_new_or_keep = p_new + t.p_keep();
            const double p_stat = t.p_stat();

            bool prev;
            if (cfg.init) {
                prev = frames[0].edge_by_rank(r);
            } else {
                prev = pair_step_uniform(cfg.seed, i, j, 0) < p_stat;
                frames[0].set_edge_by_rank(r, prev);
            }
            for (int step = 1; step <= n; ++step) {
                const double u = pair_step_uniform(cfg.seed, i, j, step);
                const bool cur = u < p_new || (u < p_new_or_keep && prev);
                frames[static_cast<std::size_t>(step)].set_edge_by_rank(r, cur);
                prev = cur;
            }
            if (++j == p) j = ++i + 1;
        }
    });
    return SnapshotSeries(std::move(frames));
}

/// Fraction of present edges over all pairs and snapshots t = 1..n.
inline double empirical_density(const SnapshotSeries& series) {
    if (series.n() < 1) return 0.0;
    std::int64_t present = 0;
    for (int t = 1; t <= series.n(); ++t) present += series.frame(t).edge_count();
    return static_cast<double>(present) /
           (static_cast<double>(series.frame(0).pairs()) * series.n());
}

} // namespace twhm
