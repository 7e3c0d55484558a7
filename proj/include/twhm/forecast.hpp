#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <variant>
#include <vector>

#include "twhm/model.hpp"
#include "twhm/param_vector.hpp"
#include "twhm/snapshot_series.hpp"

namespace twhm {

struct FixedCutoff {
    double c = 0.5;
};

struct Adaptive {
    double omega = 1.0;
};

struct AdaptiveAuto {
    std::vector<double> omega_grid; // empty = default grid
};

struct PredictionConfig {
    std::variant<FixedCutoff, Adaptive, AdaptiveAuto> rule = FixedCutoff{};
};

inline std::vector<double> default_omega_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 20; ++k) g.push_back(0.05 * k);
    return g;
}

/// One-step-ahead edge probability:
///   P(X^t = 1 | X^{t-1}) = p_new + p_keep * X^{t-1}.
inline double link_probability(const ParamVector& theta, const Snapshot& prev, int i, int j) {
    theta.check_pair(i, j);
    if (prev.p() != theta.p())
        throw std::invalid_argument("link_probability: snapshot dimension mismatch");
    const PairTerms t = PairTerms::from_params(theta, i, j);
    return t.p_new() + (prev.edge(i, j) ? t.p_keep() : 0.0);
}

/// Conditional expected degrees given the previous snapshot.
inline Eigen::VectorXd predict_degrees(const ParamVector& theta, const Snapshot& prev) {
    if (prev.p() != theta.p())
        throw std::invalid_argument("predict_degrees: snapshot dimension mismatch");
    const int p = theta.p();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(p);
    std::int64_t r = 0;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j, ++r) {
            const PairTerms t = PairTerms::from_params(theta, i, j);
            const double prob = t.p_new() + (prev.edge_by_rank(r) ? t.p_keep() : 0.0);
            d[i] += prob;
            d[j] += prob;
        }
    return d;
}

/// Per-pair threshold equivalent to the omega-blend rule:
///   c_{i,j} = (0.5 e^{s1} + (1-w) e^{s0}) / ((1-w)(1 + e^{s0}) + e^{s1}).
inline double adaptive_cutoff(const ParamVector& theta, int i, int j, double omega) {
    theta.check_pair(i, j);
    const PairTerms t = PairTerms::from_params(theta, i, j);
    const double w1 = 1.0 - omega;
    return (0.5 * t.eb + w1 * t.ea) / (w1 * (t.e0 + t.ea) + t.eb);
}

/// Threshold rule: edge predicted present when P >= c.
inline Snapshot predict_links_fixed(const ParamVector& theta, const Snapshot& prev, double c) {
    if (prev.p() != theta.p())
        throw std::invalid_argument("predict_links: snapshot dimension mismatch");
    const int p = theta.p();
    Snapshot out(p);
    std::int64_t r = 0;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j, ++r) {
            const PairTerms t = PairTerms::from_params(theta, i, j);
            const double prob = t.p_new() + (prev.edge_by_rank(r) ? t.p_keep() : 0.0);
            out.set_edge_by_rank(r, prob >= c);
        }
    return out;
}

/// Blend rule: edge predicted present when
///   omega * P + (1 - omega) * X^{t-1} > 0.5.
inline Snapshot predict_links_adaptive(const ParamVector& theta, const Snapshot& prev,
                                       double omega) {
    if (prev.p() != theta.p())
        throw std::invalid_argument("predict_links: snapshot dimension mismatch");
    if (omega < 0.0 || omega > 1.0)
        throw std::invalid_argument("predict_links: omega must lie in [0,1]");
    const int p = theta.p();
    Snapshot out(p);
    std::int64_t r = 0;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j, ++r) {
            const PairTerms t = PairTerms::from_params(theta, i, j);
            const bool x = prev.edge_by_rank(r);
            const double prob = t.p_new() + (x ? t.p_keep() : 0.0);
            out.set_edge_by_rank(r, omega * prob + (x ? 1.0 - omega : 0.0) > 0.5);
        }
    return out;
}

/// Fraction of node pairs whose predicted presence matches the observed one.
inline double prediction_accuracy(const Snapshot& predicted, const Snapshot& observed) {
    if (predicted.p() != observed.p())
        throw std::invalid_argument("prediction_accuracy: snapshot sizes differ");
    const std::int64_t pairs = predicted.pairs();
    std::int64_t agree = 0;
    for (std::int64_t r = 0; r < pairs; ++r)
        if (predicted.edge_by_rank(r) == observed.edge_by_rank(r)) ++agree;
    return static_cast<double>(agree) / static_cast<double>(pairs);
}

/// Scans the omega grid on the window's last transition: predicts the final
/// snapshot from its predecessor under each candidate and returns the
/// accuracy-maximizing omega, breaking ties toward the largest value.
inline double select_omega(const SnapshotSeries& window, const ParamVector& theta,
                           const std::vector<double>& grid = default_omega_grid()) {
    if (window.n() < 1)
        throw std::invalid_argument("select_omega: window needs at least two snapshots");
    if (grid.empty()) throw std::invalid_argument("select_omega: empty candidate grid");
    const Snapshot& prev = window.frame(window.n() - 1);
    const Snapshot& truth = window.frame(window.n());
    double best_omega = grid.front();
    double best_acc = -1.0;
    for (double omega : grid) {
        const double acc = prediction_accuracy(predict_links_adaptive(theta, prev, omega), truth);
        if (acc > best_acc || (acc == best_acc && omega > best_omega)) {
            best_acc = acc;
            best_omega = omega;
        }
    }
    return best_omega;
}

/// Rule dispatcher. AdaptiveAuto requires a window to tune omega, so it is
/// rejected here; callers compose select_omega with the Adaptive rule.
inline Snapshot predict_links(const ParamVector& theta, const Snapshot& prev,
                              const PredictionConfig& cfg) {
    if (const auto* f = std::get_if<FixedCutoff>(&cfg.rule))
        return predict_links_fixed(theta, prev, f->c);
    if (const auto* a = std::get_if<Adaptive>(&cfg.rule))
        return predict_links_adaptive(theta, prev, a->omega);
    throw std::invalid_argument(
        "predict_links: the auto rule needs a history window; select omega first");
}

} // namespace twhm
