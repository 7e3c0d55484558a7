#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twhm/param_vector.hpp"

namespace twhm {

/// Shared per-pair exponential terms, shifted by the max logit so that the
/// largest of the three is exactly 1 and nothing overflows:
///   e0 = exp(-m), ea = exp(s0 - m), eb = exp(s1 - m),  m = max(0, s0, s1),
/// where s0 = beta_{i,0}+beta_{j,0} and s1 = beta_{i,1}+beta_{j,1}.
/// Every probability and moment below is a ratio of sums of these terms.
struct PairTerms {
    double s0, s1;
    double m;
    double e0, ea, eb;
    double total; // e0 + ea + eb

    static PairTerms from_logits(double s0, double s1) {
        PairTerms t;
        t.s0 = s0;
        t.s1 = s1;
        t.m = std::max({0.0, s0, s1});
        t.e0 = std::exp(-t.m);
        t.ea = std::exp(s0 - t.m);
        t.eb = std::exp(s1 - t.m);
        t.total = t.e0 + t.ea + t.eb;
        return t;
    }

    static PairTerms from_params(const ParamVector& theta, int i, int j) {
        return from_logits(theta.beta0[i] + theta.beta0[j],
                           theta.beta1[i] + theta.beta1[j]);
    }

    // Innovation law: force-on, copy, force-off.
    double p_new() const { return ea / total; }
    double p_keep() const { return eb / total; }
    double p_off() const { return e0 / total; }

    // Stationary edge probability, sigmoid(s0).
    double p_stat() const { return ea / (e0 + ea); }

    // Stationary per-step expectations of X^t X^{t-1} and (1-X^t)(1-X^{t-1}).
    double e_on_on() const { return ea * (ea + eb) / ((e0 + ea) * total); }
    double e_off_off() const { return e0 * (e0 + eb) / ((e0 + ea) * total); }

    // log(1 + e^{s0} + e^{s1}), log(1 + e^{s1}), log(1 + e^{s1 - s0}).
    double log_partition() const { return m + std::log(total); }
    double log1p_exp_s1() const { return m + std::log(e0 + eb); }
    double log1p_exp_s1_minus_s0() const { return m - s0 + std::log(ea + eb); }
};

/// All derived probabilities for one pair.
struct PairProbabilities {
    double p_new;          // P(innovation = 0), edge forced on
    double p_keep;         // P(innovation = 1), previous state copied
    double p_off;          // P(innovation = -1), edge forced off
    double p_stat;         // stationary edge probability
    double p_on_given_off; // P(X^t = 1 | X^{t-1} = 0)
    double p_off_given_on; // P(X^t = 0 | X^{t-1} = 1)
    double rho1;           // lag-1 autocorrelation factor
};

inline PairProbabilities pair_probabilities(const PairTerms& t) {
    PairProbabilities r;
    r.p_new = t.p_new();
    r.p_keep = t.p_keep();
    r.p_off = t.p_off();
    r.p_stat = t.p_stat();
    r.p_on_given_off = r.p_new;
    r.p_off_given_on = r.p_off;
    r.rho1 = r.p_keep;
    return r;
}

inline PairProbabilities pair_probabilities(const ParamVector& theta, int i, int j) {
    theta.check_pair(i, j);
    return pair_probabilities(PairTerms::from_params(theta, i, j));
}

/// Mean stationary edge probability over all ordered pairs.
inline double expected_density(const ParamVector& theta) {
    const int p = theta.p();
    double sum = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            sum += PairTerms::from_params(theta, i, j).p_stat();
    return 2.0 * sum / (static_cast<double>(p) * (p - 1));
}

/// Expectations of the per-pair sufficient statistics over n transitions:
///   E(a) = n E(X^t),  E(b) = n E(X^t X^{t-1}),  E(d) = n E((1-X^t)(1-X^{t-1})).
struct PairMoments {
    double e_a, e_b, e_d;
};

inline PairMoments expected_pair_moments(const ParamVector& theta, int i, int j, int n) {
    theta.check_pair(i, j);
    if (n < 1) throw std::invalid_argument("expected_pair_moments: n must be >= 1");
    const PairTerms t = PairTerms::from_params(theta, i, j);
    return {n * t.p_stat(), n * t.e_on_on(), n * t.e_off_off()};
}

/// Edge autocorrelation at the given lag: (e^{s1} / (1 + e^{s0} + e^{s1}))^lag.
inline double edge_acf(const ParamVector& theta, int i, int j, int lag) {
    theta.check_pair(i, j);
    if (lag < 0) throw std::invalid_argument("edge_acf: lag must be nonnegative");
    const PairTerms t = PairTerms::from_params(theta, i, j);
    return std::pow(t.p_keep(), lag);
}

struct DegreeMoments {
    double mean, variance;
};

/// Stationary mean and variance of node i's degree.
inline DegreeMoments degree_moments(const ParamVector& theta, int i) {
    theta.check_node(i);
    DegreeMoments m{0.0, 0.0};
    for (int k = 0; k < theta.p(); ++k) {
        if (k == i) continue;
        const double q = PairTerms::from_params(theta, i, k).p_stat();
        m.mean += q;
        m.variance += q * (1.0 - q);
    }
    return m;
}

} // namespace twhm
