#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twhm/model.hpp"
#include "twhm/objective.hpp"
#include "twhm/param_vector.hpp"
#include "twhm/snapshot_series.hpp"
#include "twhm/solver.hpp"
#include "twhm/sufficient_stats.hpp"

namespace twhm {

/// Node whose pooled degree is 0 or maximal: the degree moment equations have
/// no finite solution there.
class DegenerateDegreeError : public std::runtime_error {
public:
    explicit DegenerateDegreeError(int node)
        : std::runtime_error("degenerate pooled degree at node " + std::to_string(node)),
          node_(node) {}
    int node() const { return node_; }

private:
    int node_;
};

/// Unregularized lagged-moment equation is unsolvable for this node.
class NoFiniteSolutionError : public std::runtime_error {
public:
    explicit NoFiniteSolutionError(int node)
        : std::runtime_error("lagged moment equation has no finite solution at node " +
                             std::to_string(node)),
          node_(node) {}
    int node() const { return node_; }

private:
    int node_;
};

enum class DegeneratePolicy { Clamp, Strict };

/// Default ridge weight for the dynamic-block moment equations,
/// sqrt(log(np) / (np)).
inline double default_ridge_lambda(int n, int p) {
    const double np = static_cast<double>(n) * p;
    return std::sqrt(std::log(np) / np);
}

namespace detail {

inline double log1p_exp(double s) {
    return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

inline double sigmoid(double s) {
    if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

} // namespace detail

/// Static-block moment estimator: solves, per node, the pooled-degree
/// equations  sum_t sum_{j != i} X^t_{i,j} / n = sum_{j != i} sigmoid(b_i + b_j)
/// by minimizing the strongly convex pseudo-loss
///   f(b) = sum_{i<j} log(1 + e^{b_i + b_j}) - sum_i b_i (pooled degree_i / n),
/// whose gradient is the negated equation residual; stops when the residual
/// sup-norm drops below grad_tol. A node with pooled degree 0 or maximal has
/// no finite solution: the default policy clamps its degree moment into
/// [1/(2n(p-1)), 1 - 1/(2n(p-1))] with a warning, strict mode throws.
inline Eigen::VectorXd fit_mme_beta0(const SufficientStats& stats,
                                     const SolverOptions& opts = {},
                                     DegeneratePolicy policy = DegeneratePolicy::Clamp) {
    const int p = stats.p;
    const double n = stats.n;
    const double full = n * (p - 1);

    Eigen::VectorXd pooled = Eigen::VectorXd::Zero(p);
    {
        std::int64_t r = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j, ++r) {
                pooled[i] += stats.a[r];
                pooled[j] += stats.a[r];
            }
    }

    int clamped = 0;
    Eigen::VectorXd target(p); // mean partner count per step, possibly clamped
    const double lo = 1.0 / (2.0 * full);
    for (int i = 0; i < p; ++i) {
        const double q = pooled[i] / full;
        if (q <= 0.0 || q >= 1.0) {
            if (policy == DegeneratePolicy::Strict) throw DegenerateDegreeError(i);
            ++clamped;
        }
        target[i] = std::min(std::max(q, lo), 1.0 - lo) * (p - 1);
    }
    if (clamped > 0)
        std::fprintf(stderr, "twhm: clamped degenerate pooled degree for %d node(s)\n", clamped);

    const auto value = [&, target](const Eigen::VectorXd& b) {
        double f = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) f += detail::log1p_exp(b[i] + b[j]);
        return f - b.dot(target);
    };
    const auto grad = [&, target](const Eigen::VectorXd& b) {
        Eigen::VectorXd g = -target;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) {
                const double s = detail::sigmoid(b[i] + b[j]);
                g[i] += s;
                g[j] += s;
            }
        return g;
    };

    return gradient_descent(value, grad, Eigen::VectorXd::Zero(p), opts).x;
}

/// Dynamic-block moment estimator given the fitted static block: solves the
/// ridge-regularized lagged moment equations
///   -(1/np) sum_t sum_{j != i} { X^t X^{t-1} - m_{i,j}(b1) } + lambda b1_i = 0,
/// where m_{i,j} is the stationary expectation of X^t X^{t-1} under
/// (beta0_tilde, b1); lambda = 0 recovers the vanilla equations. Solved by
/// gradient descent on the convex pseudo-loss whose per-pair integrand is
///   sig0 [ sig0 s1 + (1 - sig0) log(1 + e^{s0} + e^{s1}) ],
/// with positive second derivative in s1. Stops when the equation residual
/// sup-norm drops below grad_tol.
inline Eigen::VectorXd fit_mme_beta1(const SufficientStats& stats,
                                     const Eigen::VectorXd& beta0_tilde, double lambda,
                                     const SolverOptions& opts = {}) {
    const int p = stats.p;
    if (beta0_tilde.size() != p)
        throw std::invalid_argument("fit_mme_beta1: beta0 dimension mismatch");
    if (!beta0_tilde.allFinite())
        throw std::invalid_argument("fit_mme_beta1: beta0 must be finite");
    if (lambda < 0) throw std::invalid_argument("fit_mme_beta1: lambda must be nonnegative");
    const double n = stats.n;
    const double inv_np = 1.0 / (n * p);
    const std::int64_t pairs = stats.pairs();

    Eigen::ArrayXd s0(pairs), sig0(pairs);
    {
        std::int64_t r = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j, ++r) {
                s0[r] = beta0_tilde[i] + beta0_tilde[j];
                sig0[r] = detail::sigmoid(s0[r]);
            }
    }

    if (lambda == 0.0) {
        // The per-pair moment ranges over (sig0^2, sig0) as s1 sweeps the
        // line, so a pooled lagged count at or outside those limits cannot
        // be matched by any finite parameter.
        Eigen::VectorXd b_sum = Eigen::VectorXd::Zero(p), lo = Eigen::VectorXd::Zero(p),
                        hi = Eigen::VectorXd::Zero(p);
        std::int64_t r = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j, ++r) {
                b_sum[i] += stats.b[r];
                b_sum[j] += stats.b[r];
                lo[i] += n * sig0[r] * sig0[r];
                lo[j] += n * sig0[r] * sig0[r];
                hi[i] += n * sig0[r];
                hi[j] += n * sig0[r];
            }
        for (int i = 0; i < p; ++i)
            if (b_sum[i] <= lo[i] || b_sum[i] >= hi[i]) throw NoFiniteSolutionError(i);
    }

    const auto value = [&](const Eigen::VectorXd& b1) {
        double f = 0.0;
        std::int64_t r = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j, ++r) {
                const double s1 = b1[i] + b1[j];
                const double logS = PairTerms::from_logits(s0[r], s1).log_partition();
                f += inv_np * (n * sig0[r] * (sig0[r] * s1 + (1.0 - sig0[r]) * logS) -
                               stats.b[r] * s1);
            }
        return f + 0.5 * lambda * b1.squaredNorm();
    };
    const auto grad = [&](const Eigen::VectorXd& b1) {
        Eigen::VectorXd g = lambda * b1;
        std::int64_t r = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j, ++r) {
                const PairTerms t = PairTerms::from_logits(s0[r], b1[i] + b1[j]);
                const double gp = inv_np * (n * t.e_on_on() - stats.b[r]);
                g[i] += gp;
                g[j] += gp;
            }
        return g;
    };

    return gradient_descent(value, grad, Eigen::VectorXd::Zero(p), opts).x;
}

struct MmeResult {
    ParamVector theta;
    double beta0_grad_norm = 0.0;
    double beta1_grad_norm = 0.0;
};

/// Both moment-estimator stages in sequence: static block first, then the
/// dynamic block given it.
inline MmeResult fit_mme(const SufficientStats& stats, double lambda,
                         const SolverOptions& opts = {},
                         DegeneratePolicy policy = DegeneratePolicy::Clamp) {
    MmeResult out;
    Eigen::VectorXd b0 = fit_mme_beta0(stats, opts, policy);
    Eigen::VectorXd b1 = fit_mme_beta1(stats, b0, lambda, opts);
    out.theta = ParamVector(std::move(b0), std::move(b1));
    // Residual sup-norms at the returned estimates.
    {
        const int p = stats.p;
        Eigen::VectorXd g0 = Eigen::VectorXd::Zero(p), g1 = Eigen::VectorXd::Zero(p);
        const double inv_np = 1.0 / (static_cast<double>(stats.n) * p);
        std::int64_t r = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j, ++r) {
                const PairTerms t = PairTerms::from_params(out.theta, i, j);
                const double res0 = t.p_stat() - stats.a[r] / stats.n;
                const double res1 = inv_np * (stats.n * t.e_on_on() - stats.b[r]);
                g0[i] += res0;
                g0[j] += res0;
                g1[i] += res1;
                g1[j] += res1;
            }
        g1 += lambda * out.theta.beta1;
        out.beta0_grad_norm = g0.lpNorm<Eigen::Infinity>();
        out.beta1_grad_norm = g1.lpNorm<Eigen::Infinity>();
    }
    return out;
}

struct FitResult {
    ParamVector theta_hat;
    int iterations = 0;
    double final_grad_norm = 0.0;
    double final_loss = 0.0;
    bool converged = false;
    SolveStatus status = SolveStatus::Converged;
    std::vector<double> loss_trace;
    std::optional<double> smallest_hessian_eigenvalue; // filled on request
};

/// Local maximum-likelihood fit: gradient descent on the normalized negative
/// log-likelihood from the given start (normally the ridge moment estimate).
/// With the Armijo rule the recorded loss trace is non-increasing.
inline FitResult fit_mle(const SufficientStats& stats, const ParamVector& init,
                         const SolverOptions& opts = {}, bool with_diagnostics = false) {
    stats.check_params(init);
    const auto value = [&](const Eigen::VectorXd& x) {
        return neg_log_likelihood(ParamVector::from_stacked(x), stats);
    };
    const auto grad = [&](const Eigen::VectorXd& x) {
        return gradient(ParamVector::from_stacked(x), stats);
    };
    SolveResult s = gradient_descent(value, grad, init.stacked(), opts);

    FitResult out;
    out.theta_hat = ParamVector::from_stacked(s.x);
    out.iterations = s.iterations;
    out.final_grad_norm = s.grad_norm;
    out.final_loss = s.loss;
    out.status = s.status;
    out.converged = s.status == SolveStatus::Converged;
    out.loss_trace = std::move(s.loss_trace);
    if (with_diagnostics)
        out.smallest_hessian_eigenvalue = smallest_eigenvalue(hessian(out.theta_hat, stats));
    return out;
}

/// Classical static degree-heterogeneity baseline: the snapshots are pooled
/// as if independent, which yields exactly the static-block moment equations.
inline Eigen::VectorXd fit_static_beta_model(const SnapshotSeries& series,
                                             const SolverOptions& opts = {},
                                             DegeneratePolicy policy = DegeneratePolicy::Clamp) {
    return fit_mme_beta0(sufficient_stats(series), opts, policy);
}

} // namespace twhm
