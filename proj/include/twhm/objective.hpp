#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "twhm/model.hpp"
#include "twhm/param_vector.hpp"
#include "twhm/sufficient_stats.hpp"

namespace twhm {

/// The three p x p blocks of the 2p x 2p Hessian of the normalized negative
/// log-likelihood, in (beta0, beta1) ordering:
///   [ V1  V2 ]
///   [ V2  V3 ]
/// Each block is symmetric and diagonally balanced: its diagonal entries are
/// the sums of their off-diagonal rows.
struct HessianBlocks {
    Eigen::MatrixXd v1, v2, v3;

    int p() const { return static_cast<int>(v1.rows()); }

    Eigen::MatrixXd assemble() const {
        const int d = p();
        Eigen::MatrixXd h(2 * d, 2 * d);
        h.topLeftCorner(d, d) = v1;
        h.topRightCorner(d, d) = v2;
        h.bottomLeftCorner(d, d) = v2;
        h.bottomRightCorner(d, d) = v3;
        return h;
    }

    // Matrix-free product with the assembled 2p x 2p matrix.
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        const int d = p();
        if (x.size() != 2 * d)
            throw std::invalid_argument("HessianBlocks::apply: dimension mismatch");
        Eigen::VectorXd y(2 * d);
        y.head(d) = v1 * x.head(d) + v2 * x.tail(d);
        y.tail(d) = v2 * x.head(d) + v3 * x.tail(d);
        return y;
    }
};

/// Normalized negative log-likelihood conditional on X^0:
///   l(theta) = (1/p)   sum_{i<j} log(1 + e^{s0} + e^{s1})
///            - (1/np)  sum_{i<j} [ a s0 + d log(1 + e^{s1}) + b log(1 + e^{s1-s0}) ].
inline double neg_log_likelihood(const ParamVector& theta, const SufficientStats& stats) {
    stats.check_params(theta);
    const int p = stats.p;
    const double inv_np = 1.0 / (static_cast<double>(stats.n) * p);
    double partition = 0.0, data = 0.0;
    std::int64_t r = 0;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j, ++r) {
            const PairTerms t = PairTerms::from_params(theta, i, j);
            partition += t.log_partition();
            data += stats.a[r] * t.s0 + stats.d[r] * t.log1p_exp_s1() +
                    stats.b[r] * t.log1p_exp_s1_minus_s0();
        }
    return partition / p - inv_np * data;
}

/// Analytic gradient of l(theta), length 2p in (beta0, beta1) ordering.
inline Eigen::VectorXd gradient(const ParamVector& theta, const SufficientStats& stats) {
    stats.check_params(theta);
    const int p = stats.p;
    const double inv_p = 1.0 / p;
    const double inv_np = 1.0 / (static_cast<double>(stats.n) * p);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * p);
    std::int64_t r = 0;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j, ++r) {
            const PairTerms t = PairTerms::from_params(theta, i, j);
            const double keep_on = t.eb / (t.ea + t.eb); // e^{s1}/(e^{s0}+e^{s1})
            const double off_frac = t.eb / (t.e0 + t.eb); // e^{s1}/(1+e^{s1})
            const double g0 = inv_p * t.p_new() - inv_np * (stats.a[r] - stats.b[r] * keep_on);
            const double g1 = inv_p * t.p_keep() -
                              inv_np * (stats.d[r] * off_frac + stats.b[r] * keep_on);
            g[i] += g0;
            g[j] += g0;
            g[p + i] += g1;
            g[p + j] += g1;
        }
    return g;
}

/// Exact Hessian blocks of l(theta). Off-diagonal entries follow the
/// closed-form second derivatives; diagonals are the row sums.
inline HessianBlocks hessian(const ParamVector& theta, const SufficientStats& stats) {
    stats.check_params(theta);
    const int p = stats.p;
    const double inv_p = 1.0 / p;
    const double inv_np = 1.0 / (static_cast<double>(stats.n) * p);
    HessianBlocks h;
    h.v1 = Eigen::MatrixXd::Zero(p, p);
    h.v2 = Eigen::MatrixXd::Zero(p, p);
    h.v3 = Eigen::MatrixXd::Zero(p, p);
    std::int64_t r = 0;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j, ++r) {
            const PairTerms t = PairTerms::from_params(theta, i, j);
            const double inv_t2 = 1.0 / (t.total * t.total);
            const double sum_ab = t.ea + t.eb;
            const double keep_curv = t.ea * t.eb / (sum_ab * sum_ab);
            const double sum_0b = t.e0 + t.eb;
            const double off_curv = t.e0 * t.eb / (sum_0b * sum_0b);
            const double w1 = inv_p * t.ea * (t.e0 + t.eb) * inv_t2 - inv_np * stats.b[r] * keep_curv;
            const double w2 = -inv_p * t.ea * t.eb * inv_t2 + inv_np * stats.b[r] * keep_curv;
            const double w3 = inv_p * t.eb * (t.e0 + t.ea) * inv_t2 -
                              inv_np * (stats.d[r] * off_curv + stats.b[r] * keep_curv);
            h.v1(i, j) = h.v1(j, i) = w1;
            h.v2(i, j) = h.v2(j, i) = w2;
            h.v3(i, j) = h.v3(j, i) = w3;
            h.v1(i, i) += w1;
            h.v1(j, j) += w1;
            h.v2(i, i) += w2;
            h.v2(j, j) += w2;
            h.v3(i, i) += w3;
            h.v3(j, j) += w3;
        }
    return h;
}

/// Hessian of E l(theta) at theta_eval when the data are generated at
/// theta_true: the sample counts are replaced by their expectations.
inline HessianBlocks expected_hessian(const ParamVector& theta_eval,
                                      const ParamVector& theta_true, int n) {
    if (theta_eval.p() != theta_true.p())
        throw std::invalid_argument("expected_hessian: dimension mismatch");
    return hessian(theta_eval, expected_stats(theta_true, n));
}

namespace detail {

inline void check_symmetric(const HessianBlocks& blocks) {
    const auto asym = [](const Eigen::MatrixXd& m) {
        return (m - m.transpose()).cwiseAbs().maxCoeff();
    };
    const double scale =
        std::max({blocks.v1.cwiseAbs().maxCoeff(), blocks.v2.cwiseAbs().maxCoeff(),
                  blocks.v3.cwiseAbs().maxCoeff(), 1.0});
    if (asym(blocks.v1) > 1e-9 * scale || asym(blocks.v2) > 1e-9 * scale ||
        asym(blocks.v3) > 1e-9 * scale)
        throw std::invalid_argument("smallest_eigenvalue: blocks are not symmetric");
}

// Lanczos with full reorthogonalization on shift*I - H, returning the
// smallest eigenvalue of H. Used beyond the dense cutoff.
inline double lanczos_smallest(const HessianBlocks& blocks, double tol) {
    const int dim = 2 * blocks.p();
    // Gershgorin upper bound on the spectrum of H.
    double shift = 0.0;
    for (int i = 0; i < blocks.p(); ++i) {
        double row0 = blocks.v1(i, i) + blocks.v1.row(i).cwiseAbs().sum() -
                      std::abs(blocks.v1(i, i)) + blocks.v2.row(i).cwiseAbs().sum();
        double row1 = blocks.v3(i, i) + blocks.v3.row(i).cwiseAbs().sum() -
                      std::abs(blocks.v3(i, i)) + blocks.v2.col(i).cwiseAbs().sum();
        shift = std::max({shift, row0, row1});
    }
    shift += 1.0;

    const int max_steps = std::min(dim, 400);
    Eigen::MatrixXd basis(dim, max_steps + 1);
    Eigen::VectorXd alpha(max_steps), beta(max_steps);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(dim);
    for (int i = 0; i < dim; ++i) v[i] += 1e-3 * std::cos(static_cast<double>(i));
    v.normalize();
    basis.col(0) = v;
    double result = 0.0;
    for (int k = 0; k < max_steps; ++k) {
        Eigen::VectorXd w = shift * basis.col(k) - blocks.apply(basis.col(k));
        alpha[k] = basis.col(k).dot(w);
        w -= alpha[k] * basis.col(k);
        if (k > 0) w -= beta[k - 1] * basis.col(k - 1);
        // Full reorthogonalization, twice.
        for (int pass = 0; pass < 2; ++pass)
            w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
        beta[k] = w.norm();

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (int s = 0; s <= k; ++s) {
            tri(s, s) = alpha[s];
            if (s < k) tri(s, s + 1) = tri(s + 1, s) = beta[s];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        const int top = k; // largest eigenvalue of the shifted operator
        result = shift - es.eigenvalues()(top);
        const double resid = beta[k] * std::abs(es.eigenvectors()(k, top));
        if (resid <= tol || beta[k] <= tol) return result;
        basis.col(k + 1) = w / beta[k];
    }
    return result;
}

} // namespace detail

/// Smallest eigenvalue of the assembled symmetric 2p x 2p Hessian. Dense
/// solve up to dimension 4000, shifted Lanczos iteration beyond that.
inline double smallest_eigenvalue(const HessianBlocks& blocks) {
    detail::check_symmetric(blocks);
    const int dim = 2 * blocks.p();
    if (dim <= 4000) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks.assemble(),
                                                          Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }
    return detail::lanczos_smallest(blocks, 1e-8);
}

/// Sufficient (not necessary) positive-definiteness certificate: the full
/// Hessian is positive definite if -V2, V2 + V3 and V2 + V1 all are.
inline bool block_pd_sufficient(const HessianBlocks& blocks) {
    const auto pd = [](const Eigen::MatrixXd& m) {
        return Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success;
    };
    return pd(-blocks.v2) && pd(blocks.v2 + blocks.v3) && pd(blocks.v2 + blocks.v1);
}

/// Largest diagonal-balance violation over the three blocks, relative to the
/// block scale. Near zero by construction; exposed as a diagnostic.
inline double diag_balance_residual(const HessianBlocks& blocks) {
    double resid = 0.0;
    for (const auto* m : {&blocks.v1, &blocks.v2, &blocks.v3}) {
        const double scale = std::max(m->cwiseAbs().maxCoeff(), 1e-300);
        for (int i = 0; i < m->rows(); ++i) {
            const double off = m->row(i).sum() - 2.0 * (*m)(i, i);
            resid = std::max(resid, std::abs(off) / scale);
        }
    }
    return resid;
}

} // namespace twhm
