#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace twhm {

struct FixedStep {
    double eta = 1.0;
};

struct BacktrackingArmijo {
    double c = 1e-4;
    double shrink = 0.5;
    double init = 1.0;
};

using StepRule = std::variant<FixedStep, BacktrackingArmijo>;

struct SolverOptions {
    int max_iters = 5000;
    double grad_tol = 1e-8;           // sup-norm stopping threshold on the gradient
    StepRule step = BacktrackingArmijo{};
    std::optional<double> box;        // sup-norm clamp radius around the start point

    void validate() const {
        if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be >= 1");
        if (grad_tol <= 0) throw std::invalid_argument("SolverOptions: grad_tol must be positive");
        if (box && *box <= 0) throw std::invalid_argument("SolverOptions: box radius must be positive");
    }
};

enum class SolveStatus { Converged, MaxIters, LineSearchFailure };

struct SolveResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double grad_norm = 0.0;
    double loss = 0.0;
    SolveStatus status = SolveStatus::Converged;
    std::vector<double> loss_trace; // value at start plus each accepted iterate
};

/// Plain gradient descent. With the Armijo rule the accepted-loss sequence is
/// non-increasing; each line search restarts from at most the configured
/// initial step (warm-started from the previous accepted step). An optional
/// box projects iterates onto the sup-norm ball around the start point.
template <class Value, class Grad>
SolveResult gradient_descent(Value&& value, Grad&& grad_fn, Eigen::VectorXd x0,
                             const SolverOptions& opts) {
    opts.validate();
    const Eigen::VectorXd start = x0;
    const auto clamp = [&](Eigen::VectorXd v) {
        if (opts.box) {
            const double r = *opts.box;
            v = v.array().max(start.array() - r).min(start.array() + r).matrix();
        }
        return v;
    };

    SolveResult res;
    res.x = std::move(x0);
    double f = value(res.x);
    res.loss_trace.push_back(f);
    Eigen::VectorXd g = grad_fn(res.x);

    double trial = 1.0;
    if (const auto* bt = std::get_if<BacktrackingArmijo>(&opts.step)) trial = bt->init * bt->shrink;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        res.grad_norm = g.lpNorm<Eigen::Infinity>();
        if (res.grad_norm <= opts.grad_tol) {
            res.iterations = iter;
            res.loss = f;
            res.status = SolveStatus::Converged;
            return res;
        }

        if (const auto* fs = std::get_if<FixedStep>(&opts.step)) {
            res.x = clamp(res.x - fs->eta * g);
            f = value(res.x);
        } else {
            const auto& bt = std::get<BacktrackingArmijo>(opts.step);
            // First trial comes from init; afterwards the previous accepted
            // step, grown by one shrink factor, so the step length adapts to
            // the local curvature in both directions.
            double eta = std::min(trial / bt.shrink, 1e8);
            bool accepted = false;
            Eigen::VectorXd g_next;
            bool have_g_next = false;
            while (eta > 1e-20) {
                Eigen::VectorXd cand = clamp(res.x - eta * g);
                const double f_cand = value(cand);
                const double decrease = g.dot(res.x - cand);
                // Sufficient decrease along the (possibly projected) step,
                // or any strict improvement once the certified amount falls
                // under the resolution of the objective.
                bool ok = decrease > 0 && (f_cand <= f - bt.c * decrease || f_cand < f);
                if (!ok && decrease > 0 && f_cand <= f) {
                    // Objective at its floating-point floor: accept steps
                    // that still contract the gradient without raising f.
                    g_next = grad_fn(cand);
                    have_g_next = true;
                    ok = g_next.lpNorm<Eigen::Infinity>() < res.grad_norm;
                }
                if (ok) {
                    res.x = std::move(cand);
                    f = f_cand;
                    trial = eta;
                    accepted = true;
                    break;
                }
                have_g_next = false;
                eta *= bt.shrink;
            }
            if (!accepted) {
                res.iterations = iter;
                res.loss = f;
                res.status = SolveStatus::LineSearchFailure;
                return res;
            }
            res.loss_trace.push_back(f);
            g = have_g_next ? std::move(g_next) : grad_fn(res.x);
            continue;
        }
        res.loss_trace.push_back(f);
        g = grad_fn(res.x);
    }

    res.iterations = opts.max_iters;
    res.loss = f;
    res.grad_norm = g.lpNorm<Eigen::Infinity>();
    res.status = res.grad_norm <= opts.grad_tol ? SolveStatus::Converged : SolveStatus::MaxIters;
    return res;
}

} // namespace twhm
