#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <string>

namespace twhm {

/// Model parameters theta = (beta0, beta1): one static and one dynamic
/// heterogeneity value per node, both on the log-odds scale.
struct ParamVector {
    Eigen::VectorXd beta0;
    Eigen::VectorXd beta1;

    ParamVector() = default;

    ParamVector(Eigen::VectorXd b0, Eigen::VectorXd b1)
        : beta0(std::move(b0)), beta1(std::move(b1)) {
        validate();
    }

    static ParamVector zero(int p) {
        return ParamVector(Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(p));
    }

    static ParamVector constant(int p, double b0, double b1) {
        return ParamVector(Eigen::VectorXd::Constant(p, b0),
                           Eigen::VectorXd::Constant(p, b1));
    }

    int p() const { return static_cast<int>(beta0.size()); }

    void validate() const {
        if (beta0.size() != beta1.size())
            throw std::invalid_argument("ParamVector: beta0 and beta1 lengths differ");
        if (beta0.size() < 2)
            throw std::invalid_argument("ParamVector: need at least two nodes");
        if (!beta0.allFinite() || !beta1.allFinite())
            throw std::invalid_argument("ParamVector: parameters must be finite");
    }

    void check_node(int i) const {
        if (i < 0 || i >= p())
            throw std::out_of_range("node id " + std::to_string(i) + " out of range [0," +
                                    std::to_string(p()) + ")");
    }

    void check_pair(int i, int j) const {
        check_node(i);
        check_node(j);
        if (i == j) throw std::invalid_argument("pair requires two distinct nodes");
    }

    // (beta0, beta1) stacked as a 2p-vector, and back.
    Eigen::VectorXd stacked() const {
        Eigen::VectorXd x(2 * p());
        x.head(p()) = beta0;
        x.tail(p()) = beta1;
        return x;
    }

    static ParamVector from_stacked(const Eigen::VectorXd& x) {
        const int p = static_cast<int>(x.size()) / 2;
        return ParamVector(x.head(p), x.tail(p));
    }
};

} // namespace twhm
