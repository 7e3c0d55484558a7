#pragma once

#include <Eigen/Core>
#include <limits>
#include <stdexcept>
#include <vector>

#include "twhm/rng.hpp"

namespace twhm {

struct KMeansResult {
    std::vector<int> labels;
    Eigen::MatrixXd centers; // k x dims
    double sse = 0.0;
};

namespace detail {

inline double sq_dist(const Eigen::MatrixXd& pts, int row, const Eigen::MatrixXd& centers,
                      int c) {
    return (pts.row(row) - centers.row(c)).squaredNorm();
}

inline KMeansResult kmeans_single(const Eigen::MatrixXd& pts, int k, SeededRng& rng,
                                  int max_iters) {
    const int n = static_cast<int>(pts.rows());
    const int dims = static_cast<int>(pts.cols());
    Eigen::MatrixXd centers(k, dims);

    // k-means++ seeding.
    centers.row(0) = pts.row(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n))));
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (int cc = 0; cc < c; ++cc) best = std::min(best, sq_dist(pts, i, centers, cc));
            d2[static_cast<std::size_t>(i)] = best;
            total += best;
        }
        int pick = -1;
        if (total > 0.0) {
            double u = rng.uniform() * total;
            for (int i = 0; i < n; ++i) {
                u -= d2[static_cast<std::size_t>(i)];
                if (u <= 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) pick = n - 1;
        } else {
            pick = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = pts.row(pick);
    }

    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(pts, i, centers, 0);
            for (int c = 1; c < k; ++c) {
                const double d = sq_dist(pts, i, centers, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[static_cast<std::size_t>(i)] != best) {
                labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        centers.setZero();
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            centers.row(labels[static_cast<std::size_t>(i)]) += pts.row(i);
            ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centers.row(c) /= counts[static_cast<std::size_t>(c)];
            } else {
                // Empty cluster: restart it at the point farthest from its center.
                int far = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = sq_dist(pts, i, centers, labels[static_cast<std::size_t>(i)]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centers.row(c) = pts.row(far);
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
    }

    KMeansResult res;
    res.labels = std::move(labels);
    res.centers = std::move(centers);
    for (int i = 0; i < n; ++i)
        res.sse += sq_dist(pts, i, res.centers, res.labels[static_cast<std::size_t>(i)]);
    return res;
}

} // namespace detail

/// Lloyd iterations with k-means++ seeding; the best of `restarts` runs by
/// within-cluster squared error is returned. Deterministic for a given seed.
inline KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                           int restarts = 20, int max_iters = 100) {
    const int n = static_cast<int>(points.rows());
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of points");
    KMeansResult best;
    best.sse = std::numeric_limits<double>::max();
    for (int r = 0; r < restarts; ++r) {
        SeededRng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        KMeansResult cur = detail::kmeans_single(points, k, rng, max_iters);
        if (cur.sse < best.sse) best = std::move(cur);
    }
    return best;
}

/// Best label agreement over cluster relabelings, found by a maximum
/// assignment (Hungarian algorithm) on the confusion matrix.
inline double clustering_accuracy(const std::vector<int>& labels, const std::vector<int>& truth) {
    if (labels.size() != truth.size())
        throw std::invalid_argument("clustering_accuracy: length mismatch");
    if (labels.empty()) throw std::invalid_argument("clustering_accuracy: empty labeling");
    int k = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || truth[i] < 0)
            throw std::invalid_argument("clustering_accuracy: negative label");
        k = std::max({k, labels[i] + 1, truth[i] + 1});
    }
    Eigen::MatrixXd agree = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < labels.size(); ++i)
        agree(labels[i], truth[i]) += 1.0;

    // Hungarian algorithm (potentials form) on the negated agreement matrix.
    const double inf = std::numeric_limits<double>::max();
    std::vector<double> u(static_cast<std::size_t>(k) + 1, 0.0),
        v(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(k) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(k) + 1, 0);
    for (int i = 1; i <= k; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(k) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(k) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= k; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = -agree(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= k; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    double matched = 0.0;
    for (int j = 1; j <= k; ++j)
        if (match[static_cast<std::size_t>(j)] > 0)
            matched += agree(match[static_cast<std::size_t>(j)] - 1, j - 1);
    return matched / static_cast<double>(labels.size());
}

} // namespace twhm
