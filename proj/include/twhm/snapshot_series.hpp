#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twhm {

/// Number of unordered node pairs on p nodes.
inline std::int64_t pair_count(int p) {
    return static_cast<std::int64_t>(p) * (p - 1) / 2;
}

/// Lexicographic rank of pair (i, j), i < j, among all unordered pairs.
inline std::int64_t pair_rank(int p, int i, int j) {
    return static_cast<std::int64_t>(i) * (2 * p - i - 1) / 2 + (j - i - 1);
}

/// One undirected simple graph on p nodes, stored as a dense pair-indexed
/// bit vector (i < j only; no self-loops by construction).
class Snapshot {
public:
    Snapshot() : p_(0) {}
    explicit Snapshot(int p) : p_(p), bits_(static_cast<std::size_t>(pair_count(p)), 0) {
        if (p < 2) throw std::invalid_argument("Snapshot: need at least two nodes");
    }

    int p() const { return p_; }
    std::int64_t pairs() const { return static_cast<std::int64_t>(bits_.size()); }

    bool edge(int i, int j) const {
        check_pair(i, j);
        if (i > j) std::swap(i, j);
        return bits_[static_cast<std::size_t>(pair_rank(p_, i, j))] != 0;
    }

    void set_edge(int i, int j, bool present) {
        check_pair(i, j);
        if (i > j) std::swap(i, j);
        bits_[static_cast<std::size_t>(pair_rank(p_, i, j))] = present ? 1 : 0;
    }

    // Unchecked rank access for pair-order loops.
    bool edge_by_rank(std::int64_t r) const { return bits_[static_cast<std::size_t>(r)] != 0; }
    void set_edge_by_rank(std::int64_t r, bool present) {
        bits_[static_cast<std::size_t>(r)] = present ? 1 : 0;
    }

    std::int64_t edge_count() const {
        std::int64_t c = 0;
        for (auto b : bits_) c += b;
        return c;
    }

    Eigen::VectorXi degrees() const {
        Eigen::VectorXi d = Eigen::VectorXi::Zero(p_);
        std::int64_t r = 0;
        for (int i = 0; i < p_; ++i)
            for (int j = i + 1; j < p_; ++j, ++r)
                if (bits_[static_cast<std::size_t>(r)]) {
                    ++d[i];
                    ++d[j];
                }
        return d;
    }

    /// Present edges in (i, j) lexicographic order.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        std::int64_t r = 0;
        for (int i = 0; i < p_; ++i)
            for (int j = i + 1; j < p_; ++j, ++r)
                if (bits_[static_cast<std::size_t>(r)]) out.emplace_back(i, j);
        return out;
    }

    friend bool operator==(const Snapshot& a, const Snapshot& b) {
        return a.p_ == b.p_ && a.bits_ == b.bits_;
    }

private:
    void check_pair(int i, int j) const {
        if (i < 0 || j < 0 || i >= p_ || j >= p_)
            throw std::out_of_range("node id out of range [0," + std::to_string(p_) + ")");
        if (i == j) throw std::invalid_argument("self-loops are not representable");
    }

    int p_;
    std::vector<std::uint8_t> bits_;
};

/// An observed path X^0, ..., X^n of the edge process: n transitions,
/// n + 1 snapshots on a fixed node set.
class SnapshotSeries {
public:
    SnapshotSeries() = default;
    explicit SnapshotSeries(std::vector<Snapshot> frames) : frames_(std::move(frames)) {
        if (frames_.empty()) throw std::invalid_argument("SnapshotSeries: no snapshots");
        for (const auto& f : frames_)
            if (f.p() != frames_.front().p())
                throw std::invalid_argument("SnapshotSeries: inconsistent node counts");
    }

    int p() const { return frames_.front().p(); }
    int n() const { return static_cast<int>(frames_.size()) - 1; }
    int size() const { return static_cast<int>(frames_.size()); }

    const Snapshot& frame(int t) const {
        if (t < 0 || t >= size())
            throw std::out_of_range("snapshot index " + std::to_string(t) + " out of range");
        return frames_[static_cast<std::size_t>(t)];
    }
    const Snapshot& last() const { return frames_.back(); }

    friend bool operator==(const SnapshotSeries& a, const SnapshotSeries& b) {
        return a.frames_ == b.frames_;
    }

private:
    std::vector<Snapshot> frames_;
};

} // namespace twhm
