#pragma once

#include <cstdint>
#include <unordered_map>

#include "assoc/weight_matrix.hpp"

namespace assoc {

/// Self-avoiding-walk recursion over shrinking track/measurement subsets.
/// Subsets are bitmasks, limiting problems to 64 tracks and 64 measurements.
struct CdQuery {
    std::uint64_t track_set = 0;
    std::uint64_t meas_set = 0;
    bool node_is_track = false;
    int node = 0;  // 0-based index on its side
    int depth = 0;
};

struct CdOptions {
    std::size_t memo_cap = 10'000'000;
};

struct CdKey {
    std::uint64_t track_set, meas_set;
    std::uint32_t node;  // kind bit | index
    std::uint32_t depth;
    bool operator==(const CdKey&) const = default;
};

struct CdKeyHash {
    std::size_t operator()(const CdKey& k) const;
};

/// Memoization table for one solve, keyed on (track set, meas set, node,
/// depth). Throws DepthBudget when the entry count exceeds the cap.
struct CdMemo {
    std::unordered_map<CdKey, double, CdKeyHash> table;
    std::size_t cap = 10'000'000;
};

/// Phi(T, M, node, t) in (0, 1]; base case Phi(., ., ., 0) = 1, matching the
/// BP initialization nu == 1. Track node i with opposing set M:
/// 1 / (1 + sum_{j in M} psi_i(j) Phi(T - {i}, M, j, t - 1)), and
/// symmetrically for measurement nodes.
double phi(const WeightMatrix& w, const CdQuery& q, CdMemo& memo);

/// Beliefs from the recursion at the given depth: p(a_i = j) proportional to
/// psi_i(j) Phi(T \ {i}, M, j, depth), p(a_i = 0) proportional to 1;
/// measurement side symmetric. Exact when depth >= n_t + m_t.
BeliefTable cd_beliefs(const WeightMatrix& w, int depth, const CdOptions& opts = {});

}  // namespace assoc
