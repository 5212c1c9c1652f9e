#pragma once

#include <vector>

#include "assoc/weight_matrix.hpp"

namespace assoc {

/// Ground-truth marginal association probabilities from exhaustive
/// enumeration of consistent joint events.
struct ExactMarginals {
    std::vector<std::vector<double>> target_marginals;       // [i][j], j in 0..m
    std::vector<std::vector<double>> measurement_marginals;  // [j][i], i in 0..n
    double partition_constant = 0.0;                         // sum of all event weights

    int n_targets() const { return static_cast<int>(target_marginals.size()); }
    int n_measurements() const { return static_cast<int>(measurement_marginals.size()); }
};

ExactMarginals exact_marginals(const WeightMatrix& w,
                               std::uint64_t budget = kDefaultEnumerationBudget);

/// For each target i, max_j |test[i][j] - ref[i][j]| over j in {0..m_t}.
std::vector<double> max_marginal_error(const BeliefTable& test, const ExactMarginals& ref);

}  // namespace assoc
