#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "assoc/errors.hpp"

namespace assoc {

/// Dense n_targets x n_measurements matrix of single-target association
/// weights psi_i(j), j >= 1. The missed-detection weight psi_i(0) = 1 is
/// implicit and never stored. Immutable after construction.
class WeightMatrix {
public:
    WeightMatrix(int n_targets, int n_measurements, std::vector<double> weights);
    WeightMatrix(int n_targets, int n_measurements, double fill = 0.0);

    static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static WeightMatrix ones(int n_targets, int n_measurements);

    int n_targets() const { return n_targets_; }
    int n_measurements() const { return n_measurements_; }

    // 0-based target/measurement indices
    double operator()(int i, int j) const { return w_[static_cast<size_t>(i) * n_measurements_ + j]; }
    double& at(int i, int j) { return w_[static_cast<size_t>(i) * n_measurements_ + j]; }

    const std::vector<double>& data() const { return w_; }

    // Text format: line 1 "n m", then n rows of m decimals.
    static WeightMatrix load(std::istream& in);
    void save(std::ostream& out) const;

private:
    int n_targets_;
    int n_measurements_;
    std::vector<double> w_;
};

/// Throws NegativeWeight / NonFiniteWeight / DimensionMismatch naming the
/// offending entry (1-based). Accepts iff all invariants hold.
void validate_weights(const WeightMatrix& w);

/// One consistent joint association event: assignment[i] in {0..m_t} with no
/// two targets sharing a positive measurement; measurement_assignment is the
/// derived b vector, b[j] = i+1 iff assignment[i] = j+1.
struct JointEvent {
    std::vector<int> assignment;               // length n_targets, values 0..m
    std::vector<int> measurement_assignment;   // length n_measurements, values 0..n
};

/// Builds the event from a target-side assignment, checking consistency.
JointEvent make_event(int n_targets, int n_measurements, std::vector<int> assignment);

/// Unnormalized joint mass prod_{i: a_i>0} psi_i(a_i).
double event_weight(const WeightMatrix& w, const JointEvent& e);

constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// Visits every consistent event exactly once (zero-weight branches pruned).
/// Throws BudgetExceeded once the event count passes the budget.
void for_each_event(const WeightMatrix& w, const std::function<void(const JointEvent&)>& fn,
                    std::uint64_t budget = kDefaultEnumerationBudget);

std::vector<JointEvent> enumerate_events(const WeightMatrix& w,
                                         std::uint64_t budget = kDefaultEnumerationBudget);

/// Count of consistent events without materializing them; same budget rule.
std::uint64_t count_events(const WeightMatrix& w, std::uint64_t budget = kDefaultEnumerationBudget);

/// Per-target marginals over {0..m_t} and per-measurement marginals over
/// {0..n_t}; every row is a probability vector.
struct BeliefTable {
    std::vector<std::vector<double>> target_marginals;
    std::vector<std::vector<double>> measurement_marginals;

    int n_targets() const { return static_cast<int>(target_marginals.size()); }
    int n_measurements() const { return static_cast<int>(measurement_marginals.size()); }
};

}  // namespace assoc
