#include "assoc/weight_matrix.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace assoc {

WeightMatrix::WeightMatrix(int n_targets, int n_measurements, std::vector<double> weights)
    : n_targets_(n_targets), n_measurements_(n_measurements), w_(std::move(weights)) {
    if (n_targets_ < 1 || n_measurements_ < 0)
        throw DimensionMismatch("WeightMatrix: need n_targets >= 1 and n_measurements >= 0");
    if (w_.size() != static_cast<size_t>(n_targets_) * n_measurements_)
        throw DimensionMismatch("WeightMatrix: weight count does not match dimensions");
}

WeightMatrix::WeightMatrix(int n_targets, int n_measurements, double fill)
    : WeightMatrix(n_targets, n_measurements,
                   std::vector<double>(static_cast<size_t>(n_targets) * n_measurements, fill)) {}

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DimensionMismatch("WeightMatrix: no rows");
    const int n = static_cast<int>(rows.size());
    const int m = static_cast<int>(rows[0].size());
    std::vector<double> w;
    w.reserve(static_cast<size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != m)
            throw DimensionMismatch("WeightMatrix: ragged rows");
        w.insert(w.end(), rows[i].begin(), rows[i].end());
    }
    return WeightMatrix(n, m, std::move(w));
}

WeightMatrix WeightMatrix::ones(int n_targets, int n_measurements) {
    return WeightMatrix(n_targets, n_measurements, 1.0);
}

WeightMatrix WeightMatrix::load(std::istream& in) {
    int n = 0, m = -1;
    if (!(in >> n >> m)) throw ParseError("weight matrix: missing header 'n m'");
    if (n < 1 || m < 0) throw ParseError("weight matrix: invalid dimensions in header");
    std::vector<double> w(static_cast<size_t>(n) * m);
    for (auto& x : w)
        if (!(in >> x)) throw ParseError("weight matrix: truncated data");
    return WeightMatrix(n, m, std::move(w));
}

void WeightMatrix::save(std::ostream& out) const {
    out << n_targets_ << ' ' << n_measurements_ << '\n';
    for (int i = 0; i < n_targets_; ++i) {
        for (int j = 0; j < n_measurements_; ++j) {
            if (j) out << ' ';
            std::ostringstream ss;
            ss.precision(17);
            ss << (*this)(i, j);
            out << ss.str();
        }
        out << '\n';
    }
}

void validate_weights(const WeightMatrix& w) {
    for (int i = 0; i < w.n_targets(); ++i) {
        for (int j = 0; j < w.n_measurements(); ++j) {
            const double v = w(i, j);
            if (!std::isfinite(v))
                throw NonFiniteWeight("non-finite weight at (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ")");
            if (v < 0.0)
                throw NegativeWeight("negative weight at (" + std::to_string(i + 1) + "," +
                                     std::to_string(j + 1) + ")");
        }
    }
}

JointEvent make_event(int n_targets, int n_measurements, std::vector<int> assignment) {
    if (static_cast<int>(assignment.size()) != n_targets)
        throw DimensionMismatch("make_event: assignment length != n_targets");
    JointEvent e;
    e.measurement_assignment.assign(n_measurements, 0);
    for (int i = 0; i < n_targets; ++i) {
        const int j = assignment[i];
        if (j < 0 || j > n_measurements)
            throw DimensionMismatch("make_event: assignment value out of range");
        if (j > 0) {
            if (e.measurement_assignment[j - 1] != 0)
                throw InconsistentEvent("measurement " + std::to_string(j) +
                                        " claimed by two targets");
            e.measurement_assignment[j - 1] = i + 1;
        }
    }
    e.assignment = std::move(assignment);
    return e;
}

double event_weight(const WeightMatrix& w, const JointEvent& e) {
    if (static_cast<int>(e.assignment.size()) != w.n_targets())
        throw DimensionMismatch("event_weight: event/matrix shape mismatch");
    std::vector<char> used(static_cast<size_t>(w.n_measurements()), 0);
    double prod = 1.0;
    for (int i = 0; i < w.n_targets(); ++i) {
        const int j = e.assignment[i];
        if (j > 0) {
            if (used[j - 1]) throw InconsistentEvent("measurement claimed twice");
            used[j - 1] = 1;
            prod *= w(i, j - 1);
        }
    }
    return prod;
}

namespace {

// Depth-first over targets with a used-measurement mask; zero weights prune.
template <typename Visit>
void enumerate_impl(const WeightMatrix& w, std::uint64_t budget, Visit&& visit) {
    const int n = w.n_targets();
    const int m = w.n_measurements();
    std::vector<int> a(static_cast<size_t>(n), 0);
    std::vector<char> used(static_cast<size_t>(m), 0);
    std::uint64_t count = 0;

    // recursion over targets; each complete assignment is one event
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            if (++count > budget)
                throw BudgetExceeded("event count exceeds enumeration budget of " +
                                     std::to_string(budget));
            visit(a);
            return;
        }
        a[i] = 0;
        rec(i + 1);
        for (int j = 0; j < m; ++j) {
            if (used[j] || w(i, j) == 0.0) continue;
            used[j] = 1;
            a[i] = j + 1;
            rec(i + 1);
            used[j] = 0;
        }
        a[i] = 0;
    };
    rec(0);
}

}  // namespace

void for_each_event(const WeightMatrix& w, const std::function<void(const JointEvent&)>& fn,
                    std::uint64_t budget) {
    enumerate_impl(w, budget, [&](const std::vector<int>& a) {
        fn(make_event(w.n_targets(), w.n_measurements(), a));
    });
}

std::vector<JointEvent> enumerate_events(const WeightMatrix& w, std::uint64_t budget) {
    std::vector<JointEvent> out;
    for_each_event(w, [&](const JointEvent& e) { out.push_back(e); }, budget);
    return out;
}

std::uint64_t count_events(const WeightMatrix& w, std::uint64_t budget) {
    std::uint64_t count = 0;
    enumerate_impl(w, budget, [&](const std::vector<int>&) { ++count; });
    return count;
}

}  // namespace assoc
