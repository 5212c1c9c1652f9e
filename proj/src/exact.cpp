#include "assoc/exact.hpp"

#include <cmath>
#include <cstdlib>

namespace assoc {

namespace {

// Kahan compensated accumulator
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

ExactMarginals exact_marginals(const WeightMatrix& w, std::uint64_t budget) {
    validate_weights(w);
    const int n = w.n_targets();
    const int m = w.n_measurements();

    std::vector<std::vector<double>> tsum(n, std::vector<double>(m + 1, 0.0));
    std::vector<std::vector<double>> msum(m, std::vector<double>(n + 1, 0.0));
    KahanSum z;

    // DFS mirrors enumerate_events but accumulates weights incrementally.
    std::vector<int> a(static_cast<size_t>(n), 0);
    std::vector<char> used(static_cast<size_t>(m), 0);
    std::uint64_t count = 0;

    std::function<void(int, double)> rec = [&](int i, double weight) {
        if (i == n) {
            if (++count > budget)
                throw BudgetExceeded("event count exceeds enumeration budget of " +
                                     std::to_string(budget));
            z.add(weight);
            for (int t = 0; t < n; ++t) tsum[t][a[t]] += weight;
            for (int j = 0; j < m; ++j)
                if (!used[j]) msum[j][0] += weight;
            for (int t = 0; t < n; ++t)
                if (a[t] > 0) msum[a[t] - 1][t + 1] += weight;
            return;
        }
        a[i] = 0;
        rec(i + 1, weight);
        for (int j = 0; j < m; ++j) {
            const double psi = w(i, j);
            if (used[j] || psi == 0.0) continue;
            used[j] = 1;
            a[i] = j + 1;
            rec(i + 1, weight * psi);
            used[j] = 0;
        }
        a[i] = 0;
    };
    rec(0, 1.0);

    ExactMarginals out;
    out.partition_constant = z.sum;
    out.target_marginals.resize(n);
    out.measurement_marginals.resize(m);
    for (int i = 0; i < n; ++i) {
        out.target_marginals[i].resize(m + 1);
        for (int j = 0; j <= m; ++j) out.target_marginals[i][j] = tsum[i][j] / z.sum;
    }
    for (int j = 0; j < m; ++j) {
        out.measurement_marginals[j].resize(n + 1);
        for (int i = 0; i <= n; ++i) out.measurement_marginals[j][i] = msum[j][i] / z.sum;
    }
    return out;
}

std::vector<double> max_marginal_error(const BeliefTable& test, const ExactMarginals& ref) {
    if (test.n_targets() != ref.n_targets() || test.n_measurements() != ref.n_measurements())
        throw ShapeMismatch("max_marginal_error: shape mismatch");
    std::vector<double> errs(static_cast<size_t>(test.n_targets()), 0.0);
    for (int i = 0; i < test.n_targets(); ++i) {
        if (test.target_marginals[i].size() != ref.target_marginals[i].size())
            throw ShapeMismatch("max_marginal_error: row length mismatch");
        double e = 0.0;
        for (size_t j = 0; j < test.target_marginals[i].size(); ++j)
            e = std::max(e, std::abs(test.target_marginals[i][j] - ref.target_marginals[i][j]));
        errs[i] = e;
    }
    return errs;
}

}  // namespace assoc
