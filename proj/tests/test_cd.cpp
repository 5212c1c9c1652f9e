#include <doctest.h>

#include <cmath>

#include "assoc/correlation_decay.hpp"
#include "assoc/exact.hpp"
#include "assoc/rng.hpp"

using namespace assoc;

namespace {

WeightMatrix random_matrix(int n, int m, RandomStream& rng, double scale = 2.0) {
    WeightMatrix w(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) w.at(i, j) = scale * rng.uniform();
    return w;
}

double max_target_diff(const BeliefTable& a, const std::vector<std::vector<double>>& b) {
    double d = 0.0;
    for (size_t i = 0; i < b.size(); ++i)
        for (size_t j = 0; j < b[i].size(); ++j)
            d = std::max(d, std::abs(a.target_marginals[i][j] - b[i][j]));
    return d;
}

}  // namespace

TEST_CASE("phi base cases") {
    const WeightMatrix w = WeightMatrix::ones(2, 2);
    CdMemo memo;

    CHECK(phi(w, {.track_set = 0b11, .meas_set = 0b11, .node_is_track = true, .node = 0, .depth = 0},
              memo) == 1.0);
    CHECK(phi(w, {.track_set = 0b01, .meas_set = 0b00, .node_is_track = true, .node = 0, .depth = 5},
              memo) == 1.0);  // empty opposing set
}

TEST_CASE("phi hand-unrolled on 2x2 all-ones") {
    const WeightMatrix w = WeightMatrix::ones(2, 2);
    CdMemo memo;
    // inner subproblem: track 2 against the single remaining measurement
    CHECK(phi(w, {.track_set = 0b10, .meas_set = 0b10, .node_is_track = true, .node = 1, .depth = 1},
              memo) == doctest::Approx(0.5).epsilon(1e-15));
    for (int t : {2, 3, 5})
        CHECK(phi(w,
                  {.track_set = 0b10, .meas_set = 0b11, .node_is_track = false, .node = 0,
                   .depth = t},
                  memo) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("cd_beliefs small exact cases") {
    const BeliefTable tree = cd_beliefs(WeightMatrix::from_rows({{2.0}}), 1);
    CHECK(tree.target_marginals[0][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    const BeliefTable b = cd_beliefs(WeightMatrix::ones(2, 2), 3);
    CHECK(b.target_marginals[0][1] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(b.target_marginals[0][0] == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("cd_beliefs rows are distributions with the psi zero pattern") {
    RandomStream rng(41, 0, DrawPurpose::Generic);
    WeightMatrix w = random_matrix(3, 3, rng);
    w.at(0, 1) = 0.0;
    const BeliefTable b = cd_beliefs(w, 3);
    for (const auto& row : b.target_marginals) {
        double s = 0.0;
        for (double p : row) {
            CHECK(p >= 0.0);
            s += p;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(b.target_marginals[0][2] == 0.0);
}

TEST_CASE("full-depth recursion matches the enumeration oracle") {
    RandomStream rng(42, 0, DrawPurpose::Generic);
    for (int n = 1; n <= 4; ++n)
        for (int m = 1; m + n <= 6; ++m) {
            const WeightMatrix w = random_matrix(n, m, rng);
            const ExactMarginals ex = exact_marginals(w);
            const BeliefTable b = cd_beliefs(w, n + m);
            CHECK(max_target_diff(b, ex.target_marginals) < 1e-9);
            for (int j = 0; j < m; ++j)
                for (int i = 0; i <= n; ++i)
                    CHECK(b.measurement_marginals[j][i] ==
                          doctest::Approx(ex.measurement_marginals[j][i]).epsilon(1e-9));
        }
}

TEST_CASE("depth refinement never moves away from the full-depth answer") {
    RandomStream rng(43, 0, DrawPurpose::Generic);
    for (int rep = 0; rep < 10; ++rep) {
        const WeightMatrix w = random_matrix(3, 3, rng);
        const BeliefTable full = cd_beliefs(w, 6);
        double prev = 1e300;
        for (int t = 1; t <= 6; ++t) {
            const double d = max_target_diff(cd_beliefs(w, t), full.target_marginals);
            CHECK(d <= prev + 1e-12);
            prev = d;
        }
        CHECK(prev < 1e-12);
    }
}

TEST_CASE("without self-avoidance the recursion lands on the BP fixed point") {
    // 2x2 all-ones: dropping the set-shrinking leaves x <- 1/(1+x)
    double x = 1.0;
    for (int t = 0; t < 200; ++t) x = 1.0 / (1.0 + x);
    CHECK(x == doctest::Approx(0.618034).epsilon(1e-6));
    // while the self-avoiding version stays at the exact value 2/3 instead
    CdMemo memo;
    CHECK(phi(WeightMatrix::ones(2, 2),
              {.track_set = 0b10, .meas_set = 0b11, .node_is_track = false, .node = 0, .depth = 40},
              memo) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("memo cap raises DepthBudget") {
    RandomStream rng(44, 0, DrawPurpose::Generic);
    const WeightMatrix w = random_matrix(5, 5, rng);
    CHECK_THROWS_AS(cd_beliefs(w, 10, {.memo_cap = 3}), DepthBudget);
}
