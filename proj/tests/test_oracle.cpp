#include <doctest.h>

#include <cmath>

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

}  // namespace

TEST_CASE("exact marginals: 1x1 psi=2") {
    const ExactMarginals ex = exact_marginals(WeightMatrix::from_rows({{2.0}}));
    CHECK(ex.partition_constant == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(ex.target_marginals[0][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ex.target_marginals[0][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("exact marginals: 2x2 all-ones") {
    const ExactMarginals ex = exact_marginals(WeightMatrix::ones(2, 2));
    CHECK(ex.partition_constant == doctest::Approx(7.0).epsilon(1e-15));
    CHECK(ex.target_marginals[0][0] == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
    CHECK(ex.target_marginals[0][1] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(ex.target_marginals[0][2] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("exact marginals: 2x1 all-ones") {
    const ExactMarginals ex = exact_marginals(WeightMatrix::ones(2, 1));
    CHECK(ex.target_marginals[0][1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("rows sum to one and stay in [0,1]") {
    RandomStream rng(11, 0, DrawPurpose::Generic);
    for (int rep = 0; rep < 20; ++rep) {
        const WeightMatrix w = random_matrix(3, 4, rng);
        const ExactMarginals ex = exact_marginals(w);
        for (const auto& row : ex.target_marginals) {
            double s = 0.0;
            for (double p : row) {
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
                s += p;
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
        for (const auto& row : ex.measurement_marginals) {
            double s = 0.0;
            for (double p : row) s += p;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(ex.partition_constant >= 1.0);  // all-missed event contributes 1
    }
}

TEST_CASE("cross-side consistency: sum_i p(a_i = j) = p(b_j != 0)") {
    RandomStream rng(12, 0, DrawPurpose::Generic);
    for (int rep = 0; rep < 20; ++rep) {
        const WeightMatrix w = random_matrix(3, 3, rng);
        const ExactMarginals ex = exact_marginals(w);
        for (int j = 0; j < 3; ++j) {
            double from_targets = 0.0;
            for (int i = 0; i < 3; ++i) from_targets += ex.target_marginals[i][j + 1];
            CHECK(from_targets ==
                  doctest::Approx(1.0 - ex.measurement_marginals[j][0]).epsilon(1e-12));
        }
    }
}

TEST_CASE("permutation equivariance over target rows") {
    RandomStream rng(13, 0, DrawPurpose::Generic);
    const WeightMatrix w = random_matrix(3, 3, rng);
    WeightMatrix swapped(3, 3);
    const int perm[3] = {2, 0, 1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) swapped.at(i, j) = w(perm[i], j);
    const ExactMarginals a = exact_marginals(w);
    const ExactMarginals b = exact_marginals(swapped);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= 3; ++j)
            CHECK(b.target_marginals[i][j] ==
                  doctest::Approx(a.target_marginals[perm[i]][j]).epsilon(1e-12));
}

TEST_CASE("row scaling changes marginals as the joint predicts") {
    RandomStream rng(14, 0, DrawPurpose::Generic);
    const WeightMatrix w = random_matrix(3, 3, rng);
    const double s = 2.5;
    WeightMatrix scaled = w;
    for (int j = 0; j < 3; ++j) scaled.at(1, j) = s * w(1, j);

    // re-derive from scratch: event weights scale by s^{[a_1 > 0]}
    double z = 0.0, z_scaled = 0.0, num = 0.0, num_scaled = 0.0;
    for_each_event(w, [&](const JointEvent& e) {
        const double ew = event_weight(w, e);
        const double f = e.assignment[1] > 0 ? s : 1.0;
        z += ew;
        z_scaled += ew * f;
        if (e.assignment[0] == 1) {
            num += ew;
            num_scaled += ew * f;
        }
    });
    const ExactMarginals ex = exact_marginals(scaled);
    CHECK(ex.target_marginals[0][1] == doctest::Approx(num_scaled / z_scaled).epsilon(1e-12));
    CHECK(z > 0.0);
}

TEST_CASE("max_marginal_error") {
    const ExactMarginals ref = exact_marginals(WeightMatrix::ones(2, 2));
    BeliefTable same;
    same.target_marginals = ref.target_marginals;
    same.measurement_marginals = ref.measurement_marginals;
    for (double e : max_marginal_error(same, ref)) CHECK(e == 0.0);

    // swapping two entries of mass p, q gives error |p - q|
    BeliefTable swapped = same;
    std::swap(swapped.target_marginals[0][0], swapped.target_marginals[0][1]);
    const double expect = std::abs(ref.target_marginals[0][0] - ref.target_marginals[0][1]);
    CHECK(max_marginal_error(swapped, ref)[0] == doctest::Approx(expect).epsilon(1e-14));

    BeliefTable wrong;
    wrong.target_marginals = {{1.0}};
    wrong.measurement_marginals = {};
    CHECK_THROWS_AS(max_marginal_error(wrong, ref), ShapeMismatch);
}

TEST_CASE("oracle propagates the enumeration budget") {
    CHECK_THROWS_AS(exact_marginals(WeightMatrix::ones(5, 5), 100), BudgetExceeded);
}
