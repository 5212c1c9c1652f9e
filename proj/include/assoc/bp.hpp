#pragma once

#include <vector>

#include "assoc/weight_matrix.hpp"

namespace assoc {

/// n_t x m_t message arrays, row-major. mu flows target->measurement,
/// nu flows measurement->target.
struct MessageState {
    int n_targets = 0;
    int n_measurements = 0;
    std::vector<double> mu;  // 0 <= mu_ij <= psi_i(j), zero iff psi_i(j) == 0
    std::vector<double> nu;  // in (0, 1]
    long iteration = 0;

    double mu_at(int i, int j) const { return mu[static_cast<size_t>(i) * n_measurements + j]; }
    double nu_at(int i, int j) const { return nu[static_cast<size_t>(i) * n_measurements + j]; }
};

MessageState initial_messages(const WeightMatrix& w);  // nu == 1 everywhere

/// mu_ij = psi_i(j) / (1 + sum_{j' != j} psi_i(j') nu_{j'->i}), computed
/// row-wise via s_i = 1 + sum_j psi_i(j) nu_{j->i}.
std::vector<double> update_mu(const WeightMatrix& w, const std::vector<double>& nu);

/// nu_ji = 1 / (1 + sum_{i' != i} mu_{i'->j}), computed column-wise.
std::vector<double> update_nu(const WeightMatrix& w, const std::vector<double>& mu);

BeliefTable beliefs_from_messages(const WeightMatrix& w, const MessageState& m);

/// max |log(a_ij / b_ij)| with the 0/0 = 1 convention; throws
/// MismatchedZeroPattern if exactly one of a pair is zero.
double message_distance(const std::vector<double>& a, const std::vector<double>& b);

/// alpha(L, c) = log((1 + cL) / (1 + c)) / log(L), strictly < 1 and
/// monotonically increasing in L. Requires L > 1, c > 0.
double contraction_factor(double L, double c);

/// Row/column sums of the weight matrix and their maxima; W_* governs the
/// contraction of the nu->mu update, W^* the mu->nu update.
struct ContractionParams {
    double w_star = 0.0;          // max row sum
    double w_sup = 0.0;           // max column sum
    std::vector<double> per_row;  // W_i
    std::vector<double> per_col;  // W^j
};

ContractionParams compute_contraction_params(const WeightMatrix& w);

enum class BoundVariant { Combined, MuOnly, NuOnly };

/// Smallest iteration count guaranteeing belief deviation <= eps, closed
/// form. Degenerate problems (relevant W == 0) give 1.
long iteration_bound_closed_form(const ContractionParams& params, double eps,
                                 BoundVariant variant = BoundVariant::MuOnly);

/// Tighter bound iterating l_k = alpha(exp(l_{k-1}), W_*) l_{k-1} from
/// l_1 = log(1 + W_*) until l_k <= exp(2 eps) - 1.
long iteration_bound_computable(const ContractionParams& params, double eps,
                                long cap = 100'000'000);

/// delta(eps) = exp(2 eps) - 1: message deviation -> belief deviation.
double belief_deviation_from_message_deviation(double eps);

/// Which first argument feeds alpha at check time: the exponentiated
/// distance exp(d) (consistent with how the contraction bound is derived),
/// or the raw distance d.
enum class AlphaConvention { ExpDistance, RawDistance };

/// Bound on the remaining message distance to the fixed point given an
/// observed iterate-to-iterate distance: [alpha/(1-alpha)] * message_delta
/// with alpha the product of the two half-iteration factors.
double stopping_guarantee(const ContractionParams& params, double message_delta,
                          AlphaConvention convention = AlphaConvention::ExpDistance);

struct ConvergenceReport {
    long iterations_used = 0;
    double final_message_delta = 0.0;
    double guaranteed_belief_deviation = 0.0;
    bool converged = false;
};

struct SolveOptions {
    double delta = 1e-3;        // belief-deviation tolerance
    int check_interval = 10;    // iterations between convergence checks
    long max_iterations = 1'000'000;
    AlphaConvention convention = AlphaConvention::ExpDistance;
    bool track_peak_messages = false;
};

struct SolveResult {
    BeliefTable beliefs;
    ConvergenceReport report;
    MessageState messages;
};

/// Runs blocks of check_interval iterations from nu == 1, terminating when
/// the stopping guarantee drops below (1/2) log(1 + delta). Throws
/// IterationCap if the hard cap is hit first.
SolveResult solve(const WeightMatrix& w, const SolveOptions& opts = {});

// ---- full-alphabet sum-product, kept as a cross-check for the scalar form

/// Messages over the full variable alphabets: mu[i*m+j] is a distribution
/// over b^j in {0..n_t}, nu[i*m+j] over a^i in {0..m_t}.
struct FullMessages {
    int n_targets = 0;
    int n_measurements = 0;
    std::vector<std::vector<double>> mu;
    std::vector<std::vector<double>> nu;
};

FullMessages full_message_init(const WeightMatrix& w);
FullMessages full_message_update(const WeightMatrix& w, const FullMessages& msgs);
BeliefTable full_beliefs(const WeightMatrix& w, const FullMessages& msgs);

}  // namespace assoc
