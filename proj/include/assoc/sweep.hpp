#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "assoc/weight_matrix.hpp"

namespace assoc {

struct AlgorithmSpec {
    enum class Kind { Bp, CorrelationDecay, Oracle };
    Kind kind = Kind::Bp;
    int cd_depth = 0;

    std::string name() const;
    static AlgorithmSpec parse(const std::string& token);  // "bp", "cd:3", "oracle"
};

struct SweepConfig {
    int rows = 2;
    int cols = 3;
    std::vector<double> spacings = {3.0};
    std::vector<double> pds = {0.6};
    std::vector<double> lambdas = {0.01};
    std::vector<double> rnoises = {1.0};
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<AlgorithmSpec> algorithms = {AlgorithmSpec{}};
    double bp_delta = 1e-3;
    int bp_check_interval = 10;
    double gate_exclusion = 1e-4;
    int preinit_steps = 30;
    double q = 0.01;
    double T_step = 1.0;
    std::uint64_t oracle_budget = kDefaultEnumerationBudget;
    bool per_trial = false;
    int parallel = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct TrialOutcome {
    bool failed = false;
    std::string failure;
    double error = 0.0;       // mean over targets of max marginal difference
    long iterations = 0;      // BP only
    double time_us = 0.0;     // algorithm under test only
    double w_star = 0.0;
    double w_sup = 0.0;
};

struct AggregateRow {
    int combo_id = 0;
    int rows = 0, cols = 0;
    double spacing = 0, p_d = 0, lambda_fa = 0, r_meas = 0;
    std::string algorithm;
    std::string params;
    int trials = 0;
    double mean_err = 0, p5_err = 0, p95_err = 0;
    double mean_time_us = 0;
    double mean_iters = 0;
    long max_iters = 0;
    double mean_wstar = 0, p5_wstar = 0, p95_wstar = 0;
    int failures = 0;
};

inline constexpr const char* kResultsFormatVersion = "assoc-sweep-1";

/// Runs the full Monte Carlo sweep and writes the CSV results (config and
/// format version embedded as comment lines). Returns the aggregate rows.
/// Per-trial failures are recorded, not fatal; any_failure is set if one
/// occurred.
std::vector<AggregateRow> run_sweep(const SweepConfig& config, std::ostream& out,
                                    bool* any_failure = nullptr);

/// Parses a results file back into aggregate rows; throws ParseError with a
/// line number on malformed input.
std::vector<AggregateRow> parse_results(std::istream& in);

/// Human-readable summary table of a results file.
void summarize(std::istream& in, std::ostream& out);

/// Linear-interpolated percentile of an unsorted sample, p in [0, 1].
double percentile(std::vector<double> values, double p);

}  // namespace assoc
