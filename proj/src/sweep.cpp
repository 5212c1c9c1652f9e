#include "assoc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "assoc/bp.hpp"
#include "assoc/correlation_decay.hpp"
#include "assoc/exact.hpp"
#include "assoc/scenario.hpp"

namespace assoc {

std::string AlgorithmSpec::name() const {
    switch (kind) {
        case Kind::Bp: return "bp";
        case Kind::CorrelationDecay: return "cd:" + std::to_string(cd_depth);
        case Kind::Oracle: return "oracle";
    }
    return "?";
}

AlgorithmSpec AlgorithmSpec::parse(const std::string& token) {
    AlgorithmSpec spec;
    if (token == "bp") {
        spec.kind = Kind::Bp;
    } else if (token == "oracle") {
        spec.kind = Kind::Oracle;
    } else if (token.rfind("cd:", 0) == 0) {
        spec.kind = Kind::CorrelationDecay;
        spec.cd_depth = std::stoi(token.substr(3));
        if (spec.cd_depth < 1) throw DomainError("algorithm spec: cd depth must be >= 1");
    } else {
        throw DomainError("unknown algorithm spec '" + token + "'");
    }
    return spec;
}

void SweepConfig::validate() const {
    if (rows < 1 || cols < 1) throw DomainError("sweep: require rows, cols >= 1");
    if (trials < 1) throw DomainError("sweep: require trials >= 1");
    if (algorithms.empty()) throw DomainError("sweep: need at least one algorithm");
    if (spacings.empty() || pds.empty() || lambdas.empty() || rnoises.empty())
        throw DomainError("sweep: empty parameter list");
    for (double s : spacings)
        if (s < 0.0) throw DomainError("sweep: require spacing >= 0");
    for (double p : pds)
        if (!(p > 0.0 && p < 1.0)) throw DomainError("sweep: require 0 < p_d < 1");
    for (double l : lambdas)
        if (!(l > 0.0)) throw DomainError("sweep: require lambda_fa > 0");
    for (double r : rnoises)
        if (!(r > 0.0)) throw DomainError("sweep: require r_meas > 0");
    if (!(bp_delta > 0.0)) throw DomainError("sweep: require bp_delta > 0");
    if (bp_check_interval < 1) throw DomainError("sweep: require bp_check_interval >= 1");
    if (!(gate_exclusion > 0.0 && gate_exclusion < 1.0))
        throw DomainError("sweep: require 0 < gate_exclusion < 1");
    if (!(q > 0.0)) throw DomainError("sweep: require q > 0");
    if (preinit_steps < 0) throw DomainError("sweep: require preinit_steps >= 0");
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = p * (values.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

namespace {

struct Combo {
    int id;
    double spacing, p_d, lambda_fa, r_meas;
};

std::string param_string(const SweepConfig& cfg, const AlgorithmSpec& alg) {
    std::ostringstream ss;
    ss << std::setprecision(12);
    switch (alg.kind) {
        case AlgorithmSpec::Kind::Bp:
            ss << "delta=" << cfg.bp_delta << ";N=" << cfg.bp_check_interval;
            break;
        case AlgorithmSpec::Kind::CorrelationDecay:
            ss << "t=" << alg.cd_depth;
            break;
        case AlgorithmSpec::Kind::Oracle:
            ss << "budget=" << cfg.oracle_budget;
            break;
    }
    return ss.str();
}

// One trial of one combo: scenario, scan, weights, reference, every
// algorithm timed on the same weight matrix.
std::vector<TrialOutcome> run_trial(const SweepConfig& cfg, const Combo& combo, int trial) {
    std::vector<TrialOutcome> out(cfg.algorithms.size());
    const std::uint64_t trial_key =
        (static_cast<std::uint64_t>(combo.id) << 32) | static_cast<std::uint32_t>(trial);

    SensorModel sensor;
    sensor.p_d = combo.p_d;
    sensor.lambda_fa = combo.lambda_fa;
    sensor.r_meas = combo.r_meas;

    try {
        const Scenario sc = build_grid_scenario(cfg.rows, cfg.cols, combo.spacing, sensor, cfg.q,
                                                cfg.T_step, cfg.preinit_steps, cfg.seed, trial_key);
        const double gate = gate_threshold(cfg.gate_exclusion);
        const Box region = false_alarm_region(sc.priors, sensor, gate);
        const Scan scan = simulate_scan(sc.truths, sensor, region, cfg.seed, trial_key);
        const WeightMatrix w = compute_weights(sc.priors, scan, sensor, gate);
        const ContractionParams params = compute_contraction_params(w);

        const ExactMarginals ref = exact_marginals(w, cfg.oracle_budget);

        for (size_t a = 0; a < cfg.algorithms.size(); ++a) {
            auto& rec = out[a];
            rec.w_star = params.w_star;
            rec.w_sup = params.w_sup;
            try {
                const auto t0 = std::chrono::steady_clock::now();
                BeliefTable beliefs;
                switch (cfg.algorithms[a].kind) {
                    case AlgorithmSpec::Kind::Bp: {
                        SolveOptions opts;
                        opts.delta = cfg.bp_delta;
                        opts.check_interval = cfg.bp_check_interval;
                        SolveResult res = solve(w, opts);
                        beliefs = std::move(res.beliefs);
                        rec.iterations = res.report.iterations_used;
                        break;
                    }
                    case AlgorithmSpec::Kind::CorrelationDecay:
                        beliefs = cd_beliefs(w, cfg.algorithms[a].cd_depth);
                        break;
                    case AlgorithmSpec::Kind::Oracle: {
                        const ExactMarginals ex = exact_marginals(w, cfg.oracle_budget);
                        beliefs.target_marginals = ex.target_marginals;
                        beliefs.measurement_marginals = ex.measurement_marginals;
                        break;
                    }
                }
                const auto t1 = std::chrono::steady_clock::now();
                rec.time_us = std::chrono::duration<double, std::micro>(t1 - t0).count();
                const std::vector<double> errs = max_marginal_error(beliefs, ref);
                double sum = 0.0;
                for (double e : errs) sum += e;
                rec.error = errs.empty() ? 0.0 : sum / errs.size();
            } catch (const std::exception& ex) {
                rec.failed = true;
                rec.failure = ex.what();
            }
        }
    } catch (const std::exception& ex) {
        for (auto& rec : out) {
            rec.failed = true;
            rec.failure = ex.what();
        }
    }
    return out;
}

std::string config_string(const SweepConfig& cfg) {
    std::ostringstream ss;
    ss << std::setprecision(17);
    auto list = [&](const std::vector<double>& v) {
        for (size_t k = 0; k < v.size(); ++k) ss << (k ? "," : "") << v[k];
    };
    ss << "--rows " << cfg.rows << " --cols " << cfg.cols << " --spacing ";
    list(cfg.spacings);
    ss << " --pd ";
    list(cfg.pds);
    ss << " --lambda ";
    list(cfg.lambdas);
    ss << " --rnoise ";
    list(cfg.rnoises);
    ss << " --trials " << cfg.trials << " --seed " << cfg.seed << " --algs ";
    for (size_t k = 0; k < cfg.algorithms.size(); ++k)
        ss << (k ? "," : "") << cfg.algorithms[k].name();
    ss << " --bp-delta " << cfg.bp_delta << " --bp-check-interval " << cfg.bp_check_interval
       << " --gate-exclusion " << cfg.gate_exclusion << " --preinit-steps " << cfg.preinit_steps
       << " --q " << cfg.q;
    return ss.str();
}

constexpr const char* kHeader =
    "combo,rows,cols,spacing,p_d,lambda_fa,r_meas,algorithm,params,trials,mean_err,p5_err,"
    "p95_err,mean_time_us,mean_iters,max_iters,mean_wstar,p5_wstar,p95_wstar,failures";

}  // namespace

std::vector<AggregateRow> run_sweep(const SweepConfig& cfg, std::ostream& out, bool* any_failure) {
    cfg.validate();

    std::vector<Combo> combos;
    int id = 0;
    for (double spacing : cfg.spacings)
        for (double p_d : cfg.pds)
            for (double lambda : cfg.lambdas)
                for (double r : cfg.rnoises) combos.push_back({id++, spacing, p_d, lambda, r});

    // all (combo, trial) jobs run independently; results land at fixed indices
    std::vector<std::vector<TrialOutcome>> results(combos.size() * cfg.trials);
    std::atomic<size_t> next{0};
    const unsigned n_threads = cfg.parallel > 0
                                   ? static_cast<unsigned>(cfg.parallel)
                                   : std::max(1u, std::thread::hardware_concurrency());
    auto worker = [&] {
        for (size_t job = next.fetch_add(1); job < results.size(); job = next.fetch_add(1)) {
            const size_t c = job / cfg.trials;
            const int t = static_cast<int>(job % cfg.trials);
            results[job] = run_trial(cfg, combos[c], t);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    bool failure_seen = false;
    std::vector<AggregateRow> rows;
    for (const Combo& combo : combos) {
        for (size_t a = 0; a < cfg.algorithms.size(); ++a) {
            AggregateRow row;
            row.combo_id = combo.id;
            row.rows = cfg.rows;
            row.cols = cfg.cols;
            row.spacing = combo.spacing;
            row.p_d = combo.p_d;
            row.lambda_fa = combo.lambda_fa;
            row.r_meas = combo.r_meas;
            row.algorithm = cfg.algorithms[a].name();
            row.params = param_string(cfg, cfg.algorithms[a]);
            row.trials = cfg.trials;

            std::vector<double> errs, times, wstars;
            double iter_sum = 0.0;
            long iter_count = 0;
            for (int t = 0; t < cfg.trials; ++t) {
                const TrialOutcome& rec = results[combo.id * cfg.trials + t][a];
                if (rec.failed) {
                    ++row.failures;
                    failure_seen = true;
                    continue;
                }
                errs.push_back(rec.error);
                times.push_back(rec.time_us);
                wstars.push_back(rec.w_star);
                if (cfg.algorithms[a].kind == AlgorithmSpec::Kind::Bp) {
                    iter_sum += static_cast<double>(rec.iterations);
                    ++iter_count;
                    row.max_iters = std::max(row.max_iters, rec.iterations);
                }
            }
            auto mean = [](const std::vector<double>& v) {
                if (v.empty()) return 0.0;
                double s = 0.0;
                for (double x : v) s += x;
                return s / v.size();
            };
            row.mean_err = mean(errs);
            row.p5_err = percentile(errs, 0.05);
            row.p95_err = percentile(errs, 0.95);
            row.mean_time_us = mean(times);
            row.mean_iters = iter_count ? iter_sum / iter_count : 0.0;
            row.mean_wstar = mean(wstars);
            row.p5_wstar = percentile(wstars, 0.05);
            row.p95_wstar = percentile(wstars, 0.95);
            rows.push_back(row);
        }
    }

    out << "# format-version: " << kResultsFormatVersion << '\n';
    out << "# config: " << config_string(cfg) << '\n';
    out << kHeader << '\n';
    out << std::setprecision(12);
    for (const AggregateRow& row : rows) {
        out << row.combo_id << ',' << row.rows << ',' << row.cols << ',' << row.spacing << ','
            << row.p_d << ',' << row.lambda_fa << ',' << row.r_meas << ',' << row.algorithm << ','
            << row.params << ',' << row.trials << ',' << row.mean_err << ',' << row.p5_err << ','
            << row.p95_err << ',' << row.mean_time_us << ',' << row.mean_iters << ','
            << row.max_iters << ',' << row.mean_wstar << ',' << row.p5_wstar << ','
            << row.p95_wstar << ',' << row.failures << '\n';
    }
    if (cfg.per_trial) {
        out << "# per-trial: combo,trial,algorithm,status,err,iters,time_us,wstar\n";
        for (const Combo& combo : combos) {
            for (int t = 0; t < cfg.trials; ++t) {
                for (size_t a = 0; a < cfg.algorithms.size(); ++a) {
                    const TrialOutcome& rec = results[combo.id * cfg.trials + t][a];
                    out << "trial," << combo.id << ',' << t << ',' << cfg.algorithms[a].name()
                        << ',' << (rec.failed ? "failed" : "ok") << ',' << rec.error << ','
                        << rec.iterations << ',' << rec.time_us << ',' << rec.w_star << '\n';
                }
            }
        }
    }

    if (any_failure) *any_failure = failure_seen;
    return rows;
}

std::vector<AggregateRow> parse_results(std::istream& in) {
    std::vector<AggregateRow> rows;
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("trial,", 0) == 0) continue;
        if (!saw_header) {
            if (line != kHeader)
                throw ParseError("results line " + std::to_string(lineno) + ": bad column header");
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 20)
            throw ParseError("results line " + std::to_string(lineno) + ": expected 20 fields, got " +
                             std::to_string(fields.size()));
        try {
            AggregateRow r;
            r.combo_id = std::stoi(fields[0]);
            r.rows = std::stoi(fields[1]);
            r.cols = std::stoi(fields[2]);
            r.spacing = std::stod(fields[3]);
            r.p_d = std::stod(fields[4]);
            r.lambda_fa = std::stod(fields[5]);
            r.r_meas = std::stod(fields[6]);
            r.algorithm = fields[7];
            r.params = fields[8];
            r.trials = std::stoi(fields[9]);
            r.mean_err = std::stod(fields[10]);
            r.p5_err = std::stod(fields[11]);
            r.p95_err = std::stod(fields[12]);
            r.mean_time_us = std::stod(fields[13]);
            r.mean_iters = std::stod(fields[14]);
            r.max_iters = std::stol(fields[15]);
            r.mean_wstar = std::stod(fields[16]);
            r.p5_wstar = std::stod(fields[17]);
            r.p95_wstar = std::stod(fields[18]);
            r.failures = std::stoi(fields[19]);
            rows.push_back(std::move(r));
        } catch (const std::invalid_argument&) {
            throw ParseError("results line " + std::to_string(lineno) + ": malformed number");
        }
    }
    if (!saw_header) throw ParseError("results line " + std::to_string(lineno) + ": no header found");
    return rows;
}

void summarize(std::istream& in, std::ostream& out) {
    const std::vector<AggregateRow> rows = parse_results(in);
    out << std::left << std::setw(6) << "combo" << std::setw(9) << "spacing" << std::setw(6)
        << "p_d" << std::setw(8) << "lambda" << std::setw(7) << "r" << std::setw(9) << "alg"
        << std::setw(12) << "mean_err" << std::setw(12) << "p5_err" << std::setw(12) << "p95_err"
        << std::setw(13) << "mean_time_us" << std::setw(11) << "mean_iters" << std::setw(10)
        << "max_iters" << std::setw(11) << "mean_wstar" << std::setw(11) << "p5_wstar"
        << std::setw(11) << "p95_wstar" << std::setw(9) << "failures" << '\n';
    out << std::setprecision(5);
    for (const AggregateRow& r : rows) {
        out << std::left << std::setw(6) << r.combo_id << std::setw(9) << r.spacing << std::setw(6)
            << r.p_d << std::setw(8) << r.lambda_fa << std::setw(7) << r.r_meas << std::setw(9)
            << r.algorithm << std::setw(12) << r.mean_err << std::setw(12) << r.p5_err
            << std::setw(12) << r.p95_err << std::setw(13) << r.mean_time_us << std::setw(11)
            << r.mean_iters << std::setw(10) << r.max_iters << std::setw(11) << r.mean_wstar
            << std::setw(11) << r.p5_wstar << std::setw(11) << r.p95_wstar << std::setw(9)
            << r.failures << '\n';
    }
}

}  // namespace assoc
