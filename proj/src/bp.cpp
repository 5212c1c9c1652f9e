#include "assoc/bp.hpp"

#include <algorithm>
#include <cmath>

namespace assoc {

MessageState initial_messages(const WeightMatrix& w) {
    MessageState s;
    s.n_targets = w.n_targets();
    s.n_measurements = w.n_measurements();
    const size_t sz = static_cast<size_t>(s.n_targets) * s.n_measurements;
    s.mu.assign(sz, 0.0);
    s.nu.assign(sz, 1.0);
    return s;
}

std::vector<double> update_mu(const WeightMatrix& w, const std::vector<double>& nu) {
    const int n = w.n_targets();
    const int m = w.n_measurements();
    std::vector<double> mu(static_cast<size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        double s = 1.0;
        const size_t base = static_cast<size_t>(i) * m;
        for (int j = 0; j < m; ++j) s += w(i, j) * nu[base + j];
        for (int j = 0; j < m; ++j) {
            const double psi = w(i, j);
            mu[base + j] = psi == 0.0 ? 0.0 : psi / (s - psi * nu[base + j]);
        }
    }
    return mu;
}

std::vector<double> update_nu(const WeightMatrix& w, const std::vector<double>& mu) {
    const int n = w.n_targets();
    const int m = w.n_measurements();
    std::vector<double> nu(static_cast<size_t>(n) * m);
    for (int j = 0; j < m; ++j) {
        double s = 1.0;
        for (int i = 0; i < n; ++i) s += mu[static_cast<size_t>(i) * m + j];
        for (int i = 0; i < n; ++i) {
            const size_t k = static_cast<size_t>(i) * m + j;
            nu[k] = 1.0 / (s - mu[k]);
        }
    }
    return nu;
}

BeliefTable beliefs_from_messages(const WeightMatrix& w, const MessageState& msg) {
    const int n = w.n_targets();
    const int m = w.n_measurements();
    BeliefTable b;
    b.target_marginals.resize(n);
    b.measurement_marginals.resize(m);
    for (int i = 0; i < n; ++i) {
        auto& row = b.target_marginals[i];
        row.assign(m + 1, 0.0);
        double s = 1.0;
        for (int j = 0; j < m; ++j) s += w(i, j) * msg.nu_at(i, j);
        row[0] = 1.0 / s;
        for (int j = 0; j < m; ++j) row[j + 1] = w(i, j) * msg.nu_at(i, j) / s;
    }
    for (int j = 0; j < m; ++j) {
        auto& row = b.measurement_marginals[j];
        row.assign(n + 1, 0.0);
        double s = 1.0;  // mu_{0->j} = 1
        for (int i = 0; i < n; ++i) s += msg.mu_at(i, j);
        row[0] = 1.0 / s;
        for (int i = 0; i < n; ++i) row[i + 1] = msg.mu_at(i, j) / s;
    }
    return b;
}

double message_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ShapeMismatch("message_distance: shape mismatch");
    double d = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0.0 && b[k] == 0.0) continue;  // 0/0 = 1
        if (a[k] == 0.0 || b[k] == 0.0)
            throw MismatchedZeroPattern("message_distance: zero paired with non-zero at index " +
                                        std::to_string(k));
        d = std::max(d, std::abs(std::log(a[k] / b[k])));
    }
    return d;
}

namespace {

// log((1+cL)/(1+c)) / log L without the L > 1 domain guard; used internally
// where the raw-distance convention can produce L < 1.
double alpha_raw(double L, double c) {
    return std::log1p(c * (L - 1.0) / (1.0 + c)) / std::log(L);
}

}  // namespace

double contraction_factor(double L, double c) {
    if (!(L > 1.0)) throw DomainError("contraction_factor: require L > 1");
    if (!(c > 0.0)) throw DomainError("contraction_factor: require c > 0");
    return alpha_raw(L, c);
}

ContractionParams compute_contraction_params(const WeightMatrix& w) {
    const int n = w.n_targets();
    const int m = w.n_measurements();
    ContractionParams p;
    p.per_row.assign(n, 0.0);
    p.per_col.assign(m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            p.per_row[i] += w(i, j);
            p.per_col[j] += w(i, j);
        }
    for (double v : p.per_row) p.w_star = std::max(p.w_star, v);
    for (double v : p.per_col) p.w_sup = std::max(p.w_sup, v);
    return p;
}

double belief_deviation_from_message_deviation(double eps) {
    if (eps < 0.0) throw DomainError("belief deviation: require eps >= 0");
    return std::expm1(2.0 * eps);
}

long iteration_bound_closed_form(const ContractionParams& params, double eps,
                                 BoundVariant variant) {
    if (!(eps > 0.0)) throw DomainError("iteration bound: require eps > 0");
    const double target = std::expm1(2.0 * eps);
    const double w_ref = variant == BoundVariant::NuOnly ? params.w_sup : params.w_star;
    if (w_ref == 0.0) return 1;  // degenerate: messages are constant
    const double l1 = std::log1p(w_ref);
    if (l1 <= target) return 1;

    double log_alpha;
    switch (variant) {
        case BoundVariant::Combined:
            log_alpha = std::log(contraction_factor(1.0 + params.w_star, params.w_star)) +
                        std::log(contraction_factor(1.0 + params.w_star, params.w_sup));
            break;
        case BoundVariant::MuOnly:
            log_alpha = std::log(contraction_factor(1.0 + params.w_star, params.w_star));
            break;
        case BoundVariant::NuOnly:
            log_alpha = std::log(contraction_factor(1.0 + params.w_sup, params.w_sup));
            break;
        default:
            throw DomainError("iteration bound: unknown variant");
    }
    const double q = (std::log(target) - std::log(l1)) / log_alpha;
    long k = static_cast<long>(std::ceil(q));
    if (variant != BoundVariant::NuOnly) k += 1;  // bounds are on (k - 1)
    return std::max<long>(k, 1);
}

long iteration_bound_computable(const ContractionParams& params, double eps, long cap) {
    if (!(eps > 0.0)) throw DomainError("iteration bound: require eps > 0");
    const double target = std::expm1(2.0 * eps);
    if (params.w_star == 0.0) return 1;
    double l = std::log1p(params.w_star);
    long k = 1;
    while (l > target) {
        l *= contraction_factor(std::exp(l), params.w_star);
        if (++k > cap) throw IterationCap("computable iteration bound exceeded cap");
    }
    return k;
}

double stopping_guarantee(const ContractionParams& params, double message_delta,
                          AlphaConvention convention) {
    if (message_delta < 0.0) throw DomainError("stopping_guarantee: require message_delta >= 0");
    if (message_delta == 0.0) return 0.0;
    if (params.w_star == 0.0 || params.w_sup == 0.0) return 0.0;  // decoupled problem
    const double L =
        convention == AlphaConvention::ExpDistance ? std::exp(message_delta) : message_delta;
    if (L == 1.0) throw DomainError("stopping_guarantee: alpha undefined at L = 1");
    const double alpha = alpha_raw(L, params.w_star) * alpha_raw(L, params.w_sup);
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw NotContracting("stopping_guarantee: alpha outside (0,1)");
    return alpha / (1.0 - alpha) * message_delta;
}

SolveResult solve(const WeightMatrix& w, const SolveOptions& opts) {
    validate_weights(w);
    if (!(opts.delta > 0.0)) throw DomainError("solve: require delta > 0");
    if (opts.check_interval < 1) throw DomainError("solve: require check_interval >= 1");

    SolveResult res;
    res.messages = initial_messages(w);
    const ContractionParams params = compute_contraction_params(w);

    if (w.n_measurements() == 0 || params.w_star == 0.0) {
        // nothing to associate: beliefs are exact immediately
        res.beliefs = beliefs_from_messages(w, res.messages);
        res.report.converged = true;
        return res;
    }

    const double threshold = 0.5 * std::log1p(opts.delta);
    std::vector<double> nu_prev;
    auto& st = res.messages;

    while (true) {
        for (int k = 1; k <= opts.check_interval; ++k) {
            st.mu = update_mu(w, st.nu);
            if (k == opts.check_interval) nu_prev = st.nu;
            st.nu = update_nu(w, st.mu);
            ++st.iteration;
        }
        const double d = message_distance(st.nu, nu_prev);
        res.report.iterations_used = st.iteration;
        res.report.final_message_delta = d;
        if (d == 0.0) {
            res.report.guaranteed_belief_deviation = 0.0;
            res.report.converged = true;
            break;
        }
        bool converged = false;
        try {
            const double g = stopping_guarantee(params, d, opts.convention);
            res.report.guaranteed_belief_deviation = std::expm1(2.0 * g);
            converged = g < threshold;
        } catch (const NotContracting&) {
            // raw-distance convention can misbehave for d >= 1; keep iterating
        }
        if (converged) {
            res.report.converged = true;
            break;
        }
        if (st.iteration >= opts.max_iterations)
            throw IterationCap("solve: iteration cap reached before convergence");
    }

    res.beliefs = beliefs_from_messages(w, st);
    return res;
}

// ---------------------------------------------------------------- full BP

FullMessages full_message_init(const WeightMatrix& w) {
    FullMessages f;
    f.n_targets = w.n_targets();
    f.n_measurements = w.n_measurements();
    const size_t sz = static_cast<size_t>(f.n_targets) * f.n_measurements;
    f.mu.assign(sz, std::vector<double>(f.n_targets + 1, 1.0 / (f.n_targets + 1)));
    f.nu.assign(sz, std::vector<double>(f.n_measurements + 1, 1.0 / (f.n_measurements + 1)));
    return f;
}

namespace {

void normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
}

}  // namespace

FullMessages full_message_update(const WeightMatrix& w, const FullMessages& msgs) {
    const int n = w.n_targets();
    const int m = w.n_measurements();
    FullMessages out = msgs;

    // mu_{i->j}(b^j): two distinct values, b^j = i and b^j != i
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            std::vector<double> prod_nu(m + 1, 1.0);  // prod_{j' != j} nu_{j'->i}(a)
            for (int jp = 0; jp < m; ++jp) {
                if (jp == j) continue;
                const auto& nu = msgs.nu[static_cast<size_t>(i) * m + jp];
                for (int a = 0; a <= m; ++a) prod_nu[a] *= nu[a];
            }
            auto psi = [&](int a) { return a == 0 ? 1.0 : w(i, a - 1); };
            double match = psi(j + 1) * prod_nu[j + 1];
            double other = 0.0;
            for (int a = 0; a <= m; ++a)
                if (a != j + 1) other += psi(a) * prod_nu[a];
            auto& mu = out.mu[static_cast<size_t>(i) * m + j];
            for (int b = 0; b <= n; ++b) mu[b] = b == i + 1 ? match : other;
            normalize(mu);
        }
    }
    // nu_{j->i}(a^i) from the freshly updated mu (two half-iterations)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            std::vector<double> prod_mu(n + 1, 1.0);  // prod_{i' != i} mu_{i'->j}(b)
            for (int ip = 0; ip < n; ++ip) {
                if (ip == i) continue;
                const auto& mu = out.mu[static_cast<size_t>(ip) * m + j];
                for (int b = 0; b <= n; ++b) prod_mu[b] *= mu[b];
            }
            double match = prod_mu[i + 1];
            double other = 0.0;
            for (int b = 0; b <= n; ++b)
                if (b != i + 1) other += prod_mu[b];
            auto& nu = out.nu[static_cast<size_t>(i) * m + j];
            for (int a = 0; a <= m; ++a) nu[a] = a == j + 1 ? match : other;
            normalize(nu);
        }
    }
    return out;
}

BeliefTable full_beliefs(const WeightMatrix& w, const FullMessages& msgs) {
    const int n = w.n_targets();
    const int m = w.n_measurements();
    BeliefTable b;
    b.target_marginals.resize(n);
    b.measurement_marginals.resize(m);
    for (int i = 0; i < n; ++i) {
        auto& row = b.target_marginals[i];
        row.assign(m + 1, 0.0);
        for (int a = 0; a <= m; ++a) {
            double v = a == 0 ? 1.0 : w(i, a - 1);
            for (int j = 0; j < m; ++j) v *= msgs.nu[static_cast<size_t>(i) * m + j][a];
            row[a] = v;
        }
        normalize(row);
    }
    for (int j = 0; j < m; ++j) {
        auto& row = b.measurement_marginals[j];
        row.assign(n + 1, 0.0);
        for (int bb = 0; bb <= n; ++bb) {
            double v = 1.0;
            for (int i = 0; i < n; ++i) v *= msgs.mu[static_cast<size_t>(i) * m + j][bb];
            row[bb] = v;
        }
        normalize(row);
    }
    return b;
}

}  // namespace assoc
