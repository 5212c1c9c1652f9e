#include "assoc/correlation_decay.hpp"

#include <cmath>

namespace assoc {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::size_t CdKeyHash::operator()(const CdKey& k) const {
    std::uint64_t h = mix(k.track_set);
    h = mix(h ^ k.meas_set);
    h = mix(h ^ (static_cast<std::uint64_t>(k.node) << 32 | k.depth));
    return static_cast<std::size_t>(h);
}

namespace {

double phi_rec(const WeightMatrix& w, std::uint64_t tset, std::uint64_t mset, bool is_track,
               int node, int depth, CdMemo& memo) {
    if (depth <= 0) return 1.0;
    const CdKey key{tset, mset, (is_track ? 0x80000000u : 0u) | static_cast<std::uint32_t>(node),
                    static_cast<std::uint32_t>(depth)};
    auto it = memo.table.find(key);
    if (it != memo.table.end()) return it->second;

    double s = 1.0;
    if (is_track) {
        const std::uint64_t rest = tset & ~(1ULL << node);
        for (int j = 0; j < w.n_measurements(); ++j) {
            if (!(mset >> j & 1)) continue;
            const double psi = w(node, j);
            if (psi == 0.0) continue;
            s += psi * phi_rec(w, rest, mset, false, j, depth - 1, memo);
        }
    } else {
        const std::uint64_t rest = mset & ~(1ULL << node);
        for (int i = 0; i < w.n_targets(); ++i) {
            if (!(tset >> i & 1)) continue;
            const double psi = w(i, node);
            if (psi == 0.0) continue;
            s += psi * phi_rec(w, tset, rest, true, i, depth - 1, memo);
        }
    }
    const double v = 1.0 / s;
    if (memo.table.size() >= memo.cap)
        throw DepthBudget("correlation decay: memo table exceeded cap");
    memo.table.emplace(key, v);
    return v;
}

void check_dims(const WeightMatrix& w) {
    if (w.n_targets() > 64 || w.n_measurements() > 64)
        throw DimensionMismatch("correlation decay: bitmask sets support at most 64 per side");
}

}  // namespace

double phi(const WeightMatrix& w, const CdQuery& q, CdMemo& memo) {
    check_dims(w);
    const std::uint64_t own = q.node_is_track ? q.track_set : q.meas_set;
    if (!(own >> q.node & 1))
        throw DomainError("phi: node index not a member of its side's set");
    return phi_rec(w, q.track_set, q.meas_set, q.node_is_track, q.node, q.depth, memo);
}

BeliefTable cd_beliefs(const WeightMatrix& w, int depth, const CdOptions& opts) {
    if (depth < 1) throw DomainError("cd_beliefs: require depth >= 1");
    validate_weights(w);
    check_dims(w);
    const int n = w.n_targets();
    const int m = w.n_measurements();
    const std::uint64_t all_t = n == 64 ? ~0ULL : (1ULL << n) - 1;
    const std::uint64_t all_m = m == 64 ? ~0ULL : (1ULL << m) - 1;

    CdMemo memo{{}, opts.memo_cap};
    BeliefTable b;
    b.target_marginals.resize(n);
    b.measurement_marginals.resize(m);
    for (int i = 0; i < n; ++i) {
        auto& row = b.target_marginals[i];
        row.assign(m + 1, 0.0);
        row[0] = 1.0;
        double s = 1.0;
        for (int j = 0; j < m; ++j) {
            const double psi = w(i, j);
            if (psi == 0.0) continue;
            row[j + 1] = psi * phi_rec(w, all_t & ~(1ULL << i), all_m, false, j, depth, memo);
            s += row[j + 1];
        }
        for (double& x : row) x /= s;
    }
    for (int j = 0; j < m; ++j) {
        auto& row = b.measurement_marginals[j];
        row.assign(n + 1, 0.0);
        row[0] = 1.0;
        double s = 1.0;
        for (int i = 0; i < n; ++i) {
            const double psi = w(i, j);
            if (psi == 0.0) continue;
            row[i + 1] = psi * phi_rec(w, all_t, all_m & ~(1ULL << j), true, i, depth, memo);
            s += row[i + 1];
        }
        for (double& x : row) x /= s;
    }
    return b;
}

}  // namespace assoc
