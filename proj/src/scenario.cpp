#include "assoc/scenario.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>

namespace assoc {

void SensorModel::validate() const {
    if (!(p_d > 0.0 && p_d < 1.0)) throw DomainError("sensor: require 0 < p_d < 1");
    if (!(lambda_fa > 0.0)) throw DomainError("sensor: require lambda_fa > 0");
    if (!(r_meas > 0.0)) throw DomainError("sensor: require r_meas > 0");
    if (!(existence > 0.0 && existence <= 1.0)) throw DomainError("sensor: require 0 < existence <= 1");
    if (!(p_d * existence < 1.0)) throw DomainError("sensor: require p_d * existence < 1");
}

Eigen::Matrix4d cv_transition(double T_step) {
    Eigen::Matrix4d F = Eigen::Matrix4d::Zero();
    Eigen::Matrix2d blk;
    blk << 1.0, T_step, 0.0, 1.0;
    F.block<2, 2>(0, 0) = blk;
    F.block<2, 2>(2, 2) = blk;
    return F;
}

Eigen::Matrix4d cv_process_noise(double q, double T_step) {
    Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
    const double T = T_step;
    Eigen::Matrix2d blk;
    blk << T * T * T / 3.0, T * T / 2.0, T * T / 2.0, T;
    Q.block<2, 2>(0, 0) = q * blk;
    Q.block<2, 2>(2, 2) = q * blk;
    return Q;
}

Eigen::Matrix<double, 2, 4> position_projection() {
    Eigen::Matrix<double, 2, 4> H = Eigen::Matrix<double, 2, 4>::Zero();
    H(0, 0) = 1.0;
    H(1, 2) = 1.0;
    return H;
}

Eigen::Matrix4d preinit_covariance(double q, double T_step, double r_meas, double p_d, int steps,
                                   RandomStream& rng) {
    if (!(q > 0.0 && T_step > 0.0 && r_meas > 0.0)) throw DomainError("preinit: require q, T, r > 0");
    if (steps < 0) throw DomainError("preinit: require steps >= 0");
    const Eigen::Matrix4d F = cv_transition(T_step);
    const Eigen::Matrix4d Q = cv_process_noise(q, T_step);
    const Eigen::Matrix<double, 2, 4> H = position_projection();
    const Eigen::Matrix2d R = r_meas * Eigen::Matrix2d::Identity();

    Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
    for (int k = 0; k < steps; ++k) {
        P = F * P * F.transpose() + Q;
        if (rng.bernoulli(p_d)) {
            const Eigen::Matrix2d S = H * P * H.transpose() + R;
            const Eigen::Matrix<double, 4, 2> K = P * H.transpose() * S.inverse();
            P = P - K * H * P;
        }
        P = 0.5 * (P + P.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(P);
        if (es.eigenvalues().minCoeff() < -1e-9)
            throw NumericalError("preinit: covariance lost positive semi-definiteness");
    }
    return P;
}

Scenario build_grid_scenario(int rows, int cols, double spacing, const SensorModel& sensor,
                             double q, double T_step, int steps, std::uint64_t seed,
                             std::uint64_t trial) {
    if (rows < 1 || cols < 1) throw DomainError("grid: require rows, cols >= 1");
    if (spacing < 0.0) throw DomainError("grid: require spacing >= 0");
    sensor.validate();

    Scenario sc;
    RandomStream detect(seed, trial, DrawPurpose::PreinitDetect);
    RandomStream perturb(seed, trial, DrawPurpose::PriorPerturb);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const Eigen::Vector2d truth(r * spacing, c * spacing);
            TrackPrior prior;
            prior.covariance =
                preinit_covariance(q, T_step, sensor.r_meas, sensor.p_d, steps, detect);
            Eigen::Vector4d truth_state(truth.x(), 0.0, truth.y(), 0.0);
            Eigen::Vector4d z;
            for (int k = 0; k < 4; ++k) z(k) = perturb.normal();
            const Eigen::LLT<Eigen::Matrix4d> llt(
                prior.covariance + 1e-12 * Eigen::Matrix4d::Identity());
            prior.mean = truth_state + llt.matrixL() * z;
            sc.truths.push_back(truth);
            sc.priors.push_back(prior);
        }
    }
    return sc;
}

Scan simulate_scan(const std::vector<Eigen::Vector2d>& truths, const SensorModel& sensor,
                   const Box& region, std::uint64_t seed, std::uint64_t trial) {
    sensor.validate();
    Scan scan;
    scan.truth_assignment.assign(truths.size(), 0);
    RandomStream detect(seed, trial, DrawPurpose::DetectionDraw);
    RandomStream noise(seed, trial, DrawPurpose::MeasurementNoise);
    RandomStream fa_count(seed, trial, DrawPurpose::FalseAlarmCount);
    RandomStream fa_pos(seed, trial, DrawPurpose::FalseAlarmPosition);

    const double sigma = std::sqrt(sensor.r_meas);
    for (size_t i = 0; i < truths.size(); ++i) {
        if (detect.bernoulli(sensor.p_d)) {
            Eigen::Vector2d z = truths[i] + sigma * Eigen::Vector2d(noise.normal(), noise.normal());
            scan.measurements.push_back(z);
            scan.truth_assignment[i] = static_cast<int>(scan.measurements.size());
        }
    }
    const std::uint64_t n_fa = fa_count.poisson(sensor.lambda_fa * region.area());
    for (std::uint64_t k = 0; k < n_fa; ++k) {
        scan.measurements.emplace_back(fa_pos.uniform(region.xmin, region.xmax),
                                       fa_pos.uniform(region.ymin, region.ymax));
    }
    return scan;
}

double gate_threshold(double exclusion_prob) {
    if (!(exclusion_prob > 0.0 && exclusion_prob < 1.0))
        throw DomainError("gate_threshold: require 0 < exclusion_prob < 1");
    return -2.0 * std::log(exclusion_prob);
}

Box false_alarm_region(const std::vector<TrackPrior>& priors, const SensorModel& sensor,
                       double gate) {
    const Eigen::Matrix<double, 2, 4> H = position_projection();
    const Eigen::Matrix2d R = sensor.r_meas * Eigen::Matrix2d::Identity();
    Box box;
    bool first = true;
    for (const auto& prior : priors) {
        const Eigen::Matrix2d S = H * prior.covariance * H.transpose() + R;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
        const double radius = std::sqrt(gate * es.eigenvalues().maxCoeff());
        const Eigen::Vector2d center = H * prior.mean;
        if (first) {
            box = {center.x() - radius, center.x() + radius, center.y() - radius,
                   center.y() + radius};
            first = false;
        } else {
            box.xmin = std::min(box.xmin, center.x() - radius);
            box.xmax = std::max(box.xmax, center.x() + radius);
            box.ymin = std::min(box.ymin, center.y() - radius);
            box.ymax = std::max(box.ymax, center.y() + radius);
        }
    }
    box.xmin -= 1.0;
    box.xmax += 1.0;
    box.ymin -= 1.0;
    box.ymax += 1.0;
    return box;
}

WeightMatrix compute_weights(const std::vector<TrackPrior>& priors, const Scan& scan,
                             const SensorModel& sensor, double gate) {
    sensor.validate();
    const int n = static_cast<int>(priors.size());
    const int m = static_cast<int>(scan.measurements.size());
    const Eigen::Matrix<double, 2, 4> H = position_projection();
    const Eigen::Matrix2d R = sensor.r_meas * Eigen::Matrix2d::Identity();

    WeightMatrix w(n, m);
    const double rpd = sensor.existence * sensor.p_d;
    const double scale = rpd / (sensor.lambda_fa * (1.0 - rpd));
    for (int i = 0; i < n; ++i) {
        const Eigen::Matrix2d S = H * priors[i].covariance * H.transpose() + R;
        const double det = S.determinant();
        if (!(det > 0.0)) throw SingularInnovation("innovation covariance not invertible");
        const Eigen::Matrix2d Sinv = S.inverse();
        const Eigen::Vector2d pred = H * priors[i].mean;
        const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
        for (int j = 0; j < m; ++j) {
            const Eigen::Vector2d innov = scan.measurements[j] - pred;
            const double d2 = innov.dot(Sinv * innov);
            if (d2 <= gate) w.at(i, j) = scale * norm * std::exp(-0.5 * d2);
        }
    }
    return w;
}

std::vector<double> expected_w(const std::vector<TrackPrior>& priors,
                               const std::vector<Eigen::Vector2d>& truths,
                               const SensorModel& sensor) {
    sensor.validate();
    const Eigen::Matrix<double, 2, 4> H = position_projection();
    const Eigen::Matrix2d R = sensor.r_meas * Eigen::Matrix2d::Identity();
    const double rpd = sensor.existence * sensor.p_d;
    const double scale = rpd / (sensor.lambda_fa * (1.0 - rpd));

    std::vector<double> out(priors.size(), 0.0);
    for (size_t i = 0; i < priors.size(); ++i) {
        const Eigen::Matrix2d S = H * priors[i].covariance * H.transpose() + R;
        const Eigen::Vector2d pred = H * priors[i].mean;
        // integral of N(z; pred, S) N(z; truth_k, R) dz = N(pred - truth_k; 0, S + R)
        double intensity = sensor.lambda_fa;
        const Eigen::Matrix2d C = S + R;
        const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(C.determinant()));
        const Eigen::Matrix2d Cinv = C.inverse();
        for (const auto& truth : truths) {
            const Eigen::Vector2d d = pred - truth;
            intensity += sensor.p_d * norm * std::exp(-0.5 * d.dot(Cinv * d));
        }
        out[i] = scale * intensity;
    }
    return out;
}

void save_scenario(std::ostream& out, const Scenario& sc, const Scan& scan) {
    out << std::setprecision(17);
    out << sc.truths.size() << ' ' << scan.measurements.size() << '\n';
    for (size_t i = 0; i < sc.truths.size(); ++i) {
        out << sc.truths[i].x() << ' ' << sc.truths[i].y();
        for (int k = 0; k < 4; ++k) out << ' ' << sc.priors[i].mean(k);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out << ' ' << sc.priors[i].covariance(r, c);
        out << '\n';
    }
    for (size_t j = 0; j < scan.measurements.size(); ++j) {
        out << scan.measurements[j].x() << ' ' << scan.measurements[j].y();
        out << '\n';
    }
    for (size_t i = 0; i < sc.truths.size(); ++i)
        out << scan.truth_assignment[i] << (i + 1 < sc.truths.size() ? ' ' : '\n');
}

void load_scenario(std::istream& in, Scenario& sc, Scan& scan) {
    size_t n = 0, m = 0;
    if (!(in >> n >> m)) throw ParseError("scenario: missing header");
    sc.truths.assign(n, Eigen::Vector2d::Zero());
    sc.priors.assign(n, TrackPrior{});
    scan.measurements.assign(m, Eigen::Vector2d::Zero());
    scan.truth_assignment.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (!(in >> sc.truths[i].x() >> sc.truths[i].y()))
            throw ParseError("scenario: truncated truths");
        for (int k = 0; k < 4; ++k)
            if (!(in >> sc.priors[i].mean(k))) throw ParseError("scenario: truncated prior mean");
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (!(in >> sc.priors[i].covariance(r, c)))
                    throw ParseError("scenario: truncated prior covariance");
    }
    for (size_t j = 0; j < m; ++j)
        if (!(in >> scan.measurements[j].x() >> scan.measurements[j].y()))
            throw ParseError("scenario: truncated measurements");
    for (size_t i = 0; i < n; ++i)
        if (!(in >> scan.truth_assignment[i])) throw ParseError("scenario: truncated assignment");
}

}  // namespace assoc
