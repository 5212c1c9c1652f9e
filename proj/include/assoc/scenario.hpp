#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "assoc/rng.hpp"
#include "assoc/weight_matrix.hpp"

namespace assoc {

struct SensorModel {
    double p_d = 0.6;        // detection probability, in (0, 1)
    double lambda_fa = 0.01; // false-alarm intensity per unit area
    double r_meas = 1.0;     // measurement noise variance per axis, R = r I2
    double existence = 1.0;  // prior track existence probability

    void validate() const;
};

/// 2D position + 2D velocity, state ordering [px, vx, py, vy].
struct TrackPrior {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
};

struct Scan {
    std::vector<Eigen::Vector2d> measurements;
    std::vector<int> truth_assignment;  // target -> 1-based measurement index, 0 = missed
};

struct Box {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    double area() const { return (xmax - xmin) * (ymax - ymin); }
};

/// Constant-velocity model matrices for the pre-initialization simulation.
Eigen::Matrix4d cv_transition(double T_step);
Eigen::Matrix4d cv_process_noise(double q, double T_step);
Eigen::Matrix<double, 2, 4> position_projection();

/// Simulates `steps` predict/update cycles of the constant-velocity Kalman
/// recursion from P = 0, with Bernoulli(p_d) detection at each step.
Eigen::Matrix4d preinit_covariance(double q, double T_step, double r_meas, double p_d, int steps,
                                   RandomStream& rng);

struct Scenario {
    std::vector<Eigen::Vector2d> truths;
    std::vector<TrackPrior> priors;
};

/// rows x cols truth positions at grid points spaced `spacing` apart; each
/// prior covariance from an independent preinit run, each prior mean the
/// truth perturbed by a sample from the full 4x4 prior covariance.
Scenario build_grid_scenario(int rows, int cols, double spacing, const SensorModel& sensor,
                             double q, double T_step, int steps, std::uint64_t seed,
                             std::uint64_t trial);

/// Bernoulli(p_d) detections with additive N(0, R) noise plus Poisson
/// clutter uniform over `region`.
Scan simulate_scan(const std::vector<Eigen::Vector2d>& truths, const SensorModel& sensor,
                   const Box& region, std::uint64_t seed, std::uint64_t trial);

/// Squared-Mahalanobis gate for a 2-dof chi-square with the given
/// probability of excluding the target-derived measurement.
double gate_threshold(double exclusion_prob);

/// Axis-aligned bounding box of all gate circles (radius from the largest
/// innovation eigenvalue), expanded by a 1-unit margin.
Box false_alarm_region(const std::vector<TrackPrior>& priors, const SensorModel& sensor,
                       double gate);

/// psi_i(j) per the association weight formula: Gaussian innovation
/// likelihood scaled by r p_d / (lambda_fa (1 - r p_d)), zero outside the
/// gate.
WeightMatrix compute_weights(const std::vector<TrackPrior>& priors, const Scan& scan,
                             const SensorModel& sensor, double gate);

/// Closed-form E[W_i]: expected measurement intensity integrated against the
/// predicted measurement density.
std::vector<double> expected_w(const std::vector<TrackPrior>& priors,
                               const std::vector<Eigen::Vector2d>& truths,
                               const SensorModel& sensor);

/// Whitespace text dump of a scenario plus one scan; 17 significant digits,
/// exact round-trip.
void save_scenario(std::ostream& out, const Scenario& sc, const Scan& scan);
void load_scenario(std::istream& in, Scenario& sc, Scan& scan);

}  // namespace assoc
