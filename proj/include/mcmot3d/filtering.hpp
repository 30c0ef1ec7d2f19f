#pragma once

#include "mcmot3d/geometry.hpp"
#include "mcmot3d/types.hpp"

#include <functional>
#include <optional>

namespace mcmot {

// Sigma-point spread parameters. Defaults give lambda = 2 for any dimension.
struct UtConfig {
  double alpha = 1.0;
  double kappa = 2.0;
  double beta = 2.0;
};

struct MotionConfig {
  double dt = 1.0 / 30.0;
  double accel_noise = 0.5;           // white acceleration on the center, m/s^2
  double shape_walk_noise = 0.05;     // per-step random walk on log half-lengths
  double keypoint_accel_noise = 2.0;  // white acceleration per joint, m/s^2
};

// Joint state: position and velocity, independent of the body state.
struct KeypointBlock {
  Vec6 mean = Vec6::Zero();
  Mat6 cov = Mat6::Identity();
};

// Track state: center position, velocity, log half-lengths, plus one
// position/velocity block per skeleton joint.
struct GaussianState {
  Vec9 mean = Vec9::Zero();
  Mat9 cov = Mat9::Identity();
  std::vector<KeypointBlock> keypoints;

  Vec3 position() const { return mean.head<3>(); }
  Vec3 velocity() const { return mean.segment<3>(3); }
  Vec3 log_shape() const { return mean.tail<3>(); }
  Ellipsoid3D ellipsoid() const { return Ellipsoid3D{position(), log_shape()}; }
};

struct SigmaPoints {
  Eigen::MatrixXd points;        // L x (2L + 1)
  Eigen::VectorXd mean_weights;  // 2L + 1
  Eigen::VectorXd cov_weights;
};

// Determinant floor below which a covariance is treated as singular.
inline constexpr double kDeterminantFloor = 1e-12;
inline constexpr double kCholeskyJitter = 1e-9;
inline constexpr double kEigenvalueFloor = 1e-9;

// Symmetrize and floor the eigenvalues so downstream Cholesky stays healthy.
Eigen::MatrixXd make_psd(const Eigen::MatrixXd& m, double floor = kEigenvalueFloor);

// Standard sigma-point set for N(mean, cov). Returns nullopt when the
// (jittered) Cholesky factorization fails.
std::optional<SigmaPoints> unscented_transform(const Eigen::VectorXd& mean,
                                               const Eigen::MatrixXd& cov,
                                               const UtConfig& cfg = {});

struct MeasurementMoments {
  Eigen::VectorXd mean;            // predicted measurement
  Eigen::MatrixXd innovation_cov;  // includes the additive noise term
  Eigen::MatrixXd cross_cov;       // state x measurement
};

// Measurement function evaluated at a sigma point; nullopt marks the point as
// unprojectable, which gates the whole propagation out.
using MeasurementFn = std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>;

std::optional<MeasurementMoments> propagate_measurement(const Eigen::VectorXd& mean,
                                                        const Eigen::MatrixXd& cov,
                                                        const MeasurementFn& fn,
                                                        const Eigen::MatrixXd& noise,
                                                        const UtConfig& cfg = {});

// Log density of x under N(mean, cov); nullopt when cov is singular.
std::optional<double> gaussian_log_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                                       const Eigen::MatrixXd& cov);

struct UkfCorrection {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double log_likelihood = 0.0;
};

// Measurement update from precomputed moments: K = P_xy S^-1.
std::optional<UkfCorrection> ukf_correct(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                         const MeasurementMoments& moments,
                                         const Eigen::VectorXd& z);

// Constant-velocity prediction for the body state and every joint block.
GaussianState kalman_predict(const GaussianState& state, const MotionConfig& motion);

// Predicted box measurement [l, t, log w, log h] for the body state.
std::optional<MeasurementMoments> predict_measurement_ks(const GaussianState& state,
                                                         const CameraModel& cam,
                                                         const UtConfig& cfg = {});

// Log of the assignment likelihood of a detection box under the predicted
// measurement density.
std::optional<double> detection_log_likelihood(const BBox2D& bbox,
                                               const MeasurementMoments& moments);

struct KsUpdateResult {
  GaussianState state;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  bool updated = false;
};

// Box update of the body state; joints are untouched. When the projection or
// the innovation covariance is unusable the input state is returned as is.
KsUpdateResult ukf_update_ks(const BBox2D& bbox, const GaussianState& state,
                             const CameraModel& cam, const UtConfig& cfg = {});

// Per-joint pixel updates; invisible joints and failed projections leave the
// corresponding block unchanged.
GaussianState ukf_update_kp(const std::vector<Keypoint2D>& keypoints, const GaussianState& state,
                            const CameraModel& cam, const UtConfig& cfg = {});

}  // namespace mcmot
