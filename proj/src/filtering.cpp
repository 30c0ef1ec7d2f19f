#include "mcmot3d/filtering.hpp"

#include <cmath>

namespace mcmot {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Discrete white-noise acceleration block for one axis: state (pos, vel).
Eigen::Matrix2d wna_block(double dt, double sigma) {
  Eigen::Matrix2d q;
  double s2 = sigma * sigma;
  q << 0.25 * dt * dt * dt * dt, 0.5 * dt * dt * dt, 0.5 * dt * dt * dt, dt * dt;
  return s2 * q;
}

}  // namespace

Eigen::MatrixXd make_psd(const Eigen::MatrixXd& m, double floor) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

std::optional<SigmaPoints> unscented_transform(const Eigen::VectorXd& mean,
                                               const Eigen::MatrixXd& cov, const UtConfig& cfg) {
  const auto L = static_cast<int>(mean.size());
  if (L == 0 || cov.rows() != L || cov.cols() != L) return std::nullopt;
  double lambda = cfg.alpha * cfg.alpha * (L + cfg.kappa) - L;
  double scale = L + lambda;
  if (scale <= 0.0) return std::nullopt;

  Eigen::MatrixXd scaled = scale * cov;
  Eigen::LLT<Eigen::MatrixXd> llt(scaled);
  if (llt.info() != Eigen::Success) {
    double jitter = kCholeskyJitter * std::max(1.0, scaled.trace() / L);
    llt.compute(scaled + jitter * Eigen::MatrixXd::Identity(L, L));
    if (llt.info() != Eigen::Success) return std::nullopt;
  }
  Eigen::MatrixXd root = llt.matrixL();

  SigmaPoints sp;
  sp.points.resize(L, 2 * L + 1);
  sp.points.col(0) = mean;
  for (int i = 0; i < L; ++i) {
    sp.points.col(1 + i) = mean + root.col(i);
    sp.points.col(1 + L + i) = mean - root.col(i);
  }
  sp.mean_weights.resize(2 * L + 1);
  sp.cov_weights.resize(2 * L + 1);
  double w = 1.0 / (2.0 * scale);
  sp.mean_weights.setConstant(w);
  sp.cov_weights.setConstant(w);
  sp.mean_weights[0] = lambda / scale;
  sp.cov_weights[0] = lambda / scale + 1.0 - cfg.alpha * cfg.alpha + cfg.beta;
  return sp;
}

std::optional<MeasurementMoments> propagate_measurement(const Eigen::VectorXd& mean,
                                                        const Eigen::MatrixXd& cov,
                                                        const MeasurementFn& fn,
                                                        const Eigen::MatrixXd& noise,
                                                        const UtConfig& cfg) {
  auto sp = unscented_transform(mean, cov, cfg);
  if (!sp) return std::nullopt;
  const auto n = static_cast<int>(sp->points.cols());

  Eigen::MatrixXd images;
  for (int i = 0; i < n; ++i) {
    auto y = fn(sp->points.col(i));
    if (!y) return std::nullopt;
    if (images.size() == 0) images.resize(y->size(), n);
    images.col(i) = *y;
  }

  MeasurementMoments m;
  m.mean = images * sp->mean_weights;
  m.innovation_cov = noise;
  m.cross_cov = Eigen::MatrixXd::Zero(mean.size(), images.rows());
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd dy = images.col(i) - m.mean;
    Eigen::VectorXd dx = sp->points.col(i) - mean;
    m.innovation_cov += sp->cov_weights[i] * dy * dy.transpose();
    m.cross_cov += sp->cov_weights[i] * dx * dy.transpose();
  }
  m.innovation_cov = 0.5 * (m.innovation_cov + m.innovation_cov.transpose());
  return m;
}

std::optional<double> gaussian_log_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                                       const Eigen::MatrixXd& cov) {
  const auto d = static_cast<int>(mean.size());
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) return std::nullopt;
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  if (log_det < std::log(kDeterminantFloor)) return std::nullopt;
  Eigen::VectorXd diff = x - mean;
  double maha = diff.dot(llt.solve(diff));
  return -0.5 * (d * std::log(2.0 * kPi) + log_det + maha);
}

std::optional<UkfCorrection> ukf_correct(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                         const MeasurementMoments& moments,
                                         const Eigen::VectorXd& z) {
  auto log_lik = gaussian_log_pdf(z, moments.mean, moments.innovation_cov);
  if (!log_lik) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXd> llt(moments.innovation_cov);
  if (llt.info() != Eigen::Success) return std::nullopt;
  // K = P_xy S^-1, computed as (S^-1 P_xy^T)^T since S is symmetric.
  Eigen::MatrixXd gain = llt.solve(moments.cross_cov.transpose()).transpose();
  UkfCorrection out;
  out.mean = mean + gain * (z - moments.mean);
  out.cov = make_psd(cov - gain * moments.innovation_cov * gain.transpose());
  out.log_likelihood = *log_lik;
  return out;
}

GaussianState kalman_predict(const GaussianState& state, const MotionConfig& motion) {
  const double dt = motion.dt;

  Mat9 f = Mat9::Identity();
  f.block<3, 3>(0, 3) = dt * Mat3::Identity();
  Mat9 q = Mat9::Zero();
  Eigen::Matrix2d qb = wna_block(dt, motion.accel_noise);
  for (int axis = 0; axis < 3; ++axis) {
    q(axis, axis) = qb(0, 0);
    q(axis, 3 + axis) = qb(0, 1);
    q(3 + axis, axis) = qb(1, 0);
    q(3 + axis, 3 + axis) = qb(1, 1);
  }
  q.block<3, 3>(6, 6) = motion.shape_walk_noise * motion.shape_walk_noise * Mat3::Identity();

  GaussianState out = state;
  out.mean = f * state.mean;
  out.cov = f * state.cov * f.transpose() + q;
  out.cov = 0.5 * (out.cov + out.cov.transpose());

  Mat6 fk = Mat6::Identity();
  fk.block<3, 3>(0, 3) = dt * Mat3::Identity();
  Mat6 qk = Mat6::Zero();
  Eigen::Matrix2d qbk = wna_block(dt, motion.keypoint_accel_noise);
  for (int axis = 0; axis < 3; ++axis) {
    qk(axis, axis) = qbk(0, 0);
    qk(axis, 3 + axis) = qbk(0, 1);
    qk(3 + axis, axis) = qbk(1, 0);
    qk(3 + axis, 3 + axis) = qbk(1, 1);
  }
  for (auto& kp : out.keypoints) {
    kp.mean = fk * kp.mean;
    kp.cov = fk * kp.cov * fk.transpose() + qk;
    kp.cov = 0.5 * (kp.cov + kp.cov.transpose());
  }
  return out;
}

std::optional<MeasurementMoments> predict_measurement_ks(const GaussianState& state,
                                                         const CameraModel& cam,
                                                         const UtConfig& cfg) {
  MeasurementFn fn = [&cam](const Eigen::VectorXd& x) -> std::optional<Eigen::VectorXd> {
    Ellipsoid3D e{x.head<3>(), x.tail<3>()};
    auto box = project_ellipsoid_to_bbox(e, cam);
    if (!box.ok()) return std::nullopt;
    return box.value.as_vector();
  };
  Eigen::MatrixXd noise = cam.bbox_noise_diag.asDiagonal();
  return propagate_measurement(state.mean, state.cov, fn, noise, cfg);
}

std::optional<double> detection_log_likelihood(const BBox2D& bbox,
                                               const MeasurementMoments& moments) {
  return gaussian_log_pdf(bbox.as_vector(), moments.mean, moments.innovation_cov);
}

KsUpdateResult ukf_update_ks(const BBox2D& bbox, const GaussianState& state,
                             const CameraModel& cam, const UtConfig& cfg) {
  KsUpdateResult out{state, -std::numeric_limits<double>::infinity(), false};
  auto moments = predict_measurement_ks(state, cam, cfg);
  if (!moments) return out;
  auto corr = ukf_correct(state.mean, state.cov, *moments, bbox.as_vector());
  if (!corr) return out;
  out.state.mean = corr->mean;
  out.state.cov = corr->cov;
  out.log_likelihood = corr->log_likelihood;
  out.updated = true;
  return out;
}

GaussianState ukf_update_kp(const std::vector<Keypoint2D>& keypoints, const GaussianState& state,
                            const CameraModel& cam, const UtConfig& cfg) {
  GaussianState out = state;
  const auto n = std::min(keypoints.size(), state.keypoints.size());
  Eigen::MatrixXd noise = cam.keypoint_noise_diag.asDiagonal();
  MeasurementFn fn = [&cam](const Eigen::VectorXd& x) -> std::optional<Eigen::VectorXd> {
    auto pix = project_point(cam.projection, x.head<3>());
    if (!pix.ok()) return std::nullopt;
    return Eigen::VectorXd(pix.value);
  };
  for (size_t j = 0; j < n; ++j) {
    if (!keypoints[j].visible) continue;
    const KeypointBlock& block = out.keypoints[j];
    auto moments = propagate_measurement(block.mean, block.cov, fn, noise, cfg);
    if (!moments) continue;
    auto corr = ukf_correct(block.mean, block.cov, *moments, keypoints[j].pixel);
    if (!corr) continue;
    out.keypoints[j].mean = corr->mean;
    out.keypoints[j].cov = corr->cov;
  }
  return out;
}

}  // namespace mcmot
