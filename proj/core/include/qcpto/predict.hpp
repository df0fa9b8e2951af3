#pragma once

#include <Eigen/Dense>
#include <map>

#include "qcpto/model.hpp"
#include "qcpto/trace.hpp"

namespace qcpto {

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;
using Matrix24 = Eigen::Matrix<double, 2, 4>;

/// Constant-velocity Kalman filter over [px, py, vx, vy].
struct KfState {
  Vector4 x_hat = Vector4::Zero();
  Matrix4 p_cov = Matrix4::Identity();
  Matrix4 a_mat = Matrix4::Identity();
  Matrix24 h_mat = Matrix24::Zero();
  Matrix4 q_proc = Matrix4::Zero();
  Eigen::Matrix2d r_meas = Eigen::Matrix2d::Identity();

  Vec2 position() const { return {x_hat(0), x_hat(1)}; }
  Vec2 velocity() const { return {x_hat(2), x_hat(3)}; }
};

struct KfPrediction {
  Vector4 x_pred;
  Matrix4 p_pred;
};

struct PredictorConfig {
  double delta = 1.0;
  Vector4 p0_diag{1.0, 1.0, 10.0, 10.0};
  Vector4 q_diag{0.01, 0.01, 0.1, 0.1};
  Eigen::Vector2d r_diag{0.25, 0.25};
  double theta_turn = 0.2618;  // 15 degrees
  double roi_height = 10.0;
  int warmup_updates = 3;      // measurements absorbed before turns are trusted
  double min_speed = 0.5;      // m/s; slower tracks are treated as Straight
  int max_coast_slots = 3;
  double measurement_noise_std = 0.0;  // optional synthetic noise on z
};

/// State-transition matrix of the constant-velocity model.
Matrix4 constant_velocity_transition(double delta);
Matrix24 position_measurement();

/// Fresh filter at the first measured position with zero velocity.
KfState make_filter(Vec2 first_position, const PredictorConfig& cfg);

/// True when covariances are symmetric PSD (to 1e-9) and H selects position.
bool well_formed(const KfState& s, double tol = 1e-9);

KfPrediction kf_predict(const KfState& s);

/// Measurement update. Throws SingularInnovation when the innovation covariance
/// is singular and the residual does not lie in its range.
KfState kf_update(const KfState& s, const Vector4& x_pred, const Matrix4& p_pred,
                  const Eigen::Vector2d& z);

Turn classify_turn(const VehicleState& current, Vec2 predicted_pos, double theta_turn);

Roi estimate_roi(const VehicleState& current, Turn turn, double roi_height);

/// Filter bookkeeping for one vehicle across slots.
struct Track {
  KfState kf;
  int updates = 0;  // measurements absorbed
  int missed = 0;   // consecutive slots without a measurement
};

struct PredictorOutput {
  Vec2 predicted_pos;
  Turn turn = Turn::Straight;
  Roi roi;
  Track track;
  VehicleState reference;  // filter belief used for the turn decision
};

/// Updates every vehicle present at `slot` with its measurement, then predicts
/// one step ahead and classifies the turn. Vehicles absent from the bank start
/// a new track. The bank itself is not modified.
std::map<int, PredictorOutput> run_predictor(const Trace& trace, int slot,
                                             const std::map<int, Track>& bank,
                                             const PredictorConfig& cfg);

/// Advances the bank by one slot: applies run_predictor results, coasts
/// vehicles absent from the slot and drops tracks that coasted too long.
void advance_bank(std::map<int, Track>& bank, const std::map<int, PredictorOutput>& outputs,
                  const PredictorConfig& cfg);

}  // namespace qcpto
