#include "qcpto/predict.hpp"

#include <cmath>
#include <numbers>

#include "qcpto/errors.hpp"
#include "qcpto/rng.hpp"

namespace qcpto {
namespace {

bool symmetric_psd(const Eigen::MatrixXd& m, double tol) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  return eig.eigenvalues().minCoeff() >= -tol;
}

double gaussian(Rng& rng) {
  // Box-Muller on the portable unit draws.
  const double u1 = 1.0 - rng.unit();
  const double u2 = rng.unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

Matrix4 constant_velocity_transition(double delta) {
  Matrix4 a = Matrix4::Identity();
  a(0, 2) = delta;
  a(1, 3) = delta;
  return a;
}

Matrix24 position_measurement() {
  Matrix24 h = Matrix24::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  return h;
}

KfState make_filter(Vec2 first_position, const PredictorConfig& cfg) {
  KfState s;
  s.x_hat << first_position.x, first_position.y, 0.0, 0.0;
  s.p_cov = cfg.p0_diag.asDiagonal();
  s.a_mat = constant_velocity_transition(cfg.delta);
  s.h_mat = position_measurement();
  s.q_proc = cfg.q_diag.asDiagonal();
  s.r_meas = cfg.r_diag.asDiagonal();
  return s;
}

bool well_formed(const KfState& s, double tol) {
  return symmetric_psd(s.p_cov, tol) && symmetric_psd(s.q_proc, tol) &&
         symmetric_psd(s.r_meas, tol) && s.h_mat == position_measurement();
}

KfPrediction kf_predict(const KfState& s) {
  KfPrediction out;
  out.x_pred = s.a_mat * s.x_hat;
  out.p_pred = s.a_mat * s.p_cov * s.a_mat.transpose() + s.q_proc;
  out.p_pred = 0.5 * (out.p_pred + out.p_pred.transpose());
  return out;
}

KfState kf_update(const KfState& s, const Vector4& x_pred, const Matrix4& p_pred,
                  const Eigen::Vector2d& z) {
  const Eigen::Vector2d residual = z - s.h_mat * x_pred;
  const Eigen::Matrix2d innovation = s.h_mat * p_pred * s.h_mat.transpose() + s.r_meas;

  Eigen::Matrix2d inverse;
  if (std::abs(innovation.determinant()) > 1e-12) {
    inverse = innovation.inverse();
  } else {
    // Degenerate covariance: accept only residuals the covariance can explain.
    inverse = innovation.completeOrthogonalDecomposition().pseudoInverse();
    const Eigen::Vector2d unexplained = residual - innovation * (inverse * residual);
    if (unexplained.norm() > 1e-9 * (1.0 + residual.norm())) {
      throw SingularInnovation("innovation covariance is singular and the residual lies outside its range");
    }
  }

  const Eigen::Matrix<double, 4, 2> gain = p_pred * s.h_mat.transpose() * inverse;
  KfState out = s;
  out.x_hat = x_pred + gain * residual;
  out.p_cov = (Matrix4::Identity() - gain * s.h_mat) * p_pred;
  out.p_cov = 0.5 * (out.p_cov + out.p_cov.transpose());
  return out;
}

Turn classify_turn(const VehicleState& current, Vec2 predicted_pos, double theta_turn) {
  const Vec2 displacement = predicted_pos - current.position;
  if (displacement.x == 0.0 && displacement.y == 0.0) return Turn::Straight;
  const Vec2 heading = unit_vector(current.heading);
  const double phi = std::atan2(cross(heading, displacement), dot(heading, displacement));
  if (phi > theta_turn) return Turn::Left;
  if (phi < -theta_turn) return Turn::Right;
  return Turn::Straight;
}

Roi estimate_roi(const VehicleState& current, Turn turn, double roi_height) {
  Roi roi;
  roi.turn = turn;
  if (turn == Turn::Straight) return roi;
  if (!(roi_height > 0.0)) throw DomainError("roi_height must be positive");
  const double axis =
      current.heading + (turn == Turn::Left ? 1.0 : -1.0) * std::numbers::pi / 2.0;
  const Vec2 along = unit_vector(axis);
  const Vec2 across{-along.y, along.x};
  const double half_side = roi_height / std::sqrt(3.0);
  const Vec2 base = current.position + roi_height * along;
  roi.triangle = {current.position, base + half_side * across, base - half_side * across};
  return roi;
}

std::map<int, PredictorOutput> run_predictor(const Trace& trace, int slot,
                                             const std::map<int, Track>& bank,
                                             const PredictorConfig& cfg) {
  std::map<int, PredictorOutput> out;
  const SlotRecord* rec = trace.find_slot(slot);
  if (rec == nullptr) return out;

  for (const VehicleState& v : rec->vehicles) {
    Vec2 measured = v.position;
    if (cfg.measurement_noise_std > 0.0) {
      Rng rng(derive_seed(static_cast<std::uint64_t>(slot), 0x6e6f697365ULL,
                          static_cast<std::uint64_t>(v.user_id)));
      measured.x += cfg.measurement_noise_std * gaussian(rng);
      measured.y += cfg.measurement_noise_std * gaussian(rng);
    }
    const Eigen::Vector2d z(measured.x, measured.y);

    PredictorOutput result;
    auto it = bank.find(v.user_id);
    if (it == bank.end()) {
      result.track.kf = make_filter(measured, cfg);
      result.track.updates = 1;
      result.reference = v;
      const KfPrediction next = kf_predict(result.track.kf);
      result.predicted_pos = {next.x_pred(0), next.x_pred(1)};
      out.emplace(v.user_id, std::move(result));
      continue;
    }

    const Track& track = it->second;
    const KfPrediction prior = kf_predict(track.kf);
    result.track.kf = kf_update(track.kf, prior.x_pred, prior.p_pred, z);
    result.track.updates = track.updates + 1;
    const KfPrediction next = kf_predict(result.track.kf);
    result.predicted_pos = {next.x_pred(0), next.x_pred(1)};

    // The decision compares where the filter believed the vehicle was heading
    // before this measurement with where it now expects the vehicle next.
    const Vec2 prior_velocity{prior.x_pred(2), prior.x_pred(3)};
    result.reference = v;
    result.reference.position = {prior.x_pred(0), prior.x_pred(1)};
    result.reference.speed = norm(prior_velocity);
    result.reference.heading =
        result.reference.speed > 0.0
            ? normalize_heading(std::atan2(prior_velocity.y, prior_velocity.x))
            : v.heading;

    if (track.updates >= cfg.warmup_updates && result.reference.speed >= cfg.min_speed) {
      result.turn = classify_turn(result.reference, result.predicted_pos, cfg.theta_turn);
    }
    VehicleState apex = v;
    apex.heading = result.reference.heading;
    result.roi = estimate_roi(apex, result.turn, cfg.roi_height);
    out.emplace(v.user_id, std::move(result));
  }
  return out;
}

void advance_bank(std::map<int, Track>& bank, const std::map<int, PredictorOutput>& outputs,
                  const PredictorConfig& cfg) {
  for (auto it = bank.begin(); it != bank.end();) {
    if (outputs.contains(it->first)) {
      ++it;
      continue;
    }
    Track& t = it->second;
    if (++t.missed > cfg.max_coast_slots) {
      it = bank.erase(it);
      continue;
    }
    const KfPrediction coast = kf_predict(t.kf);
    t.kf.x_hat = coast.x_pred;
    t.kf.p_cov = coast.p_pred;
    ++it;
  }
  for (const auto& [id, result] : outputs) bank[id] = result.track;
}

}  // namespace qcpto
