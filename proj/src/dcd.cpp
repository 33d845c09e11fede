#include "npsvor/dcd.hpp"

#include <algorithm>
#include <string>

#include "npsvor/error.hpp"

namespace npsvor {

namespace {

void require_curvature(double A) {
  if (!(A > 0.0))
    throw ValidationError("coordinate step needs A > 0, got " + std::to_string(A));
}

}  // namespace

double projected_gradient_box(double G, double alpha, double upper) {
  if (alpha <= 0.0) return std::min(G, 0.0);
  if (alpha >= upper) return std::max(G, 0.0);
  return G;
}

double violation_soft(double g_p, double g_n, double alpha, double bound) {
  if (alpha == 0.0) return std::max(0.0, g_n) - std::min(0.0, g_p);
  if (alpha >= bound) return std::max(0.0, g_p);
  if (alpha <= -bound) return std::min(0.0, g_n);
  return alpha > 0.0 ? g_p : g_n;
}

StepResult box_step_gradient(double A, double G, double alpha, double upper) {
  require_curvature(A);
  return {std::clamp(alpha - G / A, 0.0, upper), projected_gradient_box(G, alpha, upper)};
}

StepResult box_step(const BoxStepInput& in) {
  return box_step_gradient(in.A, in.B - 1.0, in.alpha, in.upper);
}

StepResult soft_thresh_step(const SoftThreshStepInput& in) {
  require_curvature(in.A);
  const double g_p = in.B + in.eps;
  const double g_n = in.B - in.eps;
  double d;
  if (g_p < in.A * in.alpha)
    d = -g_p / in.A;
  else if (g_n > in.A * in.alpha)
    d = -g_n / in.A;
  else
    d = -in.alpha;
  return {std::clamp(in.alpha + d, -in.bound, in.bound),
          violation_soft(g_p, g_n, in.alpha, in.bound)};
}

bool shrink_test_box(double alpha, double gradient, double upper, double M) {
  if (std::isinf(M)) return false;
  if (alpha <= 0.0) return gradient > M;
  if (alpha >= upper) return gradient < -M;
  return false;
}

bool shrink_test_soft(double alpha, double g_p, double g_n, double bound, double M) {
  if (std::isinf(M)) return false;
  if (alpha == 0.0) return g_n < -M && g_p > M;
  if (alpha >= bound) return g_p < -M;
  if (alpha <= -bound) return g_n > M;
  return false;
}

SweepState::SweepState(std::vector<std::size_t> eligible, bool shrinking)
    : order_(std::move(eligible)), active_size_(order_.size()), shrinking_(shrinking) {}

SweepOutcome SweepState::finish(double norm, double max_abs, double eps_stop) {
  ++sweeps_;
  last_norm_ = norm;
  if (initial_norm_ < 0.0) initial_norm_ = norm;
  const bool met = norm == 0.0 || norm < eps_stop * initial_norm_;
  if (met) {
    if (active_size_ == order_.size()) return SweepOutcome::converged;
    active_size_ = order_.size();
    max_violation_ = kInfinity;
    return SweepOutcome::shrunk_converged;
  }
  max_violation_ = max_abs;
  return SweepOutcome::proceed;
}

}  // namespace npsvor
