#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "npsvor/random.hpp"

// Dual coordinate descent building blocks shared by every linear solver in
// the library: closed-form one-variable steps, shrinking tests, and the
// randomized sweep loop with relative-violation stopping.
namespace npsvor {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Updates whose violation magnitude falls below this are skipped.
inline constexpr double kUpdateThreshold = 1.0e-12;

// min_{s in [0, upper]} 0.5*A*(s - alpha)^2 + (B - 1)*s
struct BoxStepInput {
  double A;
  double B;
  double alpha;
  double upper;
};

// min_{s in [-bound, bound]} 0.5*A*(s - alpha)^2 + B*s + eps*|s|
struct SoftThreshStepInput {
  double A;
  double B;
  double alpha;
  double eps;
  double bound;
};

struct StepResult {
  double new_alpha;
  double violation;  // projected gradient at the old alpha
};

// Box step for an arbitrary gradient G at alpha over [0, upper].
StepResult box_step_gradient(double A, double G, double alpha, double upper);

StepResult box_step(const BoxStepInput& in);
StepResult soft_thresh_step(const SoftThreshStepInput& in);

// Projected gradient over [0, upper] for the raw gradient G.
double projected_gradient_box(double G, double alpha, double upper);
// Optimality violation of the soft-threshold subproblem at alpha.
double violation_soft(double g_p, double g_n, double alpha, double bound);

// `gradient` is the raw (unprojected) derivative at alpha.
bool shrink_test_box(double alpha, double gradient, double upper, double M);
bool shrink_test_soft(double alpha, double g_p, double g_n, double bound, double M);

enum class SweepOutcome { converged, shrunk_converged, proceed };

struct CoordinateVisit {
  double violation = 0.0;
  bool shrink = false;
};

struct SweepLimits {
  double eps_stop = 0.1;
  int max_sweeps = 1000;
  bool shrinking = true;
};

// Active-set bookkeeping for one dual problem. Indices excluded at
// construction (zero rows) never re-enter the active set.
class SweepState {
 public:
  SweepState(std::vector<std::size_t> eligible, bool shrinking);

  std::span<const std::size_t> active() const { return {order_.data(), active_size_}; }
  std::size_t active_size() const { return active_size_; }
  std::size_t full_size() const { return order_.size(); }
  // Maximal |v| of the previous sweep; +inf when shrinking is off or just reset.
  double max_violation() const { return max_violation_; }
  // Threshold handed to shrink tests.
  double shrink_threshold() const { return shrinking_ ? max_violation_ : kInfinity; }
  double initial_norm() const { return initial_norm_; }
  double last_norm() const { return last_norm_; }
  int sweeps() const { return sweeps_; }

  // One pass over the active set in a fresh random order. visit(index, M)
  // returns the coordinate's violation and whether to shrink it; shrunk
  // coordinates are dropped and do not count towards ||v||_1. On
  // shrunk_converged the full set is restored and M reset to +inf.
  template <class Visit>
  SweepOutcome sweep(Rng& rng, double eps_stop, Visit&& visit);

 private:
  SweepOutcome finish(double norm, double max_abs, double eps_stop);

  std::vector<std::size_t> order_;
  std::size_t active_size_ = 0;
  bool shrinking_ = true;
  double max_violation_ = kInfinity;
  double initial_norm_ = -1.0;
  double last_norm_ = 0.0;
  int sweeps_ = 0;
};

template <class Visit>
SweepOutcome SweepState::sweep(Rng& rng, double eps_stop, Visit&& visit) {
  rng.shuffle(std::span(order_.data(), active_size_));
  const double threshold = shrink_threshold();
  double norm = 0.0;
  double max_abs = 0.0;
  for (std::size_t s = 0; s < active_size_;) {
    const std::size_t index = order_[s];
    const CoordinateVisit v = visit(index, threshold);
    if (v.shrink) {
      --active_size_;
      std::swap(order_[s], order_[active_size_]);
      continue;
    }
    norm += std::fabs(v.violation);
    max_abs = std::max(max_abs, std::fabs(v.violation));
    ++s;
  }
  return finish(norm, max_abs, eps_stop);
}

struct SolveSummary {
  int sweeps = 0;
  bool reached_max_sweeps = false;
  double initial_violation = 0.0;  // ||v^0||_1
  double final_violation = 0.0;    // ||v^t||_1 of the last sweep
};

// Called after every completed sweep with the 1-based sweep count.
using SweepObserver = std::function<void(int sweep)>;

// Repeats sweeps until the stopping rule holds on the full index set or
// max_sweeps is exhausted.
template <class Visit>
SolveSummary run_sweeps(SweepState& state, Rng& rng, const SweepLimits& limits, Visit&& visit,
                        const SweepObserver& observer = {}) {
  SolveSummary summary;
  while (true) {
    if (state.sweeps() >= limits.max_sweeps) {
      summary.reached_max_sweeps = true;
      break;
    }
    const SweepOutcome outcome = state.sweep(rng, limits.eps_stop, visit);
    if (observer) observer(state.sweeps());
    if (outcome == SweepOutcome::converged) break;
  }
  summary.sweeps = state.sweeps();
  summary.initial_violation = std::max(state.initial_norm(), 0.0);
  summary.final_violation = state.last_norm();
  return summary;
}

}  // namespace npsvor
