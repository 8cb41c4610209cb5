#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "attack_session.hpp"

namespace rsd {

namespace {

constexpr std::size_t kMaxBisection = 64;
constexpr double kThetaCap = 0.98 * std::numbers::pi / 2;
constexpr double kGolden = 0.6180339887498949;

// Removes the components of v along each basis vector; returns the remaining norm.
double orthogonalize(Point& v, const Point& axis, const std::deque<Point>& memory) {
  auto remove = [&v](const Point& e) {
    const double c = dot(v, e);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * e[i];
  };
  remove(axis);
  for (const Point& m : memory) remove(m);
  remove(axis);
  return l2_norm(v);
}

}  // namespace

AttackTrace attack_surfree(DecisionOracle& oracle, PointView x_o, Label label_o,
                           const AttackConfig& cfg) {
  return detail::run_session("surfree", oracle, x_o, label_o, cfg, [&](detail::Session& s) {
    CounterRng rng(cfg.seed, 0x5346);
    const auto init = s.initialize(rng);
    if (!init) return TerminationReason::kInitFailed;

    const std::size_t d = s.dimension();
    const Point& xo = s.x_o();
    const double polish = cfg.surfree.polish_tol;
    const std::size_t memory_cap = d > 2 ? std::min(cfg.surfree.memory, d - 2) : 0;
    const std::size_t probes = cfg.surfree.probes_per_arc;

    Point xb = *init;
    if (const auto found = s.boundary_toward(xb, polish, kMaxBisection)) xb = found->outside;

    double theta_max = cfg.surfree.initial_theta_max;
    std::deque<Point> memory;
    Point axis(d), v(d), z(d);

    // Point on the circle through x_o and xb whose chord from x_o makes angle
    // theta with the current axis; its distance to x_o is eps * cos(theta).
    double eps = 0.0;
    auto circle = [&](double theta) {
      const double c = std::cos(theta), sn = std::sin(theta);
      for (std::size_t i = 0; i < d; ++i) z[i] = xo[i] + eps * c * (c * axis[i] + sn * v[i]);
      return s.clip(z);
    };

    for (std::uint64_t iter = 1;; ++iter) {
      eps = l2_distance(xb, xo);
      if (!(eps > 0.0)) return TerminationReason::kBudgetExhausted;
      for (std::size_t i = 0; i < d; ++i) axis[i] = (xb[i] - xo[i]) / eps;

      double vn = 0.0;
      for (int tries = 0; tries < 8 && !(vn > 1e-8); ++tries) {
        for (double& x : v) x = rng.normal();
        vn = orthogonalize(v, axis, memory);
      }
      if (!(vn > 1e-8)) {
        memory.clear();
        continue;
      }
      for (double& x : v) x /= vn;
      memory.push_back(v);
      while (memory.size() > memory_cap) memory.pop_front();

      const double unit = theta_max / static_cast<double>(probes);
      double sign = 0.0;
      if (s.adversarial(circle(unit))) {
        sign = 1.0;
      } else if (s.adversarial(circle(-unit))) {
        sign = -1.0;
      }
      if (sign == 0.0) {
        theta_max *= 0.9;
        continue;
      }

      std::size_t best_k = 1;
      while (best_k < probes && s.adversarial(circle(sign * unit * static_cast<double>(best_k + 1)))) {
        ++best_k;
      }
      double lo = unit * static_cast<double>(best_k);
      if (best_k == probes) {
        theta_max = std::min(theta_max * 1.1, kThetaCap);
      } else {
        double hi = std::min(unit * static_cast<double>(best_k + 1), kThetaCap);
        for (std::size_t r = 0; r < cfg.surfree.refine_steps; ++r) {
          const double mid = lo + kGolden * (hi - lo);
          (s.adversarial(circle(sign * mid)) ? lo : hi) = mid;
        }
      }

      const Point candidate = circle(sign * lo);
      if (const auto found = s.boundary_toward(candidate, polish, kMaxBisection)) {
        xb = found->outside;
      } else {
        s.event("iteration " + std::to_string(iter) + " kept the arc point after bisection retry");
        xb = candidate;
      }
    }
  });
}

}  // namespace rsd
