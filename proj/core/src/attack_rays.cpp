#include <algorithm>
#include <cmath>
#include <limits>

#include "attack_session.hpp"

namespace rsd {

AttackTrace attack_rays(DecisionOracle& oracle, PointView x_o, Label label_o,
                        const AttackConfig& cfg) {
  return detail::run_session("rays", oracle, x_o, label_o, cfg, [&](detail::Session& s) {
    const std::size_t d = s.dimension();
    const double dd = static_cast<double>(d);
    const double inv_sqrt_d = 1.0 / std::sqrt(dd);
    const double t_max = std::sqrt(dd);
    const Point& xo = s.x_o();
    AttackTrace& trace = s.trace();

    std::vector<double> sign(d, 1.0), trial(d);
    Point x(d);
    auto on_ray = [&](const std::vector<double>& sg, double r) {
      for (std::size_t i = 0; i < d; ++i) x[i] = xo[i] + r * sg[i] * inv_sqrt_d;
      return x;
    };

    // Smallest adversarial radius along sg, given that hi is adversarial and
    // 0 (x_o) is not.
    auto search = [&](const std::vector<double>& sg, double hi) {
      double lo = 0.0;
      while (hi - lo > cfg.rays.rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (s.adversarial(on_ray(sg, mid)) ? hi : lo) = mid;
      }
      return hi;
    };

    double best = std::numeric_limits<double>::infinity();
    if (s.adversarial(on_ray(sign, t_max))) {
      best = search(sign, t_max);
      trace.accepted_radii.push_back(best);
    }

    for (;;) {
      for (std::size_t blocks = 1;; blocks *= 2) {
        const std::size_t size = (d + blocks - 1) / blocks;
        for (std::size_t start = 0; start < d; start += size) {
          const std::size_t stop = std::min(d, start + size);
          trial = sign;
          for (std::size_t i = start; i < stop; ++i) trial[i] = -trial[i];
          // Early stop: a flip that does not beat the current radius is rejected
          // with a single query.
          const double probe_r = std::isfinite(best) ? best : t_max;
          if (!s.adversarial(on_ray(trial, probe_r))) continue;
          const double r = search(trial, probe_r);
          if (r < best) {
            best = r;
            sign = trial;
            trace.accepted_radii.push_back(best);
          }
        }
        if (size == 1) break;
      }
    }
    return TerminationReason::kBudgetExhausted;
  });
}

}  // namespace rsd
