#include <cmath>

#include "attack_session.hpp"

namespace rsd {

namespace {

constexpr std::size_t kMaxBisection = 64;

}  // namespace

AttackTrace attack_hsja(DecisionOracle& oracle, PointView x_o, Label label_o,
                        const AttackConfig& cfg) {
  return detail::run_session("hsja", oracle, x_o, label_o, cfg, [&](detail::Session& s) {
    CounterRng rng(cfg.seed, 0x4853);
    const auto init = s.initialize(rng);
    if (!init) return TerminationReason::kInitFailed;

    const std::size_t d = s.dimension();
    const double dd = static_cast<double>(d);
    const double theta = cfg.hsja.gamma / (dd * std::sqrt(dd));

    Point xb = *init;
    if (const auto found = s.boundary_toward(xb, theta, kMaxBisection)) xb = found->outside;
    double dist = l2_distance(xb, s.x_o());

    Point u(d), probe(d), grad(d), step(d);
    for (std::uint64_t t = 1;; ++t) {
      const double delta = std::sqrt(dd) * theta * dist;
      const auto batch =
          static_cast<std::size_t>(std::ceil(cfg.hsja.b0 * std::sqrt(static_cast<double>(t))));

      // Signed probes around xb; the clipped perturbation is what the oracle saw.
      std::vector<Point> perturbations(batch, Point(d));
      std::vector<double> phi(batch);
      double phi_mean = 0.0;
      for (std::size_t b = 0; b < batch; ++b) {
        for (double& v : u) v = rng.normal();
        const double nu = l2_norm(u);
        for (std::size_t i = 0; i < d; ++i) probe[i] = xb[i] + delta * u[i] / nu;
        probe = s.clip(probe);
        for (std::size_t i = 0; i < d; ++i) perturbations[b][i] = (probe[i] - xb[i]) / delta;
        phi[b] = s.adversarial(probe) ? 1.0 : -1.0;
        phi_mean += phi[b];
      }
      phi_mean /= static_cast<double>(batch);
      if (std::abs(phi_mean) == 1.0) {
        s.event("degenerate probe batch at iteration " + std::to_string(t) + ", update skipped");
        continue;
      }

      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = 0; b < batch; ++b) {
        const double w = phi[b] - phi_mean;
        for (std::size_t i = 0; i < d; ++i) grad[i] += w * perturbations[b][i];
      }
      const double gn = l2_norm(grad);
      if (!(gn > 0.0)) continue;
      for (double& g : grad) g /= gn;

      double eps = dist / std::sqrt(static_cast<double>(t));
      bool stepped = false;
      for (std::size_t h = 0; h <= cfg.hsja.max_halvings; ++h, eps *= 0.5) {
        for (std::size_t i = 0; i < d; ++i) step[i] = xb[i] + eps * grad[i];
        step = s.clip(step);
        if (s.adversarial(step)) {
          stepped = true;
          break;
        }
      }
      if (!stepped) {
        s.event("step search failed at iteration " + std::to_string(t));
        continue;
      }

      if (const auto found = s.boundary_toward(step, theta, kMaxBisection)) {
        xb = found->outside;
        dist = l2_distance(xb, s.x_o());
      } else {
        s.event("iteration " + std::to_string(t) + " skipped after bisection retry");
      }
    }
  });
}

}  // namespace rsd
