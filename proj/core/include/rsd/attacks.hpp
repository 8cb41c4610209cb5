#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsd/classifiers.hpp"
#include "rsd/oracle.hpp"

namespace rsd {

enum class InitStrategy { kUniform };

struct HsjaParams {
  double b0 = 20.0;           // B_t = ceil(b0 * sqrt(t)) probes per gradient estimate
  double gamma = 1.0;         // bisection tolerance theta = gamma / (d * sqrt(d))
  std::size_t max_halvings = 30;
};

struct SurfreeParams {
  std::size_t probes_per_arc = 8;
  double initial_theta_max = 0.3;  // radians
  std::size_t refine_steps = 5;    // golden-ratio splits of the angle bracket
  std::size_t memory = 8;          // recent directions kept orthogonal to new ones
  double polish_tol = 1e-3;        // bisection tolerance, fraction of the segment
};

struct RaysParams {
  double rel_tol = 1e-3;  // radius bisection stops at hi - lo <= rel_tol * hi
};

struct AttackConfig {
  std::uint64_t budget = 2000;
  InitStrategy init = InitStrategy::kUniform;
  std::uint64_t init_cap = 100;
  std::uint64_t seed = 0;
  HsjaParams hsja;
  SurfreeParams surfree;
  RaysParams rays;

  void validate() const;
};

struct Milestone {
  std::uint64_t queries_used = 0;
  double best_distortion = 0.0;
  Point x;  // clipped point whose query recorded this milestone
};

enum class TerminationReason { kBudgetExhausted, kAlreadyAdversarial, kInitFailed };

std::string_view to_string(TerminationReason reason);

struct AttackTrace {
  std::string attack;
  std::vector<Milestone> milestones;
  std::optional<Point> final_adversarial;
  TerminationReason reason = TerminationReason::kBudgetExhausted;
  std::uint64_t queries_used = 0;
  std::vector<std::string> events;     // skipped updates, retries, degenerate batches
  std::vector<double> accepted_radii;  // RayS only: ray radius after each accepted flip

  std::optional<double> final_distortion() const;
};

// All three attacks see labels only. Every queried point is clipped to
// [0,1]^d first, distortion is the l2 distance from x_o to the clipped point,
// and a milestone is recorded whenever a query flips the label with a new
// best distortion. Queries are counted from the oracle's count at entry and
// never exceed cfg.budget. The first query is x_o itself; if it already
// disagrees with label_o the trace ends at distortion 0.
AttackTrace attack_hsja(DecisionOracle& oracle, PointView x_o, Label label_o,
                        const AttackConfig& cfg);
AttackTrace attack_surfree(DecisionOracle& oracle, PointView x_o, Label label_o,
                           const AttackConfig& cfg);
AttackTrace attack_rays(DecisionOracle& oracle, PointView x_o, Label label_o,
                        const AttackConfig& cfg);

enum class AttackKind { kHsja, kSurfree, kRays };

std::string_view to_string(AttackKind kind);
AttackKind attack_kind_from_string(std::string_view name);
AttackTrace run_attack(AttackKind kind, DecisionOracle& oracle, PointView x_o, Label label_o,
                       const AttackConfig& cfg);

// Distortion of the last milestone with queries_used <= at_budget; nullopt
// before the first milestone. Throws std::invalid_argument for at_budget = 0.
std::optional<double> best_distortion(const AttackTrace& trace, std::uint64_t at_budget);

void write_trace_csv(const AttackTrace& trace, std::ostream& out);
std::string trace_sidecar_json(const AttackTrace& trace, const AttackConfig& cfg);

}  // namespace rsd
