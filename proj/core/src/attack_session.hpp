#pragma once

#include <limits>
#include <optional>
#include <string>

#include "rsd/attacks.hpp"
#include "rsd/probes.hpp"
#include "rsd/random.hpp"

namespace rsd::detail {

// Thrown by Session before a query that would exceed the attack budget.
struct BudgetStop {};

// Query gateway shared by the attacks: clips, counts, and records milestones.
class Session {
 public:
  Session(DecisionOracle& oracle, PointView x_o, Label label_o, const AttackConfig& cfg,
          AttackTrace& trace);

  Label label(PointView x);
  bool adversarial(PointView x) { return label(x) != label_o_; }

  Point clip(PointView x) const;
  std::uint64_t used() const { return oracle_.queries() - start_; }
  std::uint64_t remaining() const { return budget_ - used(); }
  std::size_t dimension() const { return x_o_.size(); }
  const Point& x_o() const { return x_o_; }
  Label label_o() const { return label_o_; }
  double best() const { return best_; }
  AttackTrace& trace() { return trace_; }
  void event(std::string text) { trace_.events.push_back(std::move(text)); }

  // Bisection from x_o toward an adversarial point, with one retry when the
  // re-queried endpoints disagree with the expected labels.
  std::optional<BoundarySearch> boundary_toward(PointView x_adv, double tol,
                                                std::size_t max_steps);

  // Uniform samples in [0,1]^d until one is adversarial, at most cfg.init_cap.
  std::optional<Point> initialize(CounterRng& rng);

  // Queries x_o; true if the attack can proceed.
  bool check_origin();

  void finish(TerminationReason reason);

 private:
  DecisionOracle& oracle_;
  Point x_o_;
  Label label_o_;
  std::uint64_t budget_;
  std::uint64_t init_cap_;
  std::uint64_t start_;
  AttackTrace& trace_;
  double best_ = std::numeric_limits<double>::infinity();
};

// Runs body(session), which returns its own termination reason, and converts
// budget exhaustion into a finished trace.
template <typename Body>
AttackTrace run_session(std::string name, DecisionOracle& oracle, PointView x_o, Label label_o,
                        const AttackConfig& cfg, Body body) {
  cfg.validate();
  AttackTrace trace;
  trace.attack = std::move(name);
  Session session(oracle, x_o, label_o, cfg, trace);
  try {
    if (!session.check_origin()) {
      session.finish(TerminationReason::kAlreadyAdversarial);
      return trace;
    }
    session.finish(body(session));
  } catch (const BudgetStop&) {
    session.finish(TerminationReason::kBudgetExhausted);
  } catch (const BudgetExhausted&) {
    session.finish(TerminationReason::kBudgetExhausted);
  }
  return trace;
}

}  // namespace rsd::detail
