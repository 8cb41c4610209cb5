#include "rsd/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>

#include "attack_session.hpp"
#include "rsd/format.hpp"

namespace rsd {

void AttackConfig::validate() const {
  if (budget == 0) throw std::invalid_argument("attack config: budget must be >= 1");
  if (init_cap == 0) throw std::invalid_argument("attack config: init_cap must be >= 1");
  if (!(hsja.b0 >= 1.0)) throw std::invalid_argument("attack config: hsja.b0 must be >= 1");
  if (!(hsja.gamma > 0.0)) throw std::invalid_argument("attack config: hsja.gamma must be > 0");
  if (surfree.probes_per_arc < 1) {
    throw std::invalid_argument("attack config: surfree.probes_per_arc must be >= 1");
  }
  if (!(surfree.initial_theta_max > 0.0 && surfree.initial_theta_max < std::numbers::pi / 2)) {
    throw std::invalid_argument("attack config: surfree.initial_theta_max must be in (0, pi/2)");
  }
  if (!(surfree.polish_tol > 0.0)) {
    throw std::invalid_argument("attack config: surfree.polish_tol must be > 0");
  }
  if (!(rays.rel_tol > 0.0 && rays.rel_tol < 1.0)) {
    throw std::invalid_argument("attack config: rays.rel_tol must be in (0, 1)");
  }
}

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kBudgetExhausted: return "budget_exhausted";
    case TerminationReason::kAlreadyAdversarial: return "already_adversarial";
    case TerminationReason::kInitFailed: return "init_failed";
  }
  return "unknown";
}

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kHsja: return "hsja";
    case AttackKind::kSurfree: return "surfree";
    case AttackKind::kRays: return "rays";
  }
  return "unknown";
}

AttackKind attack_kind_from_string(std::string_view name) {
  if (name == "hsja") return AttackKind::kHsja;
  if (name == "surfree") return AttackKind::kSurfree;
  if (name == "rays") return AttackKind::kRays;
  throw std::invalid_argument("unknown attack '" + std::string(name) + "'");
}

AttackTrace run_attack(AttackKind kind, DecisionOracle& oracle, PointView x_o, Label label_o,
                       const AttackConfig& cfg) {
  switch (kind) {
    case AttackKind::kHsja: return attack_hsja(oracle, x_o, label_o, cfg);
    case AttackKind::kSurfree: return attack_surfree(oracle, x_o, label_o, cfg);
    case AttackKind::kRays: return attack_rays(oracle, x_o, label_o, cfg);
  }
  throw std::invalid_argument("unknown attack kind");
}

std::optional<double> AttackTrace::final_distortion() const {
  if (milestones.empty()) return std::nullopt;
  return milestones.back().best_distortion;
}

std::optional<double> best_distortion(const AttackTrace& trace, std::uint64_t at_budget) {
  if (at_budget == 0) throw std::invalid_argument("best_distortion: at_budget must be >= 1");
  std::optional<double> best;
  for (const Milestone& m : trace.milestones) {
    if (m.queries_used > at_budget) break;
    best = m.best_distortion;
  }
  return best;
}

void write_trace_csv(const AttackTrace& trace, std::ostream& out) {
  out << "queries_used,best_distortion\n";
  for (const Milestone& m : trace.milestones) {
    out << m.queries_used << ',' << fmt_num(m.best_distortion) << '\n';
  }
}

std::string trace_sidecar_json(const AttackTrace& trace, const AttackConfig& cfg) {
  nlohmann::ordered_json j;
  j["attack"] = trace.attack;
  j["seed"] = cfg.seed;
  j["budget"] = cfg.budget;
  j["init_cap"] = cfg.init_cap;
  j["queries_used"] = trace.queries_used;
  j["reason"] = std::string(to_string(trace.reason));
  if (const auto d = trace.final_distortion()) {
    j["final_distortion"] = fmt_num(*d);
  } else {
    j["final_distortion"] = nullptr;
  }
  if (trace.final_adversarial) {
    auto& arr = j["final_adversarial"] = nlohmann::ordered_json::array();
    for (double v : *trace.final_adversarial) arr.push_back(fmt_num(v));
  } else {
    j["final_adversarial"] = nullptr;
  }
  j["hsja"] = {{"b0", cfg.hsja.b0}, {"gamma", cfg.hsja.gamma},
               {"max_halvings", cfg.hsja.max_halvings}};
  j["surfree"] = {{"probes_per_arc", cfg.surfree.probes_per_arc},
                  {"initial_theta_max", cfg.surfree.initial_theta_max},
                  {"refine_steps", cfg.surfree.refine_steps},
                  {"memory", cfg.surfree.memory},
                  {"polish_tol", cfg.surfree.polish_tol}};
  j["rays"] = {{"rel_tol", cfg.rays.rel_tol}};
  j["events"] = trace.events;
  return j.dump(2) + "\n";
}

namespace detail {

Session::Session(DecisionOracle& oracle, PointView x_o, Label label_o, const AttackConfig& cfg,
                 AttackTrace& trace)
    : oracle_(oracle),
      x_o_(x_o.begin(), x_o.end()),
      label_o_(label_o),
      budget_(cfg.budget),
      init_cap_(cfg.init_cap),
      start_(oracle.queries()),
      trace_(trace) {
  if (x_o.size() != oracle.dimension()) throw std::invalid_argument("attack: dimension mismatch");
  for (double v : x_o) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("attack: x_o must lie in [0,1]^d");
  }
}

Point Session::clip(PointView x) const {
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], 0.0, 1.0);
  return out;
}

Label Session::label(PointView x) {
  if (used() >= budget_) throw BudgetStop{};
  Point xc = clip(x);
  const Label y = oracle_.query(xc);
  if (y != label_o_) {
    const double dist = l2_distance(xc, x_o_);
    if (dist < best_) {
      best_ = dist;
      trace_.milestones.push_back({used(), dist, xc});
      trace_.final_adversarial = std::move(xc);
    }
  }
  return y;
}

bool Session::check_origin() { return !adversarial(x_o_); }

std::optional<BoundarySearch> Session::boundary_toward(PointView x_adv, double tol,
                                                       std::size_t max_steps) {
  const LabelQuery query = [this](PointView x) { return label(x); };
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      BoundarySearch found = binary_search_boundary(query, x_o_, x_adv, tol, max_steps);
      if (found.inside_label == label_o_) return found;
      event("bisection endpoints swapped labels at query " + std::to_string(used()));
    } catch (const SearchPreconditionError&) {
      event("bisection precondition failed at query " + std::to_string(used()));
    }
  }
  return std::nullopt;
}

std::optional<Point> Session::initialize(CounterRng& rng) {
  Point x(dimension());
  for (std::uint64_t k = 0; k < init_cap_; ++k) {
    for (double& v : x) v = rng.uniform(0.0, 1.0);
    if (adversarial(x)) return x;
  }
  event("no adversarial point among " + std::to_string(init_cap_) + " uniform samples");
  return std::nullopt;
}

void Session::finish(TerminationReason reason) {
  trace_.reason = reason;
  trace_.queries_used = used();
}

}  // namespace detail

}  // namespace rsd
