#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rsd/classifiers.hpp"
#include "rsd/smoothing.hpp"

namespace rsd {

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("decision oracle: query budget exhausted") {}
};

struct QueryRecord {
  std::uint64_t index;
  Label label;
  Point x;
};

// Label-only access to a classifier, either the base classifier or its Monte
// Carlo smoothed version. Callers see labels and the query count; the noise
// level, sample count and vote tallies stay private. For a smoothed oracle
// the k-th query draws its noise from decision stream k, so a replayed query
// sequence reproduces every label.
class DecisionOracle {
 public:
  explicit DecisionOracle(std::shared_ptr<const Classifier> base,
                          std::optional<std::uint64_t> budget = std::nullopt);
  DecisionOracle(std::shared_ptr<const Classifier> base, const SmoothingConfig& cfg,
                 std::uint64_t stream_id, std::optional<std::uint64_t> budget = std::nullopt);

  DecisionOracle(const DecisionOracle&) = delete;
  DecisionOracle& operator=(const DecisionOracle&) = delete;

  // Counts exactly one query. Throws BudgetExhausted once the cap is reached
  // (the refused call is not counted).
  Label query(PointView x);

  std::uint64_t queries() const { return queries_.load(); }
  std::optional<std::uint64_t> budget() const { return budget_; }
  std::size_t dimension() const { return dimension_; }

  void set_logging(bool enabled) { logging_ = enabled; }
  const std::vector<QueryRecord>& log() const { return log_; }

 private:
  std::function<Label(PointView, std::uint64_t)> label_fn_;
  std::size_t dimension_;
  std::optional<std::uint64_t> budget_;
  std::atomic<std::uint64_t> queries_{0};
  bool logging_ = false;
  std::vector<QueryRecord> log_;
};

}  // namespace rsd
