#include "rsd/oracle.hpp"

namespace rsd {

DecisionOracle::DecisionOracle(std::shared_ptr<const Classifier> base,
                               std::optional<std::uint64_t> budget)
    : dimension_(base->dimension()), budget_(budget) {
  label_fn_ = [base = std::move(base)](PointView x, std::uint64_t) { return base->decide(x); };
}

DecisionOracle::DecisionOracle(std::shared_ptr<const Classifier> base, const SmoothingConfig& cfg,
                               std::uint64_t stream_id, std::optional<std::uint64_t> budget)
    : dimension_(base->dimension()), budget_(budget) {
  label_fn_ = [base = std::move(base), cfg, stream = RandomStream(cfg.seed, stream_id)](
                  PointView x, std::uint64_t index) {
    // same majority rule as smoothed_decide, without the confidence bound
    const std::uint64_t ones = count_class_one_votes(*base, cfg.sigma, cfg.n, x, stream.decision(index));
    return ones > cfg.n - ones ? Label::kOne : Label::kZero;
  };
}

Label DecisionOracle::query(PointView x) {
  const std::uint64_t index = queries_.load();
  if (budget_ && index >= *budget_) throw BudgetExhausted();
  const Label y = label_fn_(x, index);
  queries_.fetch_add(1);
  if (logging_) log_.push_back({index, y, Point(x.begin(), x.end())});
  return y;
}

}  // namespace rsd
