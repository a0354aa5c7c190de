#include <algorithm>
#include <cmath>

#include "asym/search.hpp"

namespace asym {

std::string to_string(const SearchBudget& b) {
  return b.mode == SearchBudget::Mode::kWallClock ? std::to_string(b.limit) + "ms"
                                                  : std::to_string(b.limit) + "evals";
}

BudgetTracker::BudgetTracker(SearchBudget budget)
    : budget_(budget), start_(std::chrono::steady_clock::now()) {}

double BudgetTracker::elapsed_ms() const {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
      .count();
}

bool BudgetTracker::exhausted() const {
  if (budget_.mode == SearchBudget::Mode::kNodeCount)
    return evals_ + reserved_ >= budget_.limit;
  const double limit = static_cast<double>(budget_.limit);
  const double elapsed = elapsed_ms();
  return elapsed >= limit || elapsed + mean_eval_ms() * (1 + reserved_) > limit;
}

std::int64_t BudgetTracker::remaining() const {
  if (budget_.mode == SearchBudget::Mode::kNodeCount)
    return std::max<std::int64_t>(0, budget_.limit - evals_);
  return std::max<std::int64_t>(
      0, budget_.limit - static_cast<std::int64_t>(std::ceil(elapsed_ms())));
}

}  // namespace asym
