#include "skybench/planning.hpp"

namespace skybench {

std::string_view to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::Success: return "Success";
    case PlanStatus::NoPath: return "NoPath";
    case PlanStatus::StartBlocked: return "StartBlocked";
    case PlanStatus::GoalBlocked: return "GoalBlocked";
    case PlanStatus::NoFeasiblePath: return "NoFeasiblePath";
  }
  return "Unknown";
}

}  // namespace skybench
