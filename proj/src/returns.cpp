#include <cmath>

#include "hrl/training.hpp"

namespace hrl {

namespace {

void check_complete(const EpisodeTrace& trace) {
  int high_steps = 0;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const Step& s = trace.steps[k];
    if (s.time != static_cast<int>(k) + 1) throw TraceError("trace times are not consecutive at step " + std::to_string(k));
    if (s.level != Level::High) continue;
    ++high_steps;
    if (s.subtask < 0) continue;
    for (int j = 0; j < trace.length; ++j) {
      const std::size_t idx = k + 1 + static_cast<std::size_t>(j);
      if (idx >= trace.steps.size() || trace.steps[idx].level != Level::Low || trace.steps[idx].subtask != s.subtask) {
        throw TraceError("subtask " + std::to_string(s.subtask) + " is incomplete");
      }
    }
  }
  if (high_steps != trace.length) throw TraceError("trace has " + std::to_string(high_steps) + " high-level steps for a sentence of length " + std::to_string(trace.length));
}

}  // namespace

std::vector<double> compute_returns(const EpisodeTrace& trace, double gamma) {
  check_complete(trace);
  const std::size_t n = trace.steps.size();
  std::vector<double> returns(n, 0.0);

  // High level: R_k = r_k + γ^N R_next, N = time gap to the next option.
  double next_return = 0.0;
  int next_time = -1;
  for (std::size_t k = n; k-- > 0;) {
    const Step& s = trace.steps[k];
    if (s.level != Level::High) continue;
    returns[k] = s.total_reward();
    if (next_time > 0) returns[k] += std::pow(gamma, next_time - s.time) * next_return;
    next_return = returns[k];
    next_time = s.time;
  }

  // Low level: discounted within the owning subtask only.
  for (std::size_t k = n; k-- > 0;) {
    const Step& s = trace.steps[k];
    if (s.level != Level::Low) continue;
    returns[k] = s.total_reward();
    const bool has_next = k + 1 < n && trace.steps[k + 1].level == Level::Low && trace.steps[k + 1].subtask == s.subtask;
    if (has_next) returns[k] += gamma * returns[k + 1];
  }
  return returns;
}

}  // namespace hrl
