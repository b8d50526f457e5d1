#pragma once

namespace wnc {

/// Shared numeric knobs. Defaults: feasibility tolerance 1e-9, certificate
/// gap target 1e-8, exact-mode enumeration refuses beyond 1e7 solver calls.
struct SolverOptions {
  double feas_tol = 1e-9;
  double gap_target = 1e-8;
  int max_iter = 20000;                  // first-order iterations per solve
  long long enum_budget = 10'000'000;    // exact-mode cap on inner solver calls
  int beam_width = 32;
};

}  // namespace wnc
