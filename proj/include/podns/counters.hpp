#pragma once

#include <cstdint>

namespace podns {

// Linear-solve ledger for the cost accounting in reports.  Single-threaded
// pipeline; reset at run start.
struct SolveCounters {
  std::int64_t stokes_systems = 0;
  std::int64_t newton_systems = 0;   // one per Newton-Raphson iteration
  std::int64_t oseen_systems = 0;
  std::int64_t poisson_systems = 0;  // stream-function recoveries
  std::int64_t projection_systems = 0;  // mass solves in L2 projections
  std::int64_t recovery_systems = 0;    // pressure post-process solves

  SolveCounters& operator-=(const SolveCounters& o) {
    stokes_systems -= o.stokes_systems;
    newton_systems -= o.newton_systems;
    oseen_systems -= o.oseen_systems;
    poisson_systems -= o.poisson_systems;
    projection_systems -= o.projection_systems;
    recovery_systems -= o.recovery_systems;
    return *this;
  }
};

inline SolveCounters& solve_counters() {
  static SolveCounters counters;
  return counters;
}

inline void reset_solve_counters() { solve_counters() = SolveCounters{}; }

}  // namespace podns
