#pragma once

// A small exact-rational linear-program solver: two-phase primal simplex on
// a dense tableau with Bland's rule (no cycling), plus a brute-force vertex
// enumerator used as an independent cross-check on tiny systems.

#include <functional>
#include <vector>

#include "fairdiv/rational.hpp"

namespace fairdiv {

struct LpResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::optimal;
    Rational objective;
    std::vector<Rational> x;
};

// maximize c.x  subject to  A x = b, x >= 0.
LpResult solve_lp_eq(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                     const std::vector<Rational>& c);

// Visits every basic feasible solution of {A x = b, x >= 0} (A assumed full
// row rank); intended for cross-validation where choose(#vars, #rows) is
// small.  Returns the number of vertices visited.
std::size_t for_each_vertex(const std::vector<std::vector<Rational>>& A,
                            const std::vector<Rational>& b,
                            const std::function<void(const std::vector<Rational>&)>& visit);

}  // namespace fairdiv
