#pragma once

#include "gaugesep/geometry.hpp"

#include <string>
#include <vector>

namespace gaugesep::lp {

inline constexpr double kPivotTol = 1e-9;

/// minimize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x free.
struct Problem {
    Vector cost;
    Matrix a_ub;
    Vector b_ub;
    Matrix a_eq;
    Vector b_eq;

    explicit Problem(int num_vars)
        : cost(Vector::Zero(num_vars)), a_ub(0, num_vars), b_ub(0), a_eq(0, num_vars), b_eq(0) {}

    int num_vars() const { return static_cast<int>(cost.size()); }
    void add_le(const Vector& row, double rhs);
    void add_eq(const Vector& row, double rhs);
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    Vector x;
    double objective = 0.0;
    /// Inequality rows whose slack is nonbasic at the optimal vertex.
    std::vector<int> active_rows;
    int iterations = 0;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
/// Free variables are split as x = x+ - x-. Throws SolverError if the iteration cap is hit.
Solution solve(const Problem& problem, int max_iterations = 20000);

std::string to_string(Status s);

}  // namespace gaugesep::lp
