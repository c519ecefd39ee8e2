#include "gaugesep/simplex.hpp"

#include "gaugesep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaugesep::lp {
namespace {

// Entering threshold on reduced costs. Much tighter than the pivot tolerance: a vertex
// accepted early is suboptimal by about this much times the distance to the optimum.
constexpr double kReducedCostTol = 1e-13;

// Tableau with one constraint per row and the reduced-cost row stored last.
// Column layout: [x+ x- interleaved | slacks | artificials | rhs].
class Tableau {
public:
    Tableau(int rows, int cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

    // Snapshot of the constraint rows, used to rebuild the tableau from the basis.
    void freeze() { orig_ = t_.topRows(rows()); }

    double& at(int r, int c) { return t_(r, c); }
    double rhs(int r) const { return t_(r, t_.cols() - 1); }
    double& rhs(int r) { return t_(r, t_.cols() - 1); }
    int rows() const { return static_cast<int>(t_.rows()) - 1; }
    int cols() const { return static_cast<int>(t_.cols()) - 1; }
    int obj() const { return rows(); }
    std::vector<int>& basis() { return basis_; }

    void pivot(int r, int c) {
        t_.row(r) /= t_(r, c);
        for (int i = 0; i <= rows(); ++i) {
            if (i == r) continue;
            const double f = t_(i, c);
            if (f != 0.0) t_.row(i) -= f * t_.row(r);
        }
        basis_[r] = c;
    }

    // Reduced-cost row for the given column costs against the current basis.
    void price(const Vector& col_cost) {
        t_.row(obj()).setZero();
        t_.row(obj()).head(cols()) = col_cost.transpose();
        for (int i = 0; i < rows(); ++i) {
            const double cb = col_cost(basis_[i]);
            if (cb != 0.0) t_.row(obj()) -= cb * t_.row(i);
        }
    }

    void drop_row(int r) {
        const int last = static_cast<int>(t_.rows()) - 1;
        Matrix next(t_.rows() - 1, t_.cols());
        int k = 0;
        for (int i = 0; i <= last; ++i) {
            if (i != r) next.row(k++) = t_.row(i);
        }
        t_ = std::move(next);
        Matrix orig(orig_.rows() - 1, orig_.cols());
        k = 0;
        for (int i = 0; i < orig_.rows(); ++i) {
            if (i != r) orig.row(k++) = orig_.row(i);
        }
        orig_ = std::move(orig);
        basis_.erase(basis_.begin() + r);
    }

    // Recomputes B^-1 [A | b] from the original rows so that rounding from earlier pivots
    // does not accumulate, then reprices.
    void reinvert(const Vector& col_cost) {
        const int m = rows();
        if (m == 0) return;
        Matrix b(m, m);
        for (int i = 0; i < m; ++i) b.col(i) = orig_.col(basis_[i]);
        const Eigen::PartialPivLU<Matrix> lu(b);
        if (!(std::abs(lu.determinant()) > 0.0)) return;
        const Matrix fresh = lu.solve(orig_);
        if (!fresh.allFinite()) return;
        t_.topRows(m) = fresh;
        for (int i = 0; i < m; ++i) {
            t_.row(i)(basis_[i]) = 1.0;
            if (t_(i, cols()) < 0.0 && t_(i, cols()) > -1e-9) t_(i, cols()) = 0.0;
        }
        price(col_cost);
    }

    // Runs Bland-rule pivots until optimal or unbounded. `allowed` masks entering columns.
    Status iterate(const std::vector<bool>& allowed, const Vector& col_cost, int& iterations, int max_iterations) {
        int since_reinvert = 0;
        bool confirmed = false;
        const double cost_scale = 1.0 + col_cost.cwiseAbs().maxCoeff();
        while (true) {
            // Bland: lowest-index improving column. A column whose reduced cost is at noise
            // level and that has no admissible pivot is skipped rather than read as a ray.
            int enter = -1;
            int leave = -1;
            for (int j = 0; j < cols() && leave < 0; ++j) {
                const double rc = t_(obj(), j);
                if (!allowed[j] || rc >= -kReducedCostTol * cost_scale) continue;
                if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;  // rounding residue
                double best = std::numeric_limits<double>::infinity();
                for (int i = 0; i < rows(); ++i) {
                    const double a = t_(i, j);
                    if (a <= kPivotTol) continue;
                    const double ratio = std::max(rhs(i), 0.0) / a;
                    if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
                        best = ratio;
                        leave = i;
                    }
                }
                if (leave >= 0) {
                    enter = j;
                } else if (rc < -kPivotTol * cost_scale) {
                    return Status::Unbounded;
                }
            }
            if (enter < 0) {
                if (confirmed || since_reinvert == 0) return Status::Optimal;
                // Confirm optimality on a freshly inverted tableau.
                reinvert(col_cost);
                since_reinvert = 0;
                confirmed = true;
                continue;
            }
            confirmed = false;
            pivot(leave, enter);
            if (++iterations > max_iterations) {
                throw SolverError("simplex: iteration cap of " + std::to_string(max_iterations) + " reached");
            }
            if (++since_reinvert >= 32) {
                reinvert(col_cost);
                since_reinvert = 0;
            }
        }
    }

private:
    Matrix t_;
    Matrix orig_;
    std::vector<int> basis_;
};

}  // namespace

void Problem::add_le(const Vector& row, double rhs) {
    if (row.size() != num_vars()) throw InputError("lp: inequality row has wrong length");
    a_ub.conservativeResize(a_ub.rows() + 1, Eigen::NoChange);
    a_ub.row(a_ub.rows() - 1) = row.transpose();
    b_ub.conservativeResize(b_ub.size() + 1);
    b_ub(b_ub.size() - 1) = rhs;
}

void Problem::add_eq(const Vector& row, double rhs) {
    if (row.size() != num_vars()) throw InputError("lp: equality row has wrong length");
    a_eq.conservativeResize(a_eq.rows() + 1, Eigen::NoChange);
    a_eq.row(a_eq.rows() - 1) = row.transpose();
    b_eq.conservativeResize(b_eq.size() + 1);
    b_eq(b_eq.size() - 1) = rhs;
}

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "unknown";
}

Solution solve(const Problem& problem, int max_iterations) {
    const int n = problem.num_vars();
    const int m_ub = static_cast<int>(problem.a_ub.rows());
    const int m_eq = static_cast<int>(problem.a_eq.rows());
    const int m = m_ub + m_eq;
    if (problem.b_ub.size() != m_ub || problem.b_eq.size() != m_eq) {
        throw InputError("lp: right-hand side length mismatch");
    }
    if (!problem.cost.allFinite() || !problem.a_ub.allFinite() || !problem.b_ub.allFinite() ||
        !problem.a_eq.allFinite() || !problem.b_eq.allFinite()) {
        throw InputError("lp: non-finite problem data");
    }

    // Rows that need an artificial variable: ub rows with negative rhs, all eq rows.
    int num_art = m_eq;
    for (int i = 0; i < m_ub; ++i) {
        if (problem.b_ub(i) < 0.0) ++num_art;
    }
    const int slack0 = 2 * n;
    const int art0 = slack0 + m_ub;
    const int total = art0 + num_art;

    Tableau tab(m, total);
    int art = art0;
    for (int i = 0; i < m_ub; ++i) {
        const double sign = problem.b_ub(i) < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            tab.at(i, 2 * j) = sign * problem.a_ub(i, j);
            tab.at(i, 2 * j + 1) = -sign * problem.a_ub(i, j);
        }
        tab.at(i, slack0 + i) = sign;
        tab.rhs(i) = sign * problem.b_ub(i);
        if (sign > 0) {
            tab.basis()[i] = slack0 + i;
        } else {
            tab.at(i, art) = 1.0;
            tab.basis()[i] = art++;
        }
    }
    for (int k = 0; k < m_eq; ++k) {
        const int i = m_ub + k;
        const double sign = problem.b_eq(k) < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            tab.at(i, 2 * j) = sign * problem.a_eq(k, j);
            tab.at(i, 2 * j + 1) = -sign * problem.a_eq(k, j);
        }
        tab.rhs(i) = sign * problem.b_eq(k);
        tab.at(i, art) = 1.0;
        tab.basis()[i] = art++;
    }

    tab.freeze();
    Solution sol;
    std::vector<bool> allowed(total, true);

    if (num_art > 0) {
        Vector phase1 = Vector::Zero(total);
        phase1.tail(num_art).setConstant(1.0);
        tab.price(phase1);
        tab.iterate(allowed, phase1, sol.iterations, max_iterations);
        double scale = 1.0;
        if (m_ub > 0) scale = std::max(scale, problem.b_ub.cwiseAbs().maxCoeff());
        if (m_eq > 0) scale = std::max(scale, problem.b_eq.cwiseAbs().maxCoeff());
        if (-tab.rhs(tab.obj()) > 1e-9 * scale) {
            sol.status = Status::Infeasible;
            return sol;
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        for (int i = tab.rows() - 1; i >= 0; --i) {
            if (tab.basis()[i] < art0) continue;
            int col = -1;
            for (int j = 0; j < art0; ++j) {
                if (std::abs(tab.at(i, j)) > kPivotTol) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) {
                tab.pivot(i, col);
            } else {
                tab.drop_row(i);
            }
        }
        for (int j = art0; j < total; ++j) allowed[j] = false;
    }

    Vector phase2 = Vector::Zero(total);
    for (int j = 0; j < n; ++j) {
        phase2(2 * j) = problem.cost(j);
        phase2(2 * j + 1) = -problem.cost(j);
    }
    tab.price(phase2);
    sol.status = tab.iterate(allowed, phase2, sol.iterations, max_iterations);
    if (sol.status != Status::Optimal) return sol;

    Vector z = Vector::Zero(total);
    for (int i = 0; i < tab.rows(); ++i) z(tab.basis()[i]) = tab.rhs(i);
    sol.x.resize(n);
    for (int j = 0; j < n; ++j) sol.x(j) = z(2 * j) - z(2 * j + 1);
    sol.objective = problem.cost.dot(sol.x);
    std::vector<bool> basic(total, false);
    for (int b : tab.basis()) basic[b] = true;
    for (int i = 0; i < m_ub; ++i) {
        if (!basic[slack0 + i]) sol.active_rows.push_back(i);
    }
    return sol;
}

}  // namespace gaugesep::lp
