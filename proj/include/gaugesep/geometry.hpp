#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

namespace gaugesep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Absolute tolerance for subspace membership and kernel tests (unit-scale data).
inline constexpr double kTolMembership = 1e-9;
/// Orthonormality tolerance for stored bases.
inline constexpr double kTolOrtho = 1e-10;
/// Residual below which a Gram-Schmidt candidate counts as dependent.
inline constexpr double kTolDependent = 1e-8;

/// Throws InputError unless every coordinate is finite.
void require_finite(const Vector& v, const char* what);

/// A linear subspace of R^n held as an orthonormal basis (columns of an n x k matrix).
class Subspace {
public:
    explicit Subspace(int ambient_dim);

    /// Takes ownership of columns that are already orthonormal; checked against kTolOrtho.
    Subspace(int ambient_dim, Matrix orthonormal_basis);

    int ambient_dim() const noexcept { return ambient_dim_; }
    int dim() const noexcept { return static_cast<int>(basis_.cols()); }
    const Matrix& basis() const noexcept { return basis_; }
    Vector basis_vector(int i) const { return basis_.col(i); }

    Matrix projector() const { return basis_ * basis_.transpose(); }
    Vector project(const Vector& v) const;
    /// Euclidean distance from v to the subspace.
    double residual(const Vector& v) const;
    bool contains(const Vector& v, double tol = kTolMembership) const;

    /// This subspace plus span{v}; existing basis columns are kept in place.
    Subspace extended_by(const Vector& v) const;

private:
    int ambient_dim_;
    Matrix basis_;
};

/// Linear functional known on a subspace through its values on the domain basis.
struct PartialFunctional {
    Subspace domain;
    Vector values;

    PartialFunctional(Subspace d, Vector v);

    /// f(v) for v in the domain (the orthogonal component of v is ignored).
    double operator()(const Vector& v) const;
    /// Coefficient vector w in the domain with f(v) = w . v on the domain.
    Vector representer() const;
    bool is_zero(double tol = 1e-15) const;
};

/// Hyperplane through the origin, Ker(g) for the stored unit normal.
struct Hyperplane {
    Vector normal;

    bool contains(const Vector& e, double tol = kTolMembership) const {
        return std::abs(normal.dot(e)) <= tol;
    }
};

/// Orthonormal basis for the span of `vectors` (modified Gram-Schmidt, two passes).
Subspace span_basis(std::span<const Vector> vectors, int ambient_dim);

/// Standard basis vectors, in index order, orthonormalized against S and each other.
std::vector<Vector> complement_basis(const Subspace& s);

struct Decomposition {
    Vector s_coords;  ///< coordinates of z against S.basis()
    double t = 0.0;
};

/// Splits y = z + t x with z in S. Requires x outside S and y in span(S u {x}).
Decomposition decompose(const Vector& y, const Subspace& s, const Vector& x);

/// Ker(g) for a nonzero coefficient vector g.
Hyperplane kernel_hyperplane(const Vector& g);

}  // namespace gaugesep
