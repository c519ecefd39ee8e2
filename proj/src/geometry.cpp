#include "gaugesep/geometry.hpp"

#include "gaugesep/errors.hpp"

#include <cmath>
#include <string>

namespace gaugesep {
namespace {

void require_dim(const Vector& v, int n, const char* what) {
    if (v.size() != n) {
        throw InputError(std::string(what) + ": expected dimension " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
    }
}

// Two passes of modified Gram-Schmidt of v against the columns of q.
Vector orthogonalize(const Matrix& q, Vector v) {
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < q.cols(); ++j) {
            v -= q.col(j).dot(v) * q.col(j);
        }
    }
    return v;
}

}  // namespace

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) {
        throw InputError(std::string(what) + ": non-finite coordinate");
    }
}

Subspace::Subspace(int ambient_dim) : ambient_dim_(ambient_dim), basis_(ambient_dim, 0) {
    if (ambient_dim <= 0) throw InputError("subspace: ambient dimension must be positive");
}

Subspace::Subspace(int ambient_dim, Matrix orthonormal_basis)
    : ambient_dim_(ambient_dim), basis_(std::move(orthonormal_basis)) {
    if (ambient_dim <= 0) throw InputError("subspace: ambient dimension must be positive");
    if (basis_.rows() != ambient_dim) throw InputError("subspace: basis rows differ from ambient dimension");
    if (basis_.cols() > ambient_dim) throw InputError("subspace: more basis vectors than dimensions");
    const Matrix gram = basis_.transpose() * basis_;
    const Matrix id = Matrix::Identity(basis_.cols(), basis_.cols());
    if (basis_.cols() > 0 && (gram - id).cwiseAbs().maxCoeff() > kTolOrtho) {
        throw InputError("subspace: basis is not orthonormal");
    }
}

Vector Subspace::project(const Vector& v) const {
    require_dim(v, ambient_dim_, "subspace projection");
    if (dim() == 0) return Vector::Zero(ambient_dim_);
    return basis_ * (basis_.transpose() * v);
}

double Subspace::residual(const Vector& v) const {
    require_dim(v, ambient_dim_, "subspace residual");
    return orthogonalize(basis_, v).norm();
}

bool Subspace::contains(const Vector& v, double tol) const { return residual(v) <= tol; }

Subspace Subspace::extended_by(const Vector& v) const {
    require_dim(v, ambient_dim_, "subspace extension");
    Vector r = orthogonalize(basis_, v);
    const double norm = r.norm();
    if (norm <= kTolMembership) throw DegenerateError("subspace extension: vector already in subspace");
    Matrix q(ambient_dim_, dim() + 1);
    q.leftCols(dim()) = basis_;
    q.col(dim()) = r / norm;
    return Subspace(ambient_dim_, std::move(q));
}

PartialFunctional::PartialFunctional(Subspace d, Vector v) : domain(std::move(d)), values(std::move(v)) {
    if (values.size() != domain.dim()) {
        throw InputError("partial functional: " + std::to_string(values.size()) + " values for a " +
                         std::to_string(domain.dim()) + "-dimensional domain");
    }
    require_finite(values, "partial functional values");
}

double PartialFunctional::operator()(const Vector& v) const {
    require_dim(v, domain.ambient_dim(), "partial functional argument");
    if (domain.dim() == 0) return 0.0;
    return values.dot(domain.basis().transpose() * v);
}

Vector PartialFunctional::representer() const {
    if (domain.dim() == 0) return Vector::Zero(domain.ambient_dim());
    return domain.basis() * values;
}

bool PartialFunctional::is_zero(double tol) const {
    return values.size() == 0 || values.cwiseAbs().maxCoeff() <= tol;
}

Subspace span_basis(std::span<const Vector> vectors, int ambient_dim) {
    Matrix q(ambient_dim, 0);
    for (const Vector& v : vectors) {
        require_dim(v, ambient_dim, "span_basis");
        require_finite(v, "span_basis");
        const double scale = std::max(1.0, v.norm());
        Vector r = orthogonalize(q, v);
        const double norm = r.norm();
        if (norm <= kTolDependent * scale) continue;
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = r / norm;
    }
    return Subspace(ambient_dim, std::move(q));
}

std::vector<Vector> complement_basis(const Subspace& s) {
    const int n = s.ambient_dim();
    Matrix q = s.basis();
    std::vector<Vector> out;
    for (int i = 0; i < n && q.cols() < n; ++i) {
        Vector r = orthogonalize(q, Vector::Unit(n, i));
        const double norm = r.norm();
        if (norm <= kTolDependent) continue;
        r /= norm;
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = r;
        out.push_back(std::move(r));
    }
    return out;
}

Decomposition decompose(const Vector& y, const Subspace& s, const Vector& x) {
    const int n = s.ambient_dim();
    require_dim(y, n, "decompose: y");
    require_dim(x, n, "decompose: x");
    const Vector rx = orthogonalize(s.basis(), x);
    const double rx2 = rx.squaredNorm();
    if (std::sqrt(rx2) <= kTolMembership) throw DegenerateError("decompose: x lies in S");
    const Vector ry = orthogonalize(s.basis(), y);
    const double t = rx.dot(ry) / rx2;
    if ((ry - t * rx).norm() > kTolMembership) throw InputError("decompose: y is outside span(S u {x})");
    Decomposition d;
    d.t = t;
    d.s_coords = s.dim() == 0 ? Vector(0) : Vector(s.basis().transpose() * (y - t * x));
    return d;
}

Hyperplane kernel_hyperplane(const Vector& g) {
    require_finite(g, "kernel_hyperplane");
    const double norm = g.norm();
    if (norm <= 1e-12) throw DegenerateError("kernel_hyperplane: zero functional has no kernel hyperplane");
    return Hyperplane{g / norm};
}

}  // namespace gaugesep
