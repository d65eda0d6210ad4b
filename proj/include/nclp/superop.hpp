#pragma once

// Linear maps on the matrix space itself, stored as N^2 x N^2 matrices
// acting on column-major vectorizations. The inner product on the lifted
// space is Hilbert-Schmidt: <x, y> = Tr(x* y).

#include "nclp/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace nclp {

inline ComplexVector vec(const ComplexMatrix& m) {
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, int n) {
    return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

inline Complex hs_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    return (x.adjoint() * y).trace();
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

class SuperOperator {
public:
    SuperOperator(int dim, ComplexMatrix op) : dim_(dim), op_(std::move(op)) {
        if (op_.rows() != op_.cols() || op_.rows() != static_cast<Eigen::Index>(dim_) * dim_)
            throw std::invalid_argument("SuperOperator: operator must be dim^2 x dim^2");
    }

    static SuperOperator identity(int n) {
        return SuperOperator(n, ComplexMatrix::Identity(n * n, n * n));
    }
    static SuperOperator zero(int n) { return SuperOperator(n, ComplexMatrix::Zero(n * n, n * n)); }

    int dim() const { return dim_; }
    const ComplexMatrix& op() const { return op_; }

    ComplexMatrix apply(const ComplexMatrix& h) const {
        if (h.rows() != dim_ || h.cols() != dim_)
            throw std::invalid_argument("SuperOperator::apply: dimension mismatch");
        return unvec(op_ * vec(h), dim_);
    }

    HermitianMatrix apply(const HermitianMatrix& h) const {
        return HermitianMatrix(apply(h.mat()));
    }

    /// Self-adjointness with respect to the Hilbert-Schmidt inner product.
    bool hs_self_adjoint(double tol = 1e-12) const {
        const double scale = std::max(op_.norm(), 1e-300);
        return (op_ - op_.adjoint()).norm() <= tol * scale;
    }

    double norm() const { return op_.norm(); }

    SuperOperator operator+(const SuperOperator& o) const {
        check_dim(o);
        return SuperOperator(dim_, op_ + o.op_);
    }
    SuperOperator operator-(const SuperOperator& o) const {
        check_dim(o);
        return SuperOperator(dim_, op_ - o.op_);
    }
    SuperOperator operator*(const SuperOperator& o) const {
        check_dim(o);
        return SuperOperator(dim_, op_ * o.op_);
    }
    friend SuperOperator operator*(Complex c, const SuperOperator& s) {
        return SuperOperator(s.dim_, c * s.op_);
    }
    friend SuperOperator operator*(double c, const SuperOperator& s) {
        return SuperOperator(s.dim_, c * s.op_);
    }

private:
    void check_dim(const SuperOperator& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("SuperOperator: dimension mismatch");
    }

    int dim_;
    ComplexMatrix op_;
};

/// h -> x h. Column-major vec gives L_x = I (x) x as a Kronecker product.
inline SuperOperator left_superop(const HermitianMatrix& x) {
    const int n = x.dim();
    return SuperOperator(n, kron(ComplexMatrix::Identity(n, n), x.mat()));
}

/// h -> h x, i.e. x^T (x) I on column-major vectorizations.
inline SuperOperator right_superop(const HermitianMatrix& x) {
    const int n = x.dim();
    return SuperOperator(n, kron(x.mat().transpose(), ComplexMatrix::Identity(n, n)));
}

/// Spectral power of a self-adjoint PSD superoperator on the lifted space.
inline SuperOperator superop_power(const SuperOperator& s, double alpha) {
    if (alpha < 0.0) throw std::domain_error("superop_power: exponent must be >= 0");
    if (!s.hs_self_adjoint())
        throw std::invalid_argument("superop_power: operator is not HS-self-adjoint");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(s.op());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("superop_power: eigensolver did not converge");
    RealVector ev = solver.eigenvalues();
    const double scale = ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
    if (ev.size() > 0 && ev[0] < -kPsdTol * scale)
        throw std::invalid_argument("superop_power: spectrum reaches " + std::to_string(ev[0]) +
                                    ", below the PSD tolerance at scale " + std::to_string(scale));
    RealVector powered(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double lambda = std::max(ev[i], 0.0);
        powered[i] = (lambda == 0.0) ? (alpha == 0.0 ? 1.0 : 0.0) : std::pow(lambda, alpha);
    }
    ComplexMatrix out = solver.eigenvectors() * powered.asDiagonal() *
                        solver.eigenvectors().adjoint();
    return SuperOperator(s.dim(), std::move(out));
}

}  // namespace nclp
