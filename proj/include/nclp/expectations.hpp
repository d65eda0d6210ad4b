#pragma once

// Trace-preserving conditional expectations onto *-subalgebras: spectral
// averaging onto the commutative algebra generated by a Hermitian element,
// and block pinching onto a block-diagonal algebra. Jensen gaps on the
// commutative range and the operator Jensen gap on the lifted space.

#include "nclp/matrix.hpp"
#include "nclp/superop.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nclp::expectations {

inline constexpr double kDefaultClusterTol = 1e-8;

/// Mutually orthogonal spectral projections of a Hermitian element, with
/// eigenvalues grouped into clusters of spread <= cluster_tol * (1 + |delta|).
struct SpectralProjections {
    std::vector<ComplexMatrix> projections;
    std::vector<double> values;  // cluster means
};

inline SpectralProjections spectral_projections(const HermitianMatrix& delta,
                                                double cluster_tol = kDefaultClusterTol) {
    const Spectrum s = eigh(delta);
    const int n = delta.dim();
    const double scale_tol =
        cluster_tol * (1.0 + (n > 0 ? s.eigenvalues.cwiseAbs().maxCoeff() : 0.0));
    SpectralProjections out;
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        while (stop < n && s.eigenvalues[stop] - s.eigenvalues[start] <= scale_tol) ++stop;
        ComplexMatrix p = ComplexMatrix::Zero(n, n);
        double mean = 0.0;
        for (int i = start; i < stop; ++i) {
            p += s.eigenvectors.col(i) * s.eigenvectors.col(i).adjoint();
            mean += s.eigenvalues[i];
        }
        out.projections.push_back(std::move(p));
        out.values.push_back(mean / (stop - start));
        start = stop;
    }
    return out;
}

class ConditionalExpectation {
public:
    enum class Kind { spectral_averaging, block_pinching };

    /// Unique trace-preserving expectation onto the commutative algebra
    /// spanned by the spectral projections of delta:
    ///   E(x) = sum_k Tr(P_k x)/Tr(P_k) * P_k.
    static ConditionalExpectation spectral_averaging(const HermitianMatrix& delta,
                                                     double cluster_tol = kDefaultClusterTol) {
        ConditionalExpectation e;
        e.kind_ = Kind::spectral_averaging;
        e.dim_ = delta.dim();
        SpectralProjections sp = spectral_projections(delta, cluster_tol);
        e.projections_ = std::move(sp.projections);
        e.values_ = std::move(sp.values);
        e.cluster_tol_ = cluster_tol;
        e.commutative_range_ = true;
        return e;
    }

    /// Pinching x -> sum_i Q_i x Q_i for an orthogonal resolution {Q_i}.
    static ConditionalExpectation block_pinching(std::vector<ComplexMatrix> family) {
        if (family.empty()) throw std::invalid_argument("block_pinching: empty family");
        const Eigen::Index n = family.front().rows();
        ComplexMatrix sum = ComplexMatrix::Zero(n, n);
        bool all_rank_one = true;
        for (std::size_t i = 0; i < family.size(); ++i) {
            const ComplexMatrix& q = family[i];
            if (q.rows() != n || q.cols() != n)
                throw std::invalid_argument("block_pinching: inconsistent dimensions");
            if ((q - q.adjoint()).norm() > 1e-10 * std::max(1.0, q.norm()) ||
                (q * q - q).norm() > 1e-10 * std::max(1.0, q.norm()))
                throw std::invalid_argument("block_pinching: member " + std::to_string(i) +
                                            " is not an orthogonal projection");
            for (std::size_t j = 0; j < i; ++j)
                if ((q * family[j]).norm() > 1e-10 * std::max(1.0, q.norm() * family[j].norm()))
                    throw std::invalid_argument("block_pinching: projections are not orthogonal");
            sum += q;
            if (std::abs(q.trace().real() - 1.0) > 1e-8) all_rank_one = false;
        }
        if ((sum - ComplexMatrix::Identity(n, n)).norm() > 1e-10 * std::sqrt(double(n)))
            throw std::invalid_argument("block_pinching: family does not resolve the identity");
        ConditionalExpectation e;
        e.kind_ = Kind::block_pinching;
        e.dim_ = static_cast<int>(n);
        e.projections_ = std::move(family);
        e.commutative_range_ = all_rank_one;
        return e;
    }

    /// Pinching onto contiguous diagonal blocks of the given sizes.
    static ConditionalExpectation block_pinching_from_sizes(const std::vector<int>& sizes) {
        int n = 0;
        for (int s : sizes) {
            if (s <= 0) throw std::invalid_argument("block_pinching: sizes must be positive");
            n += s;
        }
        std::vector<ComplexMatrix> family;
        int offset = 0;
        for (int s : sizes) {
            ComplexMatrix q = ComplexMatrix::Zero(n, n);
            q.block(offset, offset, s, s) = ComplexMatrix::Identity(s, s);
            family.push_back(std::move(q));
            offset += s;
        }
        ConditionalExpectation e = block_pinching(std::move(family));
        e.block_sizes_ = sizes;
        return e;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool commutative_range() const { return commutative_range_; }
    double cluster_tol() const { return cluster_tol_; }
    const std::vector<ComplexMatrix>& projections() const { return projections_; }
    const std::vector<int>& block_sizes() const { return block_sizes_; }

    ComplexMatrix apply(const ComplexMatrix& x) const {
        if (x.rows() != dim_ || x.cols() != dim_)
            throw std::invalid_argument("ConditionalExpectation::apply: dimension mismatch");
        ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
        if (kind_ == Kind::spectral_averaging) {
            for (const ComplexMatrix& p : projections_) {
                const Complex t = (p * x).trace();
                out += (t / p.trace().real()) * p;
            }
        } else {
            for (const ComplexMatrix& q : projections_) out += q * x * q;
        }
        return out;
    }

    HermitianMatrix apply(const HermitianMatrix& x) const { return HermitianMatrix(apply(x.mat())); }

    PositiveMatrix apply(const PositiveMatrix& x, double psd_tol = 1e-9) const {
        return PositiveMatrix(apply(x.hermitian()), psd_tol);
    }

private:
    Kind kind_ = Kind::spectral_averaging;
    int dim_ = 0;
    std::vector<ComplexMatrix> projections_;
    std::vector<double> values_;
    std::vector<int> block_sizes_;
    double cluster_tol_ = 0.0;
    bool commutative_range_ = false;
};

/// E(x^alpha) - (E x)^alpha for alpha >= 1. Positive semidefinite when the
/// range is commutative; refuses other ranges, where the sign is not a
/// theorem.
inline HermitianMatrix jensen_gap(const ConditionalExpectation& e, const PositiveMatrix& x,
                                  double alpha) {
    if (alpha < 1.0) throw std::domain_error("jensen_gap: alpha must be >= 1");
    if (!e.commutative_range())
        throw std::invalid_argument("jensen_gap: expectation range is not commutative");
    const HermitianMatrix lhs = e.apply(power(x, alpha).hermitian());
    const PositiveMatrix ex = e.apply(x);
    return lhs - power(ex, alpha).hermitian();
}

/// The expectation as an orthogonal projection on the Hilbert-Schmidt space.
inline SuperOperator hs_projection_superop(const ConditionalExpectation& e) {
    const int n = e.dim();
    ComplexMatrix op(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n);
    ComplexMatrix unit = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            unit(i, j) = 1.0;
            op.col(static_cast<Eigen::Index>(j) * n + i) = vec(e.apply(unit));
            unit(i, j) = 0.0;
        }
    }
    return SuperOperator(n, std::move(op));
}

/// Ehat S^alpha Ehat - (Ehat S Ehat)^alpha on the lifted space. For
/// alpha in [1,2] (operator convexity of t^alpha) this is PSD on
/// range(Ehat); for alpha in (0,1) concavity reverses the order.
inline SuperOperator operator_jensen_gap(const SuperOperator& ehat, const SuperOperator& s,
                                         double alpha) {
    if (!(alpha >= 1.0 && alpha <= 2.0))
        throw std::domain_error("operator_jensen_gap: alpha must lie in [1,2]");
    if (!ehat.hs_self_adjoint(1e-10))
        throw std::invalid_argument("operator_jensen_gap: projection is not HS-self-adjoint");
    const SuperOperator pinched = ehat * s * ehat;
    const SuperOperator lhs = ehat * superop_power(s, alpha) * ehat;
    return lhs - superop_power(pinched, alpha);
}

/// Smallest eigenvalue of a self-adjoint superoperator compressed to
/// range(proj); the complement block is ignored.
inline double min_eigenvalue_on_range(const SuperOperator& g, const SuperOperator& proj,
                                      double range_cut = 0.5) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> basis(proj.op());
    if (basis.info() != Eigen::Success)
        throw std::runtime_error("min_eigenvalue_on_range: projection eigensolver failed");
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < basis.eigenvalues().size(); ++i)
        if (basis.eigenvalues()[i] > range_cut) cols.push_back(i);
    if (cols.empty()) return 0.0;
    ComplexMatrix b(proj.op().rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) b.col(static_cast<Eigen::Index>(k)) =
        basis.eigenvectors().col(cols[k]);
    ComplexMatrix restricted = b.adjoint() * g.op() * b;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (restricted + restricted.adjoint()));
    return solver.eigenvalues().minCoeff();
}

}  // namespace nclp::expectations
