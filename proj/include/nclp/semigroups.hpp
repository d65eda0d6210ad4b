#pragma once

// Trace-preserving, unital, positive semigroups on the matrix algebra:
// generators from unitary mixing and from pinching relaxation, matrix
// exponentials by scaling-and-squaring, and resolvents (lambda - L)^(-1).

#include "nclp/expectations.hpp"
#include "nclp/matrix.hpp"
#include "nclp/superop.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nclp::semigroups {

class Generator {
public:
    enum class Kind { unitary_mixing, pinching_relaxation, zero };

    Generator(Kind kind, SuperOperator l) : kind_(kind), l_(std::move(l)) {}

    static Generator zero(int n) { return Generator(Kind::zero, SuperOperator::zero(n)); }

    Kind kind() const { return kind_; }
    int dim() const { return l_.dim(); }
    const SuperOperator& superop() const { return l_; }

private:
    Kind kind_;
    SuperOperator l_;
};

/// L(x) = sum_j r_j (u_j x u_j* - x). Completely positive jumps minus the
/// escape rate; unital and trace-preserving by construction.
inline Generator make_unitary_mixing_generator(const std::vector<ComplexMatrix>& unitaries,
                                               const std::vector<double>& rates) {
    if (unitaries.empty() || unitaries.size() != rates.size())
        throw std::invalid_argument("unitary mixing: need matching nonempty unitaries/rates");
    const int n = static_cast<int>(unitaries.front().rows());
    ComplexMatrix l = ComplexMatrix::Zero(static_cast<Eigen::Index>(n) * n,
                                          static_cast<Eigen::Index>(n) * n);
    const ComplexMatrix lifted_id = ComplexMatrix::Identity(static_cast<Eigen::Index>(n) * n,
                                                            static_cast<Eigen::Index>(n) * n);
    for (std::size_t j = 0; j < unitaries.size(); ++j) {
        const ComplexMatrix& u = unitaries[j];
        if (u.rows() != n || u.cols() != n)
            throw std::invalid_argument("unitary mixing: inconsistent dimensions");
        if ((u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm() > 1e-10 * std::sqrt(double(n)))
            throw std::invalid_argument("unitary mixing: member " + std::to_string(j) +
                                        " is not unitary");
        if (!(rates[j] > 0.0)) throw std::invalid_argument("unitary mixing: rates must be positive");
        // x -> u x u* vectorizes to conj(u) (x) u
        l += rates[j] * (kron(u.conjugate(), u) - lifted_id);
    }
    return Generator(Generator::Kind::unitary_mixing, SuperOperator(n, std::move(l)));
}

/// L = E - Id, relaxing toward the range of the expectation with closed
/// form T_t = e^(-t) Id + (1 - e^(-t)) E.
inline Generator make_pinching_generator(const expectations::ConditionalExpectation& e) {
    SuperOperator ehat = expectations::hs_projection_superop(e);
    SuperOperator l = ehat - SuperOperator::identity(e.dim());
    return Generator(Generator::Kind::pinching_relaxation, std::move(l));
}

/// exp(M) by scaling-and-squaring with the Taylor series truncated when a
/// term drops below 1e-18 of the running sum.
inline ComplexMatrix expm(const ComplexMatrix& m) {
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // induced-inf bound
    int squarings = 0;
    if (norm > 1.0) squarings = static_cast<int>(std::ceil(std::log2(norm)));
    const ComplexMatrix scaled = m / std::pow(2.0, squarings);
    ComplexMatrix sum = ComplexMatrix::Identity(m.rows(), m.cols());
    ComplexMatrix term = sum;
    for (int k = 1; k <= 512; ++k) {
        term = (scaled * term) / static_cast<double>(k);
        sum += term;
        if (term.norm() < 1e-18 * sum.norm()) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

inline SuperOperator evolve_superop(const Generator& g, double t) {
    if (t < 0.0) throw std::domain_error("evolve: time must be >= 0");
    return SuperOperator(g.dim(), expm(t * g.superop().op()));
}

/// T_t(x) = e^(tL)(x).
inline HermitianMatrix evolve(const Generator& g, double t, const HermitianMatrix& x) {
    return evolve_superop(g, t).apply(x);
}

class Resolvent {
public:
    Resolvent(double lambda, SuperOperator r) : lambda_(lambda), r_(std::move(r)) {}

    double lambda() const { return lambda_; }
    int dim() const { return r_.dim(); }
    const SuperOperator& superop() const { return r_; }

    ComplexMatrix apply(const ComplexMatrix& x) const { return r_.apply(x); }
    HermitianMatrix apply(const HermitianMatrix& x) const { return r_.apply(x); }

    /// lambda * R_lambda, the positive unital trace-preserving contraction.
    HermitianMatrix apply_scaled(const HermitianMatrix& x) const {
        return HermitianMatrix(lambda_ * r_.apply(x.mat()));
    }

private:
    double lambda_;
    SuperOperator r_;
};

/// (lambda - L)^(-1) by direct dense inversion.
inline Resolvent resolvent(const Generator& g, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("resolvent: lambda must be > 0");
    const Eigen::Index n2 = g.superop().op().rows();
    const ComplexMatrix shifted = lambda * ComplexMatrix::Identity(n2, n2) - g.superop().op();
    Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
    const ComplexMatrix inv = lu.solve(ComplexMatrix::Identity(n2, n2));
    const double cond = shifted.norm() * inv.norm();
    if (!inv.allFinite() || cond > 1e14)
        throw std::runtime_error("resolvent: lambda - L is numerically singular (condition ~" +
                                 std::to_string(cond) + ")");
    return Resolvent(lambda, SuperOperator(g.dim(), inv));
}

struct ResolventDefect {
    double defect_norm = 0.0;  // |x - lambda R x|_p
    double input_norm = 0.0;   // |x|_p
    double cross_term = 0.0;   // tau((x - lambda R x)(lambda R x)^(p-1))
};

/// The two facts behind the resolvent contraction on the positive cone:
/// the defect never beats the input in p-norm, and the cross term with the
/// (p-1)-th power of the smoothed element is nonnegative.
inline ResolventDefect resolvent_defect_check(const Generator& g, double lambda,
                                              const PositiveMatrix& x, double p) {
    if (p < 2.0) throw std::domain_error("resolvent_defect_check: p must be >= 2");
    const Resolvent r = resolvent(g, lambda);
    const HermitianMatrix smoothed = r.apply_scaled(x.hermitian());
    const PositiveMatrix smoothed_pos(smoothed, 1e-9);
    const HermitianMatrix defect = x.hermitian() - smoothed;
    ResolventDefect out;
    out.defect_norm = schatten_norm(defect, p);
    out.input_norm = schatten_norm(x, p);
    out.cross_term = trace_pair(defect, power(smoothed_pos, p - 1.0).hermitian());
    return out;
}

}  // namespace nclp::semigroups
