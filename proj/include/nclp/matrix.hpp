#pragma once

// Dense Hermitian/positive-semidefinite matrices over complex doubles with
// the unnormalized trace, spectral calculus and Schatten norms. Everything
// is a value type; all functions are pure.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nclp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;   // relative to max |entry|
inline constexpr double kPsdTol = 1e-10;         // relative to the operator norm
inline constexpr double kEighResidualTol = 1e-10;

/// Eigendecomposition of a Hermitian matrix: eigenvalues ascending,
/// eigenvectors as unitary columns.
struct Spectrum {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    int dim() const { return static_cast<int>(eigenvalues.size()); }

    ComplexMatrix reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
    }

    /// UDU* with the eigenvalues mapped through f.
    template <typename F>
    ComplexMatrix map(F&& f) const {
        RealVector mapped(eigenvalues.size());
        for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) mapped[i] = f(eigenvalues[i]);
        return eigenvectors * mapped.asDiagonal() * eigenvectors.adjoint();
    }
};

class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& m) {
        if (m.rows() != m.cols())
            throw std::invalid_argument("HermitianMatrix: matrix must be square");
        const double scale = m.cwiseAbs().maxCoeff();
        const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (dev > kHermitianTol * scale && dev > 0.0)
            throw std::invalid_argument(
                "HermitianMatrix: input deviates from Hermitian symmetry by " +
                std::to_string(dev) + " (tolerance " + std::to_string(kHermitianTol * scale) + ")");
        m_ = 0.5 * (m + m.adjoint());
    }

    static HermitianMatrix identity(int n) { return HermitianMatrix(ComplexMatrix::Identity(n, n)); }
    static HermitianMatrix zero(int n) { return HermitianMatrix(ComplexMatrix::Zero(n, n)); }

    static HermitianMatrix diagonal(const std::vector<double>& d) {
        ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                              static_cast<Eigen::Index>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(i)) = d[i];
        return HermitianMatrix(m);
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& mat() const { return m_; }

    double frobenius_norm() const { return m_.norm(); }
    double max_abs_entry() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

    HermitianMatrix operator+(const HermitianMatrix& o) const { return HermitianMatrix(m_ + o.m_); }
    HermitianMatrix operator-(const HermitianMatrix& o) const { return HermitianMatrix(m_ - o.m_); }
    HermitianMatrix operator-() const { return HermitianMatrix(-m_); }
    friend HermitianMatrix operator*(double c, const HermitianMatrix& a) {
        return HermitianMatrix(c * a.m_);
    }

private:
    ComplexMatrix m_;
};

/// Spectral decomposition. Throws on solver failure, carrying the residual.
inline Spectrum eigh(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.mat());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigh: eigensolver did not converge");
    Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
    const double scale = s.eigenvalues.size() == 0
                             ? 0.0
                             : s.eigenvalues.cwiseAbs().maxCoeff();
    const double residual = (s.reconstruct() - a.mat()).norm();
    if (residual > kEighResidualTol * std::max(scale, 1e-300))
        throw std::runtime_error("eigh: reconstruction residual " + std::to_string(residual) +
                                 " exceeds tolerance at scale " + std::to_string(scale));
    return s;
}

/// Positive semidefinite matrix. Eigenvalues in [-tol, 0) are clamped to 0 at
/// construction; anything below -tol is a construction error, not noise.
class PositiveMatrix {
public:
    explicit PositiveMatrix(const HermitianMatrix& h, double psd_tol = kPsdTol) : base_(h) {
        spec_ = eigh(h);
        const double op_norm =
            spec_.eigenvalues.size() == 0 ? 0.0 : spec_.eigenvalues.cwiseAbs().maxCoeff();
        const double floor_bound = psd_tol * op_norm;
        const double lambda_min = spec_.eigenvalues.size() == 0 ? 0.0 : spec_.eigenvalues[0];
        if (lambda_min < -floor_bound)
            throw std::invalid_argument("PositiveMatrix: eigenvalue " + std::to_string(lambda_min) +
                                        " below PSD tolerance " + std::to_string(-floor_bound));
        for (Eigen::Index i = 0; i < spec_.eigenvalues.size(); ++i)
            if (spec_.eigenvalues[i] < 0.0) spec_.eigenvalues[i] = 0.0;
        eig_floor_ = spec_.eigenvalues.size() == 0 ? 0.0 : spec_.eigenvalues[0];
    }

    /// Build from a known eigenpair set (values must already be >= 0).
    static PositiveMatrix from_spectral(const RealVector& values, const ComplexMatrix& vectors) {
        if (values.minCoeff() < 0.0)
            throw std::invalid_argument("PositiveMatrix::from_spectral: negative value supplied");
        Spectrum s{values, vectors};
        // sort ascending, carrying eigenvector columns along
        std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
        std::sort(order.begin(), order.end(),
                  [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
        RealVector sorted_vals(values.size());
        ComplexMatrix sorted_vecs(vectors.rows(), vectors.cols());
        for (std::size_t i = 0; i < order.size(); ++i) {
            sorted_vals[static_cast<Eigen::Index>(i)] = values[order[i]];
            sorted_vecs.col(static_cast<Eigen::Index>(i)) = vectors.col(order[i]);
        }
        return PositiveMatrix(Spectrum{std::move(sorted_vals), std::move(sorted_vecs)});
    }

    static PositiveMatrix identity(int n) { return PositiveMatrix(HermitianMatrix::identity(n)); }
    static PositiveMatrix zero(int n) { return PositiveMatrix(HermitianMatrix::zero(n)); }
    static PositiveMatrix diagonal(const std::vector<double>& d) {
        return PositiveMatrix(HermitianMatrix::diagonal(d));
    }

    int dim() const { return base_.dim(); }
    const HermitianMatrix& hermitian() const { return base_; }
    const ComplexMatrix& mat() const { return base_.mat(); }
    const Spectrum& spectrum() const { return spec_; }

    double eig_floor() const { return eig_floor_; }
    bool strictly_positive() const { return eig_floor_ > 0.0; }
    double min_eigenvalue() const { return eig_floor_; }
    double max_eigenvalue() const {
        return spec_.eigenvalues.size() == 0 ? 0.0 : spec_.eigenvalues[spec_.eigenvalues.size() - 1];
    }
    /// Smallest nonzero eigenvalue; 0 for the zero matrix.
    double min_positive_eigenvalue() const {
        for (Eigen::Index i = 0; i < spec_.eigenvalues.size(); ++i)
            if (spec_.eigenvalues[i] > 0.0) return spec_.eigenvalues[i];
        return 0.0;
    }

private:
    explicit PositiveMatrix(Spectrum s)
        : base_(HermitianMatrix(s.reconstruct())), spec_(std::move(s)) {
        eig_floor_ = spec_.eigenvalues.size() == 0 ? 0.0 : spec_.eigenvalues[0];
    }

    HermitianMatrix base_;
    Spectrum spec_;
    double eig_floor_ = 0.0;
};

/// Spectral power A^p. Negative powers require strict positivity; on the
/// kernel the convention 0^p = 0 applies for p > 0 and 0^0 = 1.
inline PositiveMatrix power(const PositiveMatrix& a, double p) {
    if (p < 0.0 && !a.strictly_positive())
        throw std::domain_error("power: negative exponent on a singular matrix");
    const Spectrum& s = a.spectrum();
    RealVector powered(s.eigenvalues.size());
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        const double lambda = s.eigenvalues[i];
        powered[i] = (lambda == 0.0) ? (p == 0.0 ? 1.0 : 0.0) : std::pow(lambda, p);
    }
    return PositiveMatrix::from_spectral(powered, s.eigenvectors);
}

inline PositiveMatrix abs_part(const HermitianMatrix& d) {
    Spectrum s = eigh(d);
    RealVector v = s.eigenvalues.cwiseAbs();
    return PositiveMatrix::from_spectral(v, s.eigenvectors);
}

/// D = pos - neg with pos*neg = 0 and pos + neg = |D|.
inline std::pair<PositiveMatrix, PositiveMatrix> pos_neg_parts(const HermitianMatrix& d) {
    Spectrum s = eigh(d);
    RealVector pos = s.eigenvalues.cwiseMax(0.0);
    RealVector neg = (-s.eigenvalues).cwiseMax(0.0);
    return {PositiveMatrix::from_spectral(pos, s.eigenvectors),
            PositiveMatrix::from_spectral(neg, s.eigenvectors)};
}

/// Unnormalized trace of a Hermitian matrix (real by construction).
inline double trace(const HermitianMatrix& a) { return a.mat().trace().real(); }

/// Re Tr(AB). The imaginary part must vanish up to roundoff for Hermitian
/// inputs; a larger one indicates corrupted operands.
inline double trace_pair(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("trace_pair: dimension mismatch " + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()));
    const Complex t = (a.mat() * b.mat()).trace();
    const double scale = a.frobenius_norm() * b.frobenius_norm();
    if (std::abs(t.imag()) > 1e-10 * scale && std::abs(t.imag()) > 0.0)
        throw std::runtime_error("trace_pair: imaginary residue " + std::to_string(t.imag()) +
                                 " at scale " + std::to_string(scale));
    return t.real();
}

inline constexpr double kSchattenInf = std::numeric_limits<double>::infinity();

/// Schatten p-norm (sum of |eigenvalue|^p to the 1/p); p = inf gives the
/// operator norm.
inline double schatten_norm(const HermitianMatrix& a, double p) {
    if (p < 1.0) throw std::domain_error("schatten_norm: p must be >= 1");
    Spectrum s = eigh(a);
    if (s.eigenvalues.size() == 0) return 0.0;
    if (std::isinf(p)) return s.eigenvalues.cwiseAbs().maxCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
        acc += std::pow(std::abs(s.eigenvalues[i]), p);
    return std::pow(acc, 1.0 / p);
}

inline double schatten_norm(const PositiveMatrix& a, double p) {
    if (p < 1.0) throw std::domain_error("schatten_norm: p must be >= 1");
    const RealVector& ev = a.spectrum().eigenvalues;
    if (ev.size() == 0) return 0.0;
    if (std::isinf(p)) return ev.cwiseAbs().maxCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) acc += std::pow(ev[i], p);
    return std::pow(acc, 1.0 / p);
}

inline double operator_norm(const HermitianMatrix& a) { return schatten_norm(a, kSchattenInf); }

}  // namespace nclp
