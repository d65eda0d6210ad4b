#pragma once

// The verification harness proper: every inequality and identity around
//   tau(|a-b|^p) <= tau((a-b)(a^(p-1) - b^(p-1))),   p >= 2, a, b PSD,
// from the scalar gap through the proof-step decompositions to the
// conditional-expectation and resolvent corollaries.

#include "nclp/atoms.hpp"
#include "nclp/expectations.hpp"
#include "nclp/funcalc.hpp"
#include "nclp/matrix.hpp"
#include "nclp/quadrature.hpp"
#include "nclp/random.hpp"
#include "nclp/semigroups.hpp"
#include "nclp/superop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nclp::lab {

inline constexpr double kDefaultEpsShift = 1e-8;

/// Scalar inequality gap (a-b)(a^(p-1) - b^(p-1)) - |a-b|^p, nonnegative for
/// a, b >= 0 and p >= 2.
inline double scalar_gap(double a, double b, double p) {
    if (a < 0.0 || b < 0.0) throw std::domain_error("scalar_gap: a, b must be >= 0");
    if (p < 2.0) throw std::domain_error("scalar_gap: p must be >= 2");
    const auto pw = [&](double s) { return s == 0.0 ? 0.0 : std::pow(s, p - 1.0); };
    return (a - b) * (pw(a) - pw(b)) - std::pow(std::abs(a - b), p);
}

/// Atom-wise integrated form: sum_i mu_i (f_i-g_i)(f_i^(p-1)-g_i^(p-1))
/// minus |f-g|_p^p.
inline double atoms_gap(const WeightedAtoms& f, const WeightedAtoms& g, double p) {
    if (f.size() != g.size()) throw std::invalid_argument("atoms_gap: atom count mismatch");
    if (p < 2.0) throw std::domain_error("atoms_gap: p must be >= 2");
    double lhs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        lhs += f.weights()[i] * scalar_gap(f.values()[i], g.values()[i], p);
    // scalar_gap already subtracts |f_i-g_i|^p per atom, so lhs is the gap
    return lhs;
}

/// Gap of the operator inequality itself:
///   tau((a-b)(a^(p-1) - b^(p-1))) - tau(|a-b|^p).
inline double trace_gap(const PositiveMatrix& a, const PositiveMatrix& b, double p) {
    if (a.dim() != b.dim()) throw std::invalid_argument("trace_gap: dimension mismatch");
    if (p < 2.0) throw std::domain_error("trace_gap: p must be >= 2");
    const HermitianMatrix delta = a.hermitian() - b.hermitian();
    const double rhs =
        trace_pair(delta, power(a, p - 1.0).hermitian() - power(b, p - 1.0).hermitian());
    const Spectrum ds = eigh(delta);
    double lhs = 0.0;
    for (Eigen::Index i = 0; i < ds.eigenvalues.size(); ++i)
        lhs += std::pow(std::abs(ds.eigenvalues[i]), p);
    return rhs - lhs;
}

/// Scale for gap tolerances, max(1, |a|_p^p + |b|_p^p).
inline double gap_scale(const PositiveMatrix& a, const PositiveMatrix& b, double p) {
    return std::max(1.0, std::pow(schatten_norm(a, p), p) + std::pow(schatten_norm(b, p), p));
}

/// Shift both matrices by the same multiple of the identity when either one
/// is not strictly positive enough; the difference a - b is unchanged.
inline std::pair<PositiveMatrix, PositiveMatrix> regularize_pair(const PositiveMatrix& a,
                                                                 const PositiveMatrix& b,
                                                                 double eps_rel = kDefaultEpsShift) {
    const double scale = std::max({a.max_eigenvalue(), b.max_eigenvalue(), 1e-30});
    const double eps = eps_rel * scale;
    if (a.eig_floor() >= eps && b.eig_floor() >= eps) return {a, b};
    const HermitianMatrix shift = eps * HermitianMatrix::identity(a.dim());
    return {PositiveMatrix(a.hermitian() + shift), PositiveMatrix(b.hermitian() + shift)};
}

// ---------------------------------------------------------------------------
// Ordered case a >= b: resolvent-integrand bound and its integrated form.

struct OrderedPairReport {
    double min_pointwise_residual = 0.0;  // min over the t grid
    double integrated_residual = 0.0;     // tau(delta(a^(1+th)-b^(1+th))) - tau(delta^(2+th))
    double scale = 1.0;
};

inline std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi > lo) || count < 2) throw std::invalid_argument("log_grid: bad range");
    std::vector<double> g(static_cast<std::size_t>(count));
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    return g;
}

/// For delta >= 0 and every t > 0 the integrand of the fractional-power
/// representation dominates tau(delta^3 (delta+t)^(-1)); integrating gives
/// tau(delta (a^(1+theta) - b^(1+theta))) >= tau(delta^(2+theta)).
inline OrderedPairReport ordered_pair_check(const PositiveMatrix& b, const PositiveMatrix& delta,
                                            double theta, const std::vector<double>& t_grid) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::domain_error("ordered_pair_check: theta must lie in (0,1)");
    if (b.dim() != delta.dim()) throw std::invalid_argument("ordered_pair_check: dimension mismatch");
    const int n = b.dim();
    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
    const PositiveMatrix a(b.hermitian() + delta.hermitian());

    OrderedPairReport rep;
    rep.scale = std::max(1.0, trace_pair(delta.hermitian(), delta.hermitian()));
    rep.min_pointwise_residual = std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("ordered_pair_check: t grid must be positive");
        Eigen::LLT<ComplexMatrix> llt_a(a.mat() + t * eye);
        Eigen::LLT<ComplexMatrix> llt_b(b.mat() + t * eye);
        const ComplexMatrix inner =
            delta.mat() + t * t * (llt_a.solve(eye) - llt_b.solve(eye));
        const double direct = trace_pair(delta.hermitian(), HermitianMatrix(inner));
        double bound = 0.0;
        const RealVector& dv = delta.spectrum().eigenvalues;
        for (Eigen::Index i = 0; i < dv.size(); ++i)
            bound += dv[i] * dv[i] * dv[i] / (dv[i] + t);
        rep.min_pointwise_residual = std::min(rep.min_pointwise_residual, direct - bound);
    }

    const double lhs = trace_pair(
        delta.hermitian(), power(a, 1.0 + theta).hermitian() - power(b, 1.0 + theta).hermitian());
    double rhs = 0.0;
    const RealVector& dv = delta.spectrum().eigenvalues;
    for (Eigen::Index i = 0; i < dv.size(); ++i) rhs += std::pow(dv[i], 2.0 + theta);
    rep.integrated_residual = lhs - rhs;
    return rep;
}

// ---------------------------------------------------------------------------
// Signed difference: four-term split through the envelope alpha = a + neg(delta).

struct EnvelopeSplitReport {
    double identity_residual = 0.0;  // |four-term sum - tau((a-b)(a^(p-1)-b^(p-1)))|
    double cross_term_low = 0.0;     // tau((a-alpha)(alpha^(p-1)-b^(p-1))) >= 0
    double cross_term_high = 0.0;    // tau((alpha-b)(a^(p-1)-alpha^(p-1))) >= 0
    double scale = 1.0;
};

inline EnvelopeSplitReport envelope_split_check(const PositiveMatrix& a, const PositiveMatrix& b,
                                                double p) {
    if (p < 2.0) throw std::domain_error("envelope_split_check: p must be >= 2");
    const HermitianMatrix delta = a.hermitian() - b.hermitian();
    const auto [dpos, dneg] = pos_neg_parts(delta);
    const PositiveMatrix alpha(a.hermitian() + dneg.hermitian());

    const HermitianMatrix pa = power(a, p - 1.0).hermitian();
    const HermitianMatrix pb = power(b, p - 1.0).hermitian();
    const HermitianMatrix pal = power(alpha, p - 1.0).hermitian();

    const double t1 = trace_pair(-dneg.hermitian(), pa - pal);
    const double t2 = trace_pair(-dneg.hermitian(), pal - pb);
    const double t3 = trace_pair(dpos.hermitian(), pal - pb);
    const double t4 = trace_pair(dpos.hermitian(), pa - pal);
    const double total = trace_pair(delta, pa - pb);

    EnvelopeSplitReport rep;
    rep.scale = std::max(1.0, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
    rep.identity_residual = std::abs(t1 + t2 + t3 + t4 - total);
    rep.cross_term_low = t2;
    rep.cross_term_high = t4;
    return rep;
}

// ---------------------------------------------------------------------------
// Power-reduction identity: with a = b + delta and p-1-n in [1,2),
//   tau(delta (a^(p-1) - b^(p-1)))
//     = tau(delta (a^(p-1-n) - b^(p-1-n)) b^n)
//       + sum_{k=1}^n tau(delta a^(p-1-k) delta b^(k-1)).

inline int default_reduction_steps(double p) {
    if (p < 3.0) throw std::domain_error("power reduction: p must be >= 3");
    int n = static_cast<int>(std::floor(p - 2.0 + 1e-12));
    return std::max(n, 1);
}

struct PowerReductionReport {
    double residual = 0.0;
    double scale = 1.0;
    double imag_residual = 0.0;
};

inline PowerReductionReport power_reduction_identity(const PositiveMatrix& a,
                                                     const PositiveMatrix& b, double p, int n) {
    if (n < 1) throw std::invalid_argument("power_reduction_identity: n must be >= 1");
    const double tail = p - 1.0 - n;
    if (!(tail >= 1.0 - 1e-12 && tail < 2.0))
        throw std::invalid_argument("power_reduction_identity: p-1-n = " + std::to_string(tail) +
                                    " outside [1,2)");
    const ComplexMatrix d = a.mat() - b.mat();
    const Complex lhs =
        (d * (power(a, p - 1.0).mat() - power(b, p - 1.0).mat())).trace();
    Complex rhs = (d * (power(a, tail).mat() - power(b, tail).mat()) *
                   power(b, static_cast<double>(n)).mat())
                      .trace();
    double magnitude = std::abs(lhs) + std::abs(rhs);
    for (int k = 1; k <= n; ++k) {
        const Complex term = (d * power(a, p - 1.0 - k).mat() * d *
                              power(b, static_cast<double>(k - 1)).mat())
                                 .trace();
        rhs += term;
        magnitude += std::abs(term);
    }
    PowerReductionReport rep;
    rep.scale = std::max(1.0, magnitude);
    rep.residual = std::abs(lhs - rhs);
    rep.imag_residual = std::abs(lhs.imag());
    return rep;
}

// ---------------------------------------------------------------------------
// The chain through the expectation onto the commutative algebra of delta:
// every inequality that stitches the reduction identity to tau(|delta|^p).

struct ExpectationChainReport {
    double dropped_terms_min = 0.0;      // each tau(delta a^(p-1-k) delta b^(k-1)), k >= 2
    double fractional_link = 0.0;        // tau(delta(a^(1+th)-b^(1+th)) b^n) - tau(delta^2 b^(p-2))
    double jensen_link_b = 0.0;          // tau(delta^2 b^(p-2)) - tau(delta^2 (Eb)^(p-2))
    double jensen_link_a = 0.0;          // tau(delta^2 a^(p-2)) - tau(delta^2 (Ea)^(p-2))
    double support_floor_b = 0.0;        // min eigenvalue of E(b) - neg(delta)
    double support_floor_a = 0.0;        // min eigenvalue of E(a) - pos(delta)
    double monotone_link_b = 0.0;        // tau(delta^2 (Eb)^(p-2)) - tau(delta^2 neg^(p-2))
    double monotone_link_a = 0.0;        // tau(delta^2 (Ea)^(p-2)) - tau(delta^2 pos^(p-2))
    double terminal_identity_residual = 0.0;  // tau(delta^2(neg^(p-2)+pos^(p-2))) vs tau(|delta|^p)
    double scale = 1.0;
};

inline ExpectationChainReport expectation_chain_check(const PositiveMatrix& a,
                                                      const PositiveMatrix& b, double p) {
    if (p < 3.0) throw std::domain_error("expectation_chain_check: p must be >= 3");
    const int n = default_reduction_steps(p);
    const double theta = p - 2.0 - n;  // in [0,1)
    const HermitianMatrix delta = a.hermitian() - b.hermitian();
    const ComplexMatrix d = delta.mat();
    const HermitianMatrix delta_sq(d * d);
    const auto [dpos, dneg] = pos_neg_parts(delta);
    const auto e = expectations::ConditionalExpectation::spectral_averaging(delta);

    ExpectationChainReport rep;
    rep.scale = gap_scale(a, b, p);

    rep.dropped_terms_min = std::numeric_limits<double>::infinity();
    if (n < 2) rep.dropped_terms_min = 0.0;
    for (int k = 2; k <= n; ++k) {
        const Complex term = (d * power(a, p - 1.0 - k).mat() * d *
                              power(b, static_cast<double>(k - 1)).mat())
                                 .trace();
        rep.dropped_terms_min = std::min(rep.dropped_terms_min, term.real());
    }

    const double frac_lhs =
        ((d * (power(a, 1.0 + theta).mat() - power(b, 1.0 + theta).mat()) *
          power(b, static_cast<double>(n)).mat())
             .trace())
            .real();
    const HermitianMatrix b_pm2 = power(b, p - 2.0).hermitian();
    const HermitianMatrix a_pm2 = power(a, p - 2.0).hermitian();
    rep.fractional_link = frac_lhs - trace_pair(delta_sq, b_pm2);

    const PositiveMatrix eb = e.apply(b, 1e-9);
    const PositiveMatrix ea = e.apply(a, 1e-9);
    rep.jensen_link_b = trace_pair(delta_sq, b_pm2) -
                        trace_pair(delta_sq, power(eb, p - 2.0).hermitian());
    rep.jensen_link_a = trace_pair(delta_sq, a_pm2) -
                        trace_pair(delta_sq, power(ea, p - 2.0).hermitian());

    rep.support_floor_b = eigh(eb.hermitian() - dneg.hermitian()).eigenvalues.minCoeff();
    rep.support_floor_a = eigh(ea.hermitian() - dpos.hermitian()).eigenvalues.minCoeff();

    rep.monotone_link_b = trace_pair(delta_sq, power(eb, p - 2.0).hermitian()) -
                          trace_pair(delta_sq, power(dneg, p - 2.0).hermitian());
    rep.monotone_link_a = trace_pair(delta_sq, power(ea, p - 2.0).hermitian()) -
                          trace_pair(delta_sq, power(dpos, p - 2.0).hermitian());

    const double terminal = trace_pair(
        delta_sq, power(dneg, p - 2.0).hermitian() + power(dpos, p - 2.0).hermitian());
    double abs_p = 0.0;
    const Spectrum ds = eigh(delta);
    for (Eigen::Index i = 0; i < ds.eigenvalues.size(); ++i)
        abs_p += std::pow(std::abs(ds.eigenvalues[i]), p);
    rep.terminal_identity_residual = std::abs(terminal - abs_p);
    return rep;
}

// ---------------------------------------------------------------------------
// Derivative route, p in [3,4]: the double-integral representation
//   tau((a-b)(a^(p-1)-b^(p-1)))
//     = (p-1) Int_0^1 Int_0^1 <delta, (t L_{b+u delta} + (1-t) R_{b+u delta})^(p-2) delta> dt du
// and the pinched chain down to tau(|delta|^p).

struct DerivativeRepresentationReport {
    double direct_value = 0.0;
    double integral_value = 0.0;
    double representation_residual = 0.0;  // relative
    double pinch_link = 0.0;               // direct - pinched expression
    double commutative_link = 0.0;         // pinched expression - tau(|delta|^p)
    double applied_shift = 0.0;
    double scale = 1.0;
};

inline DerivativeRepresentationReport derivative_representation_check(
    const PositiveMatrix& a_in, const PositiveMatrix& b_in, double p, int panels_per_axis = 6,
    int nodes_per_panel = 8, double eps_rel = kDefaultEpsShift) {
    if (!(p >= 3.0 && p <= 4.0))
        throw std::domain_error("derivative_representation_check: p must lie in [3,4]");
    auto [a, b] = regularize_pair(a_in, b_in, eps_rel);

    DerivativeRepresentationReport rep;
    rep.applied_shift = a.min_eigenvalue() != a_in.min_eigenvalue()
                            ? a.min_eigenvalue() - a_in.min_eigenvalue()
                            : 0.0;
    rep.scale = gap_scale(a, b, p);

    const HermitianMatrix delta = a.hermitian() - b.hermitian();
    const ComplexVector vdelta = vec(delta.mat());
    rep.direct_value = trace_pair(
        delta, power(a, p - 1.0).hermitian() - power(b, p - 1.0).hermitian());

    const QuadratureRule grid =
        composite_gauss_legendre(0.0, 1.0, panels_per_axis, nodes_per_panel);
    double acc = 0.0;
    for (std::size_t iu = 0; iu < grid.nodes.size(); ++iu) {
        const double u = grid.nodes[iu];
        const HermitianMatrix mid = b.hermitian() + u * delta;
        const SuperOperator l = left_superop(mid);
        const SuperOperator r = right_superop(mid);
        for (std::size_t it = 0; it < grid.nodes.size(); ++it) {
            const double t = grid.nodes[it];
            const SuperOperator s = t * l + (1.0 - t) * r;
            const ComplexVector image = superop_power(s, p - 2.0).op() * vdelta;
            acc += grid.weights[iu] * grid.weights[it] * (vdelta.dot(image)).real();
        }
    }
    rep.integral_value = (p - 1.0) * acc;
    rep.representation_residual =
        std::abs(rep.integral_value - rep.direct_value) / std::max(1.0, std::abs(rep.direct_value));

    const auto e = expectations::ConditionalExpectation::spectral_averaging(delta);
    const PositiveMatrix eb = e.apply(b, 1e-9);
    const PositiveMatrix eb_plus(eb.hermitian() + delta, 1e-9);
    const double pinched = trace_pair(
        delta, power(eb_plus, p - 1.0).hermitian() - power(eb, p - 1.0).hermitian());
    double abs_p = 0.0;
    const Spectrum ds = eigh(delta);
    for (Eigen::Index i = 0; i < ds.eigenvalues.size(); ++i)
        abs_p += std::pow(std::abs(ds.eigenvalues[i]), p);
    rep.pinch_link = rep.direct_value - pinched;
    rep.commutative_link = pinched - abs_p;
    return rep;
}

// ---------------------------------------------------------------------------
// For p in (2,3) the exponent p-2 is operator concave and the lifted Jensen
// inequality reverses; search for a strict witness.

struct ConcavityReversalReport {
    bool witness_found = false;
    std::uint64_t witness_trial = 0;
    double witness_gap = 0.0;          // most negative normalized Jensen-direction floor
    double worst_reversed_floor = 0.0; // reversed direction must stay >= -tol
    int trials = 0;
};

inline ConcavityReversalReport concavity_reversal_search(double p, int dim, int trials,
                                                         std::uint64_t seed,
                                                         double witness_cut = 1e-6) {
    if (!(p > 2.0 && p < 3.0))
        throw std::domain_error("concavity_reversal_search: p must lie in (2,3)");
    const double alpha = p - 2.0;
    ConcavityReversalReport rep;
    rep.trials = trials;
    rep.worst_reversed_floor = std::numeric_limits<double>::infinity();
    rep.witness_gap = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        RandomStream rng = RandomStream::derive(seed, static_cast<std::uint64_t>(trial));
        ComplexMatrix ga = random_ginibre(dim, rng);
        ComplexMatrix gb = random_ginibre(dim, rng);
        PositiveMatrix a(HermitianMatrix(ga.adjoint() * ga));
        PositiveMatrix b(HermitianMatrix(gb.adjoint() * gb));
        std::tie(a, b) = regularize_pair(a, b);
        const HermitianMatrix delta = a.hermitian() - b.hermitian();
        const double t = 0.1 + 0.8 * rng.next_uniform();
        const double u = 0.1 + 0.8 * rng.next_uniform();
        const HermitianMatrix mid = b.hermitian() + u * delta;
        const SuperOperator s = t * left_superop(mid) + (1.0 - t) * right_superop(mid);
        const SuperOperator ehat = expectations::hs_projection_superop(
            expectations::ConditionalExpectation::spectral_averaging(delta));

        const SuperOperator jensen =
            ehat * superop_power(s, alpha) * ehat - superop_power(ehat * s * ehat, alpha);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> sev(s.op());
        const double scale = std::pow(std::max(sev.eigenvalues().maxCoeff(), 1e-30), alpha);
        const double jensen_floor =
            expectations::min_eigenvalue_on_range(jensen, ehat) / scale;
        const double reversed_floor =
            expectations::min_eigenvalue_on_range(SuperOperator(s.dim(), -jensen.op()), ehat) /
            scale;
        rep.worst_reversed_floor = std::min(rep.worst_reversed_floor, reversed_floor);
        if (jensen_floor < rep.witness_gap) {
            rep.witness_gap = jensen_floor;
            rep.witness_trial = static_cast<std::uint64_t>(trial);
        }
        if (jensen_floor < -witness_cut) rep.witness_found = true;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Contraction of Id - E on the positive cone, and its orthogonality step.

struct DefectRatioReport {
    double ratio = 0.0;             // |x - Ex|_p / |x|_p
    double orthogonality = 0.0;     // tau((x - Ex)(Ex)^(p-1)), vanishes exactly
    double scale = 1.0;
};

inline DefectRatioReport expectation_defect_ratio(const PositiveMatrix& x,
                                                  const expectations::ConditionalExpectation& e,
                                                  double p) {
    if (p < 2.0) throw std::domain_error("expectation_defect_ratio: p must be >= 2");
    DefectRatioReport rep;
    const double xnorm = schatten_norm(x, p);
    rep.scale = std::max(1.0, std::pow(xnorm, p));
    if (xnorm == 0.0) return rep;
    const PositiveMatrix ex = e.apply(x, 1e-9);
    const HermitianMatrix defect = x.hermitian() - ex.hermitian();
    rep.ratio = schatten_norm(defect, p) / xnorm;
    rep.orthogonality = trace_pair(defect, power(ex, p - 1.0).hermitian());
    return rep;
}

// ---------------------------------------------------------------------------
// Two-atom counterexample search for p < 2.

inline double two_atom_ratio(double mu, double x1, double x2, double p) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("two_atom_ratio: mu must be in (0,1)");
    if (x1 < 0.0 || x2 < 0.0) throw std::invalid_argument("two_atom_ratio: values must be >= 0");
    const double mean = mu * x1 + (1.0 - mu) * x2;
    const double num =
        std::pow(mu * std::pow(std::abs(x1 - mean), p) + (1.0 - mu) * std::pow(std::abs(x2 - mean), p),
                 1.0 / p);
    const double den = std::pow(mu * std::pow(x1, p) + (1.0 - mu) * std::pow(x2, p), 1.0 / p);
    return den == 0.0 ? 0.0 : num / den;
}

struct CounterexampleReport {
    double best_ratio = 0.0;
    double mu = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    bool exceeds_one = false;
    long evaluations = 0;
};

/// Grid plus coordinate refinement over mu and x2/x1 (x1 = 1 by scale
/// invariance). Reports the best ratio found, whether or not it beats 1.
inline CounterexampleReport counterexample_search(double p, long budget = 20000) {
    if (!(p >= 1.0 && p < 2.0))
        throw std::domain_error("counterexample_search: p must lie in [1,2)");
    CounterexampleReport rep;
    const int grid = 64;
    for (int i = 1; i <= grid; ++i) {
        const double mu = static_cast<double>(i) / (grid + 1);
        for (int j = 0; j < grid; ++j) {
            const double r = static_cast<double>(j) / grid;
            const double val = two_atom_ratio(mu, 1.0, r, p);
            ++rep.evaluations;
            if (val > rep.best_ratio) {
                rep.best_ratio = val;
                rep.mu = mu;
                rep.x1 = 1.0;
                rep.x2 = r;
            }
        }
    }
    // coordinate refinement: shrink a bracket around the best point
    double mu = rep.mu, r = rep.x2;
    double mu_step = 1.0 / (grid + 1), r_step = 1.0 / grid;
    while (rep.evaluations < budget && (mu_step > 1e-12 || r_step > 1e-12)) {
        bool improved = false;
        for (double cand : {mu - mu_step, mu + mu_step}) {
            if (cand <= 0.0 || cand >= 1.0) continue;
            const double val = two_atom_ratio(cand, 1.0, r, p);
            ++rep.evaluations;
            if (val > rep.best_ratio) {
                rep.best_ratio = val;
                mu = cand;
                improved = true;
            }
        }
        for (double cand : {r - r_step, r + r_step}) {
            if (cand < 0.0) continue;
            const double val = two_atom_ratio(mu, 1.0, cand, p);
            ++rep.evaluations;
            if (val > rep.best_ratio) {
                rep.best_ratio = val;
                r = cand;
                improved = true;
            }
        }
        if (!improved) {
            mu_step *= 0.5;
            r_step *= 0.5;
        }
    }
    rep.mu = mu;
    rep.x2 = r;
    rep.exceeds_one = rep.best_ratio > 1.0;
    return rep;
}

/// Exact rational arithmetic for the p = 1 ratio on two atoms.
struct Fraction {
    long long num = 0;
    long long den = 1;

    static long long gcd(long long a, long long b) { return b == 0 ? (a < 0 ? -a : a) : gcd(b, a % b); }

    static Fraction make(long long n, long long d) {
        if (d == 0) throw std::invalid_argument("Fraction: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const long long g = std::max(gcd(n, d), 1LL);
        return Fraction{n / g, d / g};
    }

    Fraction operator+(const Fraction& o) const { return make(num * o.den + o.num * den, den * o.den); }
    Fraction operator-(const Fraction& o) const { return make(num * o.den - o.num * den, den * o.den); }
    Fraction operator*(const Fraction& o) const { return make(num * o.num, den * o.den); }
    Fraction operator/(const Fraction& o) const { return make(num * o.den, den * o.num); }
    Fraction abs() const { return Fraction{num < 0 ? -num : num, den}; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
};

/// |x - Ex|_1 / |x|_1 on atoms (mu, 1-mu) with exact fractions.
inline Fraction two_atom_ratio_p1_exact(Fraction mu, Fraction x1, Fraction x2) {
    const Fraction one{1, 1};
    const Fraction comu = one - mu;
    const Fraction mean = mu * x1 + comu * x2;
    const Fraction num = mu * (x1 - mean).abs() + comu * (x2 - mean).abs();
    const Fraction den = mu * x1.abs() + comu * x2.abs();
    return num / den;
}

// ---------------------------------------------------------------------------
// Duality-map reading of the main inequality on the positive cone.

struct DualityReport {
    double monotonicity_gap = 0.0;   // <a-b, phi(a)-phi(b)> - |a-b|_p^p via the HS route
    double trace_gap_value = 0.0;    // same quantity via trace_gap
    double route_difference = 0.0;
    double norm_identity_residual = 0.0;  // | |phi(a)|_p' - |a|_p^(p-1) | / scale
    double scale = 1.0;
};

inline DualityReport duality_map_check(const PositiveMatrix& a, const PositiveMatrix& b, double p) {
    if (p < 2.0) throw std::domain_error("duality_map_check: p must be >= 2");
    DualityReport rep;
    rep.scale = gap_scale(a, b, p);
    const HermitianMatrix delta = a.hermitian() - b.hermitian();
    const HermitianMatrix phi_diff =
        power(a, p - 1.0).hermitian() - power(b, p - 1.0).hermitian();
    const double pairing = hs_inner(delta.mat(), phi_diff.mat()).real();
    const double norm_p = schatten_norm(delta, p);
    rep.monotonicity_gap = pairing - std::pow(norm_p, p);
    rep.trace_gap_value = trace_gap(a, b, p);
    rep.route_difference = std::abs(rep.monotonicity_gap - rep.trace_gap_value);

    const double q = p / (p - 1.0);
    const double phi_norm = schatten_norm(power(a, p - 1.0), q);
    const double expected = std::pow(schatten_norm(a, p), p - 1.0);
    rep.norm_identity_residual = std::abs(phi_norm - expected) / std::max(1.0, expected);
    return rep;
}

}  // namespace nclp::lab
