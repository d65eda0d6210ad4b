#pragma once

// Counter-based deterministic randomness. Every draw is a pure function of
// (key, counter), so independently derived streams agree bit-for-bit no
// matter how work is scheduled.

#include "nclp/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace nclp {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return detail::mix64(a + 0x9e3779b97f4a7c15ULL * (b + 1));
}

inline std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a, folded through mix64
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return detail::mix64(h);
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    /// Stream for trial `index` under `seed`; disjoint by construction.
    static RandomStream derive(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(hash_combine(seed, index));
    }

    std::uint64_t next_u64() {
        return detail::mix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
    }

    /// Uniform in [0, 1).
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // Box-Muller; u1 in (0, 1] keeps the log finite.
        const double u1 = 1.0 - next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    Complex next_complex_gaussian() {
        const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
        return Complex(next_gaussian() * inv_sqrt2, next_gaussian() * inv_sqrt2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline ComplexMatrix random_ginibre(int n, RandomStream& rng) {
    ComplexMatrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = rng.next_complex_gaussian();
    return g;
}

inline HermitianMatrix random_hermitian(int n, RandomStream& rng) {
    ComplexMatrix g = random_ginibre(n, rng);
    return HermitianMatrix(0.5 * (g + g.adjoint()));
}

/// Haar-ish unitary: QR of a Ginibre matrix with the R diagonal phases
/// absorbed into Q.
inline ComplexMatrix random_unitary(int n, RandomStream& rng) {
    ComplexMatrix g = random_ginibre(n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexVector r_diag = qr.matrixQR().diagonal();
    for (int j = 0; j < n; ++j) {
        const double m = std::abs(r_diag[j]);
        const Complex phase = m > 0.0 ? r_diag[j] / m : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return q;
}

enum class MatrixKind { generic, singular, commuting_pair, spectral_gap };

inline std::string_view to_string(MatrixKind k) {
    switch (k) {
        case MatrixKind::generic: return "generic";
        case MatrixKind::singular: return "singular";
        case MatrixKind::commuting_pair: return "commuting-pair";
        case MatrixKind::spectral_gap: return "spectral-gap";
    }
    return "?";
}

inline MatrixKind matrix_kind_from_string(std::string_view s) {
    if (s == "generic") return MatrixKind::generic;
    if (s == "singular") return MatrixKind::singular;
    if (s == "commuting-pair" || s == "commuting") return MatrixKind::commuting_pair;
    if (s == "spectral-gap") return MatrixKind::spectral_gap;
    throw std::invalid_argument("unknown matrix kind: " + std::string(s));
}

namespace detail {

inline PositiveMatrix psd_from_stream(int n, RandomStream& rng, MatrixKind kind) {
    switch (kind) {
        case MatrixKind::generic: {
            ComplexMatrix g = random_ginibre(n, rng);
            return PositiveMatrix(HermitianMatrix(g.adjoint() * g));
        }
        case MatrixKind::singular: {
            ComplexMatrix g = random_ginibre(n, rng);
            PositiveMatrix a(HermitianMatrix(g.adjoint() * g));
            RealVector vals = a.spectrum().eigenvalues;
            const int zeroed = (n + 2) / 3;  // ceil(n/3)
            for (int i = 0; i < zeroed && i < n; ++i) vals[i] = 0.0;
            return PositiveMatrix::from_spectral(vals, a.spectrum().eigenvectors);
        }
        case MatrixKind::spectral_gap: {
            // two bands separated by two decades
            ComplexMatrix u = random_unitary(n, rng);
            RealVector vals(n);
            for (int i = 0; i < n; ++i)
                vals[i] = (i < (n + 1) / 2) ? 0.01 + 0.01 * rng.next_uniform()
                                            : 1.0 + rng.next_uniform();
            return PositiveMatrix::from_spectral(vals, u);
        }
        case MatrixKind::commuting_pair:
            throw std::invalid_argument("random_psd: commuting-pair yields a pair, use random_psd_pair");
    }
    throw std::invalid_argument("random_psd: bad kind");
}

}  // namespace detail

/// Deterministic PSD sample for (seed, kind).
inline PositiveMatrix random_psd(int n, std::uint64_t seed, MatrixKind kind) {
    if (n < 1) throw std::invalid_argument("random_psd: dimension must be >= 1");
    RandomStream rng = RandomStream::derive(seed, static_cast<std::uint64_t>(kind));
    return detail::psd_from_stream(n, rng, kind);
}

/// Pair of PSD samples; for commuting_pair the two share a random eigenbasis.
inline std::pair<PositiveMatrix, PositiveMatrix> random_psd_pair(int n, std::uint64_t seed,
                                                                 MatrixKind kind) {
    if (n < 1) throw std::invalid_argument("random_psd_pair: dimension must be >= 1");
    RandomStream rng = RandomStream::derive(seed, 0x70 + static_cast<std::uint64_t>(kind));
    if (kind == MatrixKind::commuting_pair) {
        ComplexMatrix u = random_unitary(n, rng);
        RealVector va(n), vb(n);
        for (int i = 0; i < n; ++i) {
            const Complex ga = rng.next_complex_gaussian();
            const Complex gb = rng.next_complex_gaussian();
            va[i] = std::norm(ga) * static_cast<double>(n);
            vb[i] = std::norm(gb) * static_cast<double>(n);
        }
        return {PositiveMatrix::from_spectral(va, u), PositiveMatrix::from_spectral(vb, u)};
    }
    PositiveMatrix a = detail::psd_from_stream(n, rng, kind);
    PositiveMatrix b = detail::psd_from_stream(n, rng, kind);
    return {std::move(a), std::move(b)};
}

}  // namespace nclp
