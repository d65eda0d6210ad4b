#pragma once

// Weighted finite measure space: k atoms with positive masses. The
// commutative counterpart of the matrix algebra; traces and p-norms are
// weighted sums over atoms.

#include "nclp/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nclp {

class WeightedAtoms {
public:
    WeightedAtoms(std::vector<double> weights, std::vector<double> values)
        : weights_(std::move(weights)), values_(std::move(values)) {
        if (weights_.size() != values_.size())
            throw std::invalid_argument("WeightedAtoms: weights/values size mismatch");
        if (weights_.empty()) throw std::invalid_argument("WeightedAtoms: empty");
        for (double w : weights_)
            if (!(w > 0.0)) throw std::invalid_argument("WeightedAtoms: weights must be positive");
    }

    std::size_t size() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& values() const { return values_; }
    double total_mass() const {
        double m = 0.0;
        for (double w : weights_) m += w;
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < size(); ++i) t += weights_[i] * values_[i];
        return t;
    }

    double norm(double p) const {
        if (p < 1.0) throw std::domain_error("WeightedAtoms::norm: p must be >= 1");
        if (std::isinf(p)) {
            double m = 0.0;
            for (double v : values_) m = std::max(m, std::abs(v));
            return m;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < size(); ++i) acc += weights_[i] * std::pow(std::abs(values_[i]), p);
        return std::pow(acc, 1.0 / p);
    }

    WeightedAtoms with_values(std::vector<double> v) const {
        return WeightedAtoms(weights_, std::move(v));
    }

    template <typename F>
    WeightedAtoms map(F&& f) const {
        std::vector<double> v(values_);
        for (double& x : v) x = f(x);
        return with_values(std::move(v));
    }

    WeightedAtoms operator-(const WeightedAtoms& o) const {
        require_same_atoms(o);
        std::vector<double> v(size());
        for (std::size_t i = 0; i < size(); ++i) v[i] = values_[i] - o.values_[i];
        return with_values(std::move(v));
    }

    /// Conditional expectation onto the constants: integrate against the
    /// normalized mass and spread the mean over every atom.
    WeightedAtoms expectation_to_constants() const {
        const double mean = trace() / total_mass();
        return with_values(std::vector<double>(size(), mean));
    }

    /// Diagonal matrix embedding with integer multiplicities: atom i occupies
    /// m_i consecutive diagonal slots, so traces and norms carry over exactly.
    HermitianMatrix embed_diagonal(const std::vector<int>& multiplicities) const {
        if (multiplicities.size() != size())
            throw std::invalid_argument("embed_diagonal: multiplicity count mismatch");
        std::vector<double> diag;
        for (std::size_t i = 0; i < size(); ++i) {
            if (multiplicities[i] <= 0)
                throw std::invalid_argument("embed_diagonal: multiplicities must be positive");
            diag.insert(diag.end(), static_cast<std::size_t>(multiplicities[i]), values_[i]);
        }
        return HermitianMatrix::diagonal(diag);
    }

private:
    void require_same_atoms(const WeightedAtoms& o) const {
        if (o.size() != size()) throw std::invalid_argument("WeightedAtoms: atom count mismatch");
        for (std::size_t i = 0; i < size(); ++i)
            if (weights_[i] != o.weights_[i])
                throw std::invalid_argument("WeightedAtoms: weight mismatch");
    }

    std::vector<double> weights_;
    std::vector<double> values_;
};

}  // namespace nclp
