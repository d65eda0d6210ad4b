#pragma once

// Gauss-Legendre rules and the log-substituted scheme for the improper
// integral representation of fractional powers,
//   s^(1+theta) = c_theta * Int_0^inf t^theta * s^2/(s+t) dt/t,
// with the integrand rearranged as s - t + t^2/(s+t).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace nclp {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
inline QuadratureRule composite_gauss_legendre(double a, double b, int panels, int nodes_per_panel) {
    if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
    const QuadratureRule base = gauss_legendre(nodes_per_panel);
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels * nodes_per_panel));
    rule.weights.reserve(static_cast<std::size_t>(panels * nodes_per_panel));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (std::size_t k = 0; k < base.nodes.size(); ++k) {
            rule.nodes.push_back(mid + 0.5 * h * base.nodes[k]);
            rule.weights.push_back(0.5 * h * base.weights[k]);
        }
    }
    return rule;
}

/// Nodes for Int_0^inf f(t) dt/t after t = exp(y): pairs (t_i, w_i) with the
/// weights already carrying the dy measure. Truncation follows the decay of
/// t^theta * (s - t + t^2/(s+t)): like t^theta at 0 and t^(theta-1) at
/// infinity, cut where that factor is below 1e-16 of its peak, and always
/// covering [s_min/1e3, s_max*1e3].
class QuadratureScheme {
public:
    static constexpr int kDefaultNodesPerPanel = 32;
    static constexpr double kPanelWidth = 2.0;  // in y = log t units

    static QuadratureScheme for_spectral_range(double s_min, double s_max, double theta,
                                               int nodes_per_panel = kDefaultNodesPerPanel) {
        if (!(theta > 0.0 && theta < 1.0))
            throw std::domain_error("QuadratureScheme: theta must lie in (0,1)");
        if (!(s_min > 0.0) || !(s_max >= s_min))
            throw std::invalid_argument("QuadratureScheme: need 0 < s_min <= s_max");
        const double ln10 = std::numbers::ln10;
        const double decay = -std::log(1e-16);
        QuadratureScheme q;
        q.theta_ = theta;
        q.y_min_ = std::log(s_min) - std::max(decay / theta, 3.0 * ln10);
        q.y_max_ = std::log(s_max) + std::max(decay / (1.0 - theta), 3.0 * ln10);
        const int panels = static_cast<int>(std::ceil((q.y_max_ - q.y_min_) / kPanelWidth));
        q.rule_ = composite_gauss_legendre(q.y_min_, q.y_max_, panels, nodes_per_panel);
        for (double& y : q.rule_.nodes) y = std::exp(y);  // nodes now live in t
        return q;
    }

    double theta() const { return theta_; }
    double t_min() const { return std::exp(y_min_); }
    double t_max() const { return std::exp(y_max_); }
    std::size_t node_count() const { return rule_.nodes.size(); }

    bool covers(double lo, double hi) const { return t_min() <= lo && t_max() >= hi; }

    /// Sum of w_i * f(t_i); the measure dt/t is already in the weights.
    template <typename F>
    auto integrate(F&& f) const -> decltype(f(1.0)) {
        auto acc = decltype(f(1.0)){};
        for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
            acc += rule_.weights[i] * f(rule_.nodes[i]);
        return acc;
    }

    template <typename F>
    void for_each_node(F&& f) const {
        for (std::size_t i = 0; i < rule_.nodes.size(); ++i) f(rule_.nodes[i], rule_.weights[i]);
    }

    /// Scalar reproduction check: the scheme must recover s^(1+theta) for the
    /// given s before it is trusted on matrices.
    double scalar_relative_error(double s, double c_theta_value) const {
        const double th = theta_;
        const double val = c_theta_value * integrate([&](double t) {
                               return std::pow(t, th) * (s - t + t * t / (s + t));
                           });
        const double truth = std::pow(s, 1.0 + th);
        return std::abs(val - truth) / truth;
    }

private:
    double theta_ = 0.0;
    double y_min_ = 0.0;
    double y_max_ = 0.0;
    QuadratureRule rule_;
};

}  // namespace nclp
