#pragma once

// Reference implementations used to cross-check the library. Each is a
// direct, naive transcription of the underlying math and shares no code
// with the implementation under test.

#include <cmath>
#include <cstdlib>
#include <vector>

namespace oracles {

// Parzen category sums from raw (unnormalized) patterns and input:
// g_c = sum over patterns j of class c of exp((w_j . x_hat - 1)/sigma^2).
inline std::vector<double> parzen_sums(
    const std::vector<std::vector<double>>& patterns,
    const std::vector<int>& categories, int num_classes, double sigma,
    const std::vector<double>& x) {
    double xn = 0.0;
    for (double v : x) xn += v * v;
    xn = std::sqrt(xn);
    std::vector<double> g(static_cast<std::size_t>(num_classes), 0.0);
    for (std::size_t j = 0; j < patterns.size(); ++j) {
        double wn = 0.0;
        for (double v : patterns[j]) wn += v * v;
        wn = std::sqrt(wn);
        double dot = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            dot += (patterns[j][k] / wn) * (x[k] / xn);
        }
        g[static_cast<std::size_t>(categories[j])] +=
            std::exp((dot - 1.0) / (sigma * sigma));
    }
    return g;
}

// sigma -> 0 limit of the Parzen classifier: the class holding the most
// patterns at the maximal cosine similarity; ties to the lowest class id.
inline int cosine_nearest_class(
    const std::vector<std::vector<double>>& patterns,
    const std::vector<int>& categories, int num_classes,
    const std::vector<double>& x) {
    double xn = 0.0;
    for (double v : x) xn += v * v;
    xn = std::sqrt(xn);
    std::vector<double> z(patterns.size());
    double zmax = -2.0;
    for (std::size_t j = 0; j < patterns.size(); ++j) {
        double wn = 0.0;
        for (double v : patterns[j]) wn += v * v;
        wn = std::sqrt(wn);
        double dot = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            dot += (patterns[j][k] / wn) * (x[k] / xn);
        }
        z[j] = dot;
        if (dot > zmax) zmax = dot;
    }
    std::vector<int> hits(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t j = 0; j < patterns.size(); ++j) {
        if (z[j] == zmax) ++hits[static_cast<std::size_t>(categories[j])];
    }
    int best = 0;
    for (int c = 1; c < num_classes; ++c) {
        if (hits[static_cast<std::size_t>(c)] >
            hits[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    return best;
}

inline double kernel_value(bool rbf, double gamma,
                           const std::vector<double>& a,
                           const std::vector<double>& b) {
    if (rbf) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            d2 += (a[k] - b[k]) * (a[k] - b[k]);
        }
        return std::exp(-gamma * d2);
    }
    double dot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
    return dot;
}

// Maximization-form dual objective W(alpha) = sum(alpha)
// - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
inline double dual_objective(const std::vector<double>& alpha,
                             const std::vector<int>& y,
                             const std::vector<std::vector<double>>& k) {
    const std::size_t n = alpha.size();
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) w += alpha[i];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            w -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
        }
    }
    return w;
}

// Feasible lower bound for the dual maximum: coordinate ascent over
// variable pairs on the grid alpha_i in {0, C/steps, ..., C}, holding
// sum(alpha_i y_i) = 0 at every move (exact, since the grid units are
// integers). Any point it returns is feasible, so the true maximum is
// never below the returned value.
struct GridQp {
    std::vector<std::vector<double>> k;  // kernel matrix
    std::vector<int> y;
    double c = 1.0;
    int steps = 50;

    double solve() const {
        const std::size_t n = y.size();
        const double unit = c / steps;
        std::vector<int> u(n, 0);  // alpha_i = u_i * unit
        const auto objective = [&](const std::vector<int>& units) {
            std::vector<double> alpha(n);
            for (std::size_t i = 0; i < n; ++i) alpha[i] = units[i] * unit;
            return dual_objective(alpha, y, k);
        };
        double best = objective(u);
        bool improved = true;
        int sweeps = 0;
        while (improved && sweeps < 1000) {
            improved = false;
            ++sweeps;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    for (int ui = 0; ui <= steps; ++ui) {
                        // keep sum(u y) fixed: y_i du_i + y_j du_j = 0
                        const int di = ui - u[i];
                        const int uj = u[j] - y[i] * y[j] * di;
                        if (uj < 0 || uj > steps) continue;
                        std::vector<int> trial = u;
                        trial[i] = ui;
                        trial[j] = uj;
                        const double val = objective(trial);
                        if (val > best + 1e-12) {
                            best = val;
                            u = trial;
                            improved = true;
                        }
                    }
                }
            }
        }
        return best;
    }

    // Exhaustive grid maximum; only viable for very small n.
    double solve_exhaustive() const {
        const std::size_t n = y.size();
        const double unit = c / steps;
        std::vector<int> u(n, 0);
        double best = -1e300;
        while (true) {
            int balance = 0;
            for (std::size_t i = 0; i < n; ++i) balance += u[i] * y[i];
            if (balance == 0) {
                std::vector<double> alpha(n);
                for (std::size_t i = 0; i < n; ++i) alpha[i] = u[i] * unit;
                const double val = dual_objective(alpha, y, k);
                if (val > best) best = val;
            }
            std::size_t pos = 0;
            while (pos < n && u[pos] == steps) {
                u[pos] = 0;
                ++pos;
            }
            if (pos == n) break;
            ++u[pos];
        }
        return best;
    }
};

// Kernel expansion evaluated by a plain loop.
inline double decision_loop(bool rbf, double gamma,
                            const std::vector<std::vector<double>>& svs,
                            const std::vector<double>& coeffs, double bias,
                            const std::vector<double>& x) {
    double f = bias;
    for (std::size_t i = 0; i < svs.size(); ++i) {
        f += coeffs[i] * kernel_value(rbf, gamma, svs[i], x);
    }
    return f;
}

}  // namespace oracles
