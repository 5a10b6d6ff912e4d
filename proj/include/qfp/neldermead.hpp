#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace qfp {

struct NelderMeadOptions {
    int max_iters = 1500;
    double initial_scale = 0.1;
    double diameter_tol = 1e-9;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

// Downhill simplex with the dimension-adaptive coefficients of Gao & Han.
inline NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> x0,
                                             const NelderMeadOptions& opts = {}) {
    const std::size_t n = x0.size();
    const double nd = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / nd;        // expansion
    const double gamma = 0.75 - 1.0 / (2.0 * nd);  // contraction
    const double delta = 1.0 - 1.0 / nd;       // shrink

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i)
        pts[i + 1][i] += opts.initial_scale * (1.0 + std::abs(x0[i]));
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    std::vector<std::size_t> order(n + 1);
    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        {
            std::vector<std::vector<double>> ps(n + 1);
            std::vector<double> vs(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                ps[i] = pts[order[i]];
                vs[i] = vals[order[i]];
            }
            pts.swap(ps);
            vals.swap(vs);
        }

        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                diameter = std::max(diameter, std::abs(pts[i][j] - pts[0][j]));
        if (diameter < opts.diameter_tol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= nd;

        auto affine = [&](double coef, const std::vector<double>& towards) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (towards[j] - centroid[j]);
            return p;
        };

        const std::vector<double> reflected = affine(-alpha, pts[n]);
        const double fr = f(reflected);
        if (fr < vals[0]) {
            const std::vector<double> expanded = affine(-alpha * beta, pts[n]);
            const double fe = f(expanded);
            if (fe < fr) {
                pts[n] = expanded;
                vals[n] = fe;
            } else {
                pts[n] = reflected;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = reflected;
            vals[n] = fr;
        } else {
            const bool outside = fr < vals[n];
            const std::vector<double> contracted =
                outside ? affine(-alpha * gamma, pts[n]) : affine(gamma, pts[n]);
            const double fc = f(contracted);
            if (fc < std::min(fr, vals[n])) {
                pts[n] = contracted;
                vals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + delta * (pts[i][j] - pts[0][j]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }

    const std::size_t best = static_cast<std::size_t>(
        std::min_element(vals.begin(), vals.end()) - vals.begin());
    return {pts[best], vals[best], iter};
}

}  // namespace qfp
