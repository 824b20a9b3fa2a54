#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "equimesh/newton.hpp"

namespace equimesh {

double DenseMatrix::norm_inf() const noexcept {
    double best = 0.0;
    for (int r = 0; r < n_; ++r) {
        double s = 0.0;
        for (int c = 0; c < n_; ++c) s += std::abs((*this)(r, c));
        best = std::max(best, s);
    }
    return best;
}

double max_norm(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> lu_solve(DenseMatrix a, std::span<const double> b) {
    const int n = a.size();
    if (static_cast<int>(b.size()) != n) {
        throw ConfigError("lu_solve: right-hand side has length " + std::to_string(b.size()) +
                          ", matrix is " + std::to_string(n) + " x " + std::to_string(n));
    }
    for (double v : a.values()) {
        if (!std::isfinite(v)) throw Error("lu_solve: non-finite matrix entry");
    }
    const double threshold = 1e-14 * a.norm_inf();
    std::vector<double> x(b.begin(), b.end());

    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r) {
            if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
        }
        if (!(std::abs(a(piv, k)) >= threshold) || a(piv, k) == 0.0) {
            throw SingularMatrixError(k, a(piv, k));
        }
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
            std::swap(x[k], x[piv]);
        }
        const double inv = 1.0 / a(k, k);
        for (int r = k + 1; r < n; ++r) {
            const double f = a(r, k) * inv;
            if (f == 0.0) continue;
            a(r, k) = f;
            for (int c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
            x[r] -= f * x[k];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = x[r];
        for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return x;
}

}  // namespace equimesh
