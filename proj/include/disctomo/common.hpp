#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace disctomo {

using cplx = std::complex<double>;
using std::numbers::pi;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double two_pi = 2.0 * pi;

inline int sgn(long k) { return (k > 0) - (k < 0); }

// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    return a;
}

// Reduce an angle to (-pi, pi].
inline double wrap_angle_pm(double a) {
    a = std::fmod(a, two_pi);
    if (a > pi) a -= two_pi;
    if (a <= -pi) a += two_pi;
    return a;
}

inline double sq(double x) { return x * x; }

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
struct GaussRule {
    std::vector<double> x, w;

    explicit GaussRule(int n) : x(n), w(n) {
        if (n < 1) throw std::invalid_argument("GaussRule: n must be >= 1");
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double xi = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = xi;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                double dx = p1 / dp;
                xi -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            x[i] = -xi;
            x[n - 1 - i] = xi;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
    }

    // Mapped copy on [a,b].
    GaussRule mapped(double a, double b) const {
        GaussRule r = *this;
        for (size_t i = 0; i < x.size(); ++i) {
            r.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
            r.w[i] = 0.5 * (b - a) * w[i];
        }
        return r;
    }
};

// Fornberg finite-difference weights for derivative of order m at point z
// from nodes xs. Returns weights c[j] so that f^(m)(z) ~ sum_j c[j] f(xs[j]).
inline std::vector<double> fd_weights(double z, std::span<const double> xs, int m) {
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<double> c((n + 1) * (m + 1), 0.0);
    auto C = [&](int j, int k) -> double& { return c[j * (m + 1) + k]; };
    double c1 = 1.0, c4 = xs[0] - z;
    C(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n + 1);
    for (int j = 0; j <= n; ++j) out[j] = C(j, m);
    return out;
}

// Barycentric weights for polynomial interpolation on arbitrary nodes.
inline std::vector<double> barycentric_weights(std::span<const double> xs) {
    const size_t n = xs.size();
    std::vector<double> w(n, 1.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (j != i) w[i] /= (xs[i] - xs[j]);
    // rescale to avoid overflow for large n
    double m = 0.0;
    for (double v : w) m = std::max(m, std::abs(v));
    for (double& v : w) v /= m;
    return w;
}

inline cplx barycentric_eval(double z, std::span<const double> xs,
                             std::span<const double> w, std::span<const cplx> f) {
    cplx num = 0.0;
    double den = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double d = z - xs[i];
        if (std::abs(d) < 1e-14) return f[i];
        double t = w[i] / d;
        num += t * f[i];
        den += t;
    }
    return num / den;
}

struct relerr_result {
    double abs_err = 0.0, ref = 0.0;
    double rel() const { return ref > 0 ? abs_err / ref : abs_err; }
};

} // namespace disctomo
