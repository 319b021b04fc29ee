#pragma once

#include <map>

#include "grid.hpp"

namespace disctomo {

// Point of dSM in fan-beam coordinates: base point x(beta)=(cos b, sin b) on
// the unit circle, direction theta = beta + pi + alpha. Inward iff
// alpha in [-pi/2, pi/2] mod 2pi.
struct FanBeamPoint {
    double beta, alpha;

    double theta() const { return wrap_angle(beta + pi + alpha); }
    bool inward() const {
        double a = wrap_angle_pm(alpha);
        return std::abs(a) <= pi / 2 + 1e-14;
    }
    double bx() const { return std::cos(beta); }
    double by() const { return std::sin(beta); }
};

// First arrival time to dM from x along direction theta:
//   tau(rho e^{i b}, theta) = -rho cos(theta-b) + sqrt(1 - rho^2 sin^2(theta-b))
inline double exit_time(double x, double y, double theta) {
    double rho2 = x * x + y * y;
    if (rho2 > 1.0 + 1e-12) throw std::domain_error("exit_time: |x| > 1");
    double c = std::cos(theta), s = std::sin(theta);
    double dotp = x * c + y * s;           // rho cos(theta - b)
    double cross = x * s - y * c;          // rho sin(theta - b)
    double disc = 1.0 - cross * cross;
    return std::max(0.0, -dotp + std::sqrt(std::max(0.0, disc)));
}

// Applies the scattering relation S(b,a) = (b+pi+2a, pi-a), or the antipodal
// relation S_A(b,a) = (b+pi+2a, -a); angles reduced mod 2pi.
inline FanBeamPoint scattering(const FanBeamPoint& p, bool antipodal = false) {
    double b = wrap_angle(p.beta + pi + 2.0 * p.alpha);
    double a = wrap_angle(antipodal ? -p.alpha : pi - p.alpha);
    return {b, a};
}

// Fan-beam coordinates (beta_-, alpha_-) in d+SM of the line through
// (x, theta): e^{i beta_-} = -e^{i theta} w, e^{i alpha_-} = 1/w, where
// w = sqrt(1 - rho^2 sin^2(theta-b)) + i rho sin(theta-b) lies on the unit
// circle with Re w >= 0.
inline FanBeamPoint footpoint(double x, double y, double theta) {
    if (x * x + y * y > 1.0 + 1e-12) throw std::domain_error("footpoint: |x| > 1");
    double c = std::cos(theta), s = std::sin(theta);
    double cross = x * s - y * c; // rho sin(theta - b)
    cplx w(std::sqrt(std::max(0.0, 1.0 - cross * cross)), cross);
    cplx eb = -std::exp(I * theta) * w;
    double beta = wrap_angle(std::atan2(eb.imag(), eb.real()));
    double alpha = wrap_angle(-std::atan2(w.imag(), w.real()));
    return {beta, alpha};
}

// Composite Gauss-Legendre quadrature along the chord entering at
// (beta, alpha) in d+SM: length 2 cos(alpha), direction theta = beta+pi+alpha,
// panels of length <= h_t with `pts` Gauss points each.
struct Chord {
    FanBeamPoint entry;
    double length = 0.0, theta = 0.0;
    std::vector<double> t, w; // nodes in [0, length] and weights
    int panels = 0, pts = 0;

    Chord() = default;
    Chord(const FanBeamPoint& p, double h_t, int gauss_pts = 4) : entry(p) {
        double ca = std::cos(p.alpha);
        length = std::max(0.0, 2.0 * ca);
        theta = p.theta();
        pts = gauss_pts;
        panels = std::max(1, int(std::ceil(length / h_t)));
        static thread_local std::map<int, GaussRule> rules;
        auto it = rules.find(gauss_pts);
        if (it == rules.end()) it = rules.emplace(gauss_pts, GaussRule(gauss_pts)).first;
        const GaussRule& gr = it->second;
        double h = length / panels;
        t.resize(size_t(panels) * pts);
        w.resize(t.size());
        for (int p_ = 0; p_ < panels; ++p_) {
            double a = p_ * h;
            for (int q = 0; q < pts; ++q) {
                t[size_t(p_) * pts + q] = a + 0.5 * h * (gr.x[q] + 1.0);
                w[size_t(p_) * pts + q] = 0.5 * h * gr.w[q];
            }
        }
    }

    double px(double tt) const { return entry.bx() + tt * std::cos(theta); }
    double py(double tt) const { return entry.by() + tt * std::sin(theta); }

    double panel_length() const { return panels ? length / panels : 0.0; }
};

// Cumulative integral values A(t_i) = int_0^{t_i} a ds at the chord nodes,
// from the node values of a: full panels are summed with the Gauss weights,
// the partial integral inside a panel integrates the (pts-1)-degree Lagrange
// interpolant of the panel's node values.
struct CumulativeIntegrator {
    int pts;
    std::vector<double> vmono; // (pts x pts) node->monomial coeffs, ref [0,1]

    explicit CumulativeIntegrator(int gauss_pts = 4) : pts(gauss_pts) {
        GaussRule gr(gauss_pts);
        std::vector<double> xs(pts);
        for (int q = 0; q < pts; ++q) xs[q] = 0.5 * (gr.x[q] + 1.0);
        // invert the Vandermonde: coeffs c with p(x)=sum c_m x^m, p(xs[q])=f_q
        std::vector<double> V(pts * pts);
        for (int q = 0; q < pts; ++q)
            for (int m = 0; m < pts; ++m) V[q * pts + m] = std::pow(xs[q], m);
        // gaussian elimination for the inverse
        std::vector<double> inv(pts * pts, 0.0);
        for (int i = 0; i < pts; ++i) inv[i * pts + i] = 1.0;
        for (int col = 0; col < pts; ++col) {
            int piv = col;
            for (int r = col + 1; r < pts; ++r)
                if (std::abs(V[r * pts + col]) > std::abs(V[piv * pts + col])) piv = r;
            for (int m = 0; m < pts; ++m) {
                std::swap(V[col * pts + m], V[piv * pts + m]);
                std::swap(inv[col * pts + m], inv[piv * pts + m]);
            }
            double d = V[col * pts + col];
            for (int m = 0; m < pts; ++m) {
                V[col * pts + m] /= d;
                inv[col * pts + m] /= d;
            }
            for (int r = 0; r < pts; ++r) {
                if (r == col) continue;
                double f = V[r * pts + col];
                for (int m = 0; m < pts; ++m) {
                    V[r * pts + m] -= f * V[col * pts + m];
                    inv[r * pts + m] -= f * inv[col * pts + m];
                }
            }
        }
        vmono = inv; // vmono[m*pts+q]: monomial m coeff from node value q
    }

    // fills cumulative[i] = int_0^{t_i} a ds given per-node a values along the chord
    void cumulative(const Chord& ch, std::span<const cplx> a_vals,
                    std::span<cplx> cum) const {
        const double h = ch.panel_length();
        GaussRule gr(pts); // weights on [-1,1]
        cplx acc = 0.0;
        std::vector<cplx> c(pts);
        for (int p = 0; p < ch.panels; ++p) {
            const cplx* av = &a_vals[size_t(p) * pts];
            // monomial coefficients of the interpolant on the reference [0,1]
            for (int m = 0; m < pts; ++m) {
                cplx s = 0.0;
                for (int q = 0; q < pts; ++q) s += vmono[m * pts + q] * av[q];
                c[m] = s;
            }
            for (int q = 0; q < pts; ++q) {
                double xr = 0.5 * (gr.x[q] + 1.0); // node in reference coords
                cplx s = 0.0;
                double xp = xr;
                for (int m = 0; m < pts; ++m) {
                    s += c[m] * xp / double(m + 1);
                    xp *= xr;
                }
                cum[size_t(p) * pts + q] = acc + h * s;
            }
            // full-panel integral via exact monomial integration
            cplx full = 0.0;
            for (int m = 0; m < pts; ++m) full += c[m] / double(m + 1);
            acc += h * full;
        }
    }
};

// int_{SM} f dx dtheta via Santalo's formula:
//   int_{d+SM} cos(a) int_0^{2cos a} f(phi_t(b,a)) dt db da,
// with the boundary grid's uniform weights and chord Gauss panels.
// Deterministic: per-chord partial sums are accumulated in fixed order.
inline cplx santalo_integrate(const std::function<cplx(double, double, double)>& f,
                              const BoundaryGrid& bg, double h_t, int gauss_pts = 4) {
    const int nb = bg.n_beta, nt = bg.n_alpha_in();
    const double wgt = (two_pi / nb) * (two_pi / bg.n_alpha);
    std::vector<cplx> partial(size_t(nb) * nt, cplx{0.0});
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nb; ++i) {
        for (int t = 0; t < nt; ++t) {
            FanBeamPoint p{bg.beta(i), bg.alpha_in(t)};
            Chord ch(p, h_t, gauss_pts);
            cplx s = 0.0;
            for (size_t q = 0; q < ch.t.size(); ++q)
                s += ch.w[q] * f(ch.px(ch.t[q]), ch.py(ch.t[q]), ch.theta);
            partial[bg.in_idx(i, t)] = s * std::cos(p.alpha);
        }
    }
    cplx total = 0.0;
    for (const cplx& v : partial) total += v;
    return total * wgt;
}

} // namespace disctomo
