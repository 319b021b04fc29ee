#pragma once

#include "boundary.hpp"
#include "geometry.hpp"

namespace disctomo {

// Flow extension h_psi: the first integral of the geodesic flow with
// prescribed inflow values, h_psi(x,theta) = h(footpoint(x,theta)).
//
// Pointwise evaluation goes through the footpoint map directly. The gridded
// variant uses the separable structure of the footpoint in fan-beam
// coordinates: with w(rho,psi) = sqrt(1-rho^2 sin^2 psi) + i rho sin psi and
// psi = theta - beta,
//   e^{i p beta_-} e^{i n alpha_-} = (-1)^p e^{i p theta} w^{p-n},
// so each harmonic of h_psi at radius rho is assembled from the Fourier
// coefficients W(s,j) = (1/2pi) int w(rho,psi)^s e^{i j psi} dpsi, computed
// by one FFT per power s.

inline cplx flow_extend_point(const InflowField& h, double x, double y, double theta) {
    FanBeamPoint fp = footpoint(x, y, theta);
    return h.eval(fp.beta, wrap_angle_pm(fp.alpha));
}

namespace detail {

struct SparseModes {
    // per p: list of (s, coef) with s the w-power of the mode
    int P = 0;
    std::vector<std::vector<std::pair<int, cplx>>> rows;
    int S_max = 0;

    explicit SparseModes(const InflowField& h) {
        P = std::max(h.E.P, h.O.P);
        rows.resize(2 * P + 1);
        double scale = std::max(h.max_abs(), 1e-300);
        auto add = [&](const Coef2& C, bool odd) {
            for (int p = -C.P; p <= C.P; ++p)
                for (int q = -C.Q; q <= C.Q; ++q) {
                    cplx v = C.at(p, q);
                    if (std::abs(v) < 1e-16 * scale) continue;
                    int s = odd ? p - 2 * q - 1 : p - 2 * q;
                    rows[p + P].emplace_back(s, v);
                    S_max = std::max(S_max, std::abs(s));
                }
        };
        add(h.E, false);
        add(h.O, true);
    }
};

// W(s,j) table for one radius: powers s in [0, S], harmonics |j| <= J, with
// negative powers recovered from W(-s, j) = conj(W(s, -j)).
struct PowerTable {
    int S, J, N;
    std::vector<cplx> tab; // (S+1) x (2J+1)

    PowerTable(double rho, int S_, int J_) : S(S_), J(J_) {
        // resolve the slowest-decaying power: harmonics of w^s decay like
        // e^{-|j - s| eta} with eta = arccosh(1/rho)
        double eta = std::acosh(1.0 / std::min(rho, 1.0 - 1e-14));
        int need = S + J + int(45.0 / eta) + 32;
        N = 64;
        while (N < 2 * need) N *= 2;
        tab.assign(size_t(S + 1) * (2 * J + 1), cplx{0.0});
        std::vector<cplx> w(N), cur(N, cplx{1.0}), buf(N);
        for (int t = 0; t < N; ++t) {
            double psi = two_pi * t / N;
            double sn = rho * std::sin(psi);
            w[t] = cplx(std::sqrt(std::max(0.0, 1.0 - sn * sn)), sn);
        }
        for (int s = 0; s <= S; ++s) {
            std::copy(cur.begin(), cur.end(), buf.begin());
            fft::forward(buf);
            for (int j = -J; j <= J; ++j)
                tab[size_t(s) * (2 * J + 1) + j + J] = buf[((-j % N) + N) % N] / double(N);
            if (s < S)
                for (int t = 0; t < N; ++t) cur[t] *= w[t];
        }
    }

    cplx at(int s, int j) const {
        if (std::abs(j) > J) return 0.0;
        if (s >= 0) return tab[size_t(s) * (2 * J + 1) + j + J];
        return std::conj(tab[size_t(-s) * (2 * J + 1) + (-j) + J]);
    }
};

} // namespace detail

// Gridded flow extension: harmonic components of h_psi for |k| <= K_out.
inline FiberField flow_extend_grid(const InflowField& h, const PolarGridPtr& g,
                                   int K_out) {
    detail::SparseModes sm(h);
    const int P = sm.P, K = K_out, nb = g->n_beta;
    if (2 * (P + K) + 1 > nb)
        throw std::invalid_argument("flow_extend_grid: beta grid too coarse for P+K");
    FiberField out(g, K);
    // per-radius assembly; rows are independent
    std::vector<std::vector<cplx>> rows(g->n_rho,
                                        std::vector<cplx>(size_t(2 * K + 1) * nb));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < g->n_rho; ++i) {
        detail::PowerTable W(g->rho[i], sm.S_max, P + K);
        std::vector<cplx> coeff(2 * (P + K) + 1);
        for (int k = -K; k <= K; ++k) {
            std::fill(coeff.begin(), coeff.end(), cplx{0.0});
            for (int p = -P; p <= P; ++p) {
                const auto& row = sm.rows[p + P];
                if (row.empty()) continue;
                cplx acc = 0.0;
                for (const auto& [s, c] : row) acc += c * W.at(s, p - k);
                if (p % 2) acc = -acc;
                coeff[(p - k) + (P + K)] += acc;
            }
            auto samp = fft::samples_from_coeffs(coeff, P + K, 0.0, two_pi, nb);
            std::copy(samp.begin(), samp.end(),
                      rows[i].begin() + size_t(k + K) * nb);
        }
    }
    for (int k = -K; k <= K; ++k)
        for (int i = 0; i < g->n_rho; ++i)
            std::copy_n(rows[i].begin() + size_t(k + K) * nb, nb,
                        out.mode(k).values.begin() + g->idx(i, 0));
    return out;
}

// Fiber average of the flow extension evaluated at one point, by adaptive
// trapezoid quadrature over theta (an independent route used as an oracle).
inline cplx flow_extend_average_quadrature(const InflowField& h, double x, double y,
                                           int n_theta) {
    cplx s = 0.0;
    for (int t = 0; t < n_theta; ++t)
        s += flow_extend_point(h, x, y, two_pi * t / n_theta);
    return s / double(n_theta);
}

} // namespace disctomo
