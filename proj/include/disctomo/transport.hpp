#pragma once

#include "calculus.hpp"
#include "flow.hpp"

namespace disctomo {

// Sinogram: attenuated ray-transform data on the inflow grid, together with
// the attenuation magnitude a_inf = sup |a| and the integrand cutoff m.
struct Sinogram {
    InflowSamples data;
    double a_inf = 0.0;
    int m = 0;

    double norm() const { return data.norm(); }
};

// sup |a| over a 4x-refined evaluation grid (sampling on the field grid alone
// underestimates the sup).
inline double sup_norm_4x(const DiscField& a) {
    if (!a.grid && !a.is_analytic()) return 0.0;
    int nr = a.grid ? 4 * a.grid->n_rho : 128;
    int nb = a.grid ? 4 * a.grid->n_beta : 512;
    DiscEval ev(a);
    double m = 0.0;
    for (int i = 0; i < nr; ++i) {
        double rho = (i + 0.5) / nr;
        for (int j = 0; j < nb; ++j) {
            double beta = two_pi * j / nb;
            m = std::max(m, std::abs(ev(rho * std::cos(beta), rho * std::sin(beta))));
        }
    }
    return m;
}

struct ChordQuadrature {
    double h_t = 2.0 / 512;
    int gauss_pts = 4;
};

namespace detail {

// Generic attenuated chord integrator: evaluates
//   int_0^{L} f(gamma(t), theta) exp(int_0^t a ds) dt
// for every inflow grid node, with the cumulative attenuation shared across
// integrand components. Deterministic parallel map over chords.
template <typename FEval>
InflowSamples integrate_chords(const BoundaryGridPtr& bg, const DiscField* a,
                               const ChordQuadrature& cq, FEval&& fe) {
    InflowSamples out(bg);
    const int nb = bg->n_beta, nt = bg->n_alpha_in();
    std::shared_ptr<DiscEval> aev;
    if (a && (a->has_grid() || a->is_analytic())) aev = std::make_shared<DiscEval>(*a);
    CumulativeIntegrator ci(cq.gauss_pts);
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int i = 0; i < nb; ++i) {
        for (int t = 0; t < nt; ++t) {
            FanBeamPoint p{bg->beta(i), bg->alpha_in(t)};
            Chord ch(p, cq.h_t, cq.gauss_pts);
            std::vector<cplx> cum(ch.t.size(), cplx{0.0});
            if (aev) {
                std::vector<cplx> av(ch.t.size());
                for (size_t q = 0; q < ch.t.size(); ++q)
                    av[q] = (*aev)(ch.px(ch.t[q]), ch.py(ch.t[q]));
                ci.cumulative(ch, av, cum);
            }
            cplx acc = 0.0;
            for (size_t q = 0; q < ch.t.size(); ++q) {
                cplx val = fe(ch.px(ch.t[q]), ch.py(ch.t[q]), ch.theta);
                acc += ch.w[q] * val * (aev ? std::exp(cum[q]) : cplx{1.0});
            }
            out.at(i, t) = acc;
        }
    }
    return out;
}

} // namespace detail

// Attenuated X-ray transform of a fiber field:
//   I_a f(beta,alpha) = int_0^{2 cos a} f(gamma_t, theta) e^{int_0^t a} dt.
inline Sinogram xray_attenuated(const FiberField& f, const DiscField& a,
                                const BoundaryGridPtr& bg,
                                const ChordQuadrature& cq = {}) {
    std::vector<std::pair<int, DiscEval>> comps;
    for (int k = -f.K; k <= f.K; ++k) {
        const auto& m = f.mode(k);
        if (!m.is_analytic() && !m.has_grid()) continue;
        if (m.has_grid() && !m.is_analytic()) {
            double mx = 0.0;
            for (const auto& v : m.values) mx = std::max(mx, std::abs(v));
            if (mx == 0.0) continue;
        }
        comps.emplace_back(k, DiscEval(m));
    }
    Sinogram s;
    s.m = f.K;
    s.a_inf = sup_norm_4x(a);
    s.data = detail::integrate_chords(
        bg, &a, cq, [&](double x, double y, double theta) {
            cplx acc = 0.0;
            for (const auto& [k, ev] : comps)
                acc += ev(x, y) * std::exp(I * double(k) * theta);
            return acc;
        });
    return s;
}

// Attenuated transform of a raw integrand u(x,y,theta).
inline Sinogram xray_attenuated_fn(const std::function<cplx(double, double, double)>& u,
                                   const DiscField& a, const BoundaryGridPtr& bg,
                                   const ChordQuadrature& cq = {}) {
    Sinogram s;
    s.a_inf = sup_norm_4x(a);
    s.data = detail::integrate_chords(bg, &a, cq, u);
    return s;
}

// Unattenuated transforms: I_0 on degree-0 integrands and I_perp h = I(X_perp h).
inline Sinogram xray_I0(const DiscField& f, const BoundaryGridPtr& bg,
                        const ChordQuadrature& cq = {}) {
    Sinogram s;
    DiscEval ev(f);
    s.data = detail::integrate_chords(
        bg, nullptr, cq, [&](double x, double y, double) { return ev(x, y); });
    return s;
}

inline Sinogram xray_Iperp(const DiscField& h, const BoundaryGridPtr& bg,
                           const ChordQuadrature& cq = {}) {
    FiberField xh = transverse_of_scalar(h);
    DiscField none;
    Sinogram s = xray_attenuated(xh, none, bg, cq);
    s.m = 1;
    return s;
}

// Transport solve: X u + a u = -f on SM, u|_{d-SM} = 0; returns the harmonic
// components of u on the grid (theta resolved on a uniform fiber grid).
// u(x,theta) = int_0^{tau(x,theta)} f(x+tv, theta) exp(int_0^t a) dt.
inline FiberField transport_solve(const FiberField& f, const DiscField& a,
                                  const PolarGridPtr& g, int K_out, int n_theta,
                                  const ChordQuadrature& cq = {}) {
    std::vector<std::pair<int, DiscEval>> comps;
    for (int k = -f.K; k <= f.K; ++k) {
        const auto& m = f.mode(k);
        if (!m.is_analytic() && !m.has_grid()) continue;
        comps.emplace_back(k, DiscEval(m));
    }
    std::shared_ptr<DiscEval> aev;
    if (a.has_grid() || a.is_analytic()) aev = std::make_shared<DiscEval>(a);
    CumulativeIntegrator ci(cq.gauss_pts);
    GaussRule gr(cq.gauss_pts);
    std::vector<cplx> samples(size_t(n_theta) * g->size());
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int i = 0; i < g->n_rho; ++i) {
        for (int j = 0; j < g->n_beta; ++j) {
            std::vector<double> ts, ws;
            std::vector<cplx> av, cum;
            for (int t = 0; t < n_theta; ++t) {
                double th = two_pi * t / n_theta;
                double x0 = g->x(i, j), y0 = g->y(i, j);
                double L = exit_time(x0, y0, th);
                int panels = std::max(1, int(std::ceil(L / cq.h_t)));
                double h = L / panels;
                ts.clear();
                ws.clear();
                for (int p_ = 0; p_ < panels; ++p_)
                    for (int q = 0; q < cq.gauss_pts; ++q) {
                        ts.push_back(p_ * h + 0.5 * h * (gr.x[q] + 1.0));
                        ws.push_back(0.5 * h * gr.w[q]);
                    }
                cum.assign(ts.size(), cplx{0.0});
                if (aev) {
                    av.resize(ts.size());
                    for (size_t q = 0; q < ts.size(); ++q)
                        av[q] = (*aev)(x0 + ts[q] * std::cos(th),
                                       y0 + ts[q] * std::sin(th));
                    // reuse the chord cumulative integrator via a stub chord
                    Chord stub;
                    stub.length = L;
                    stub.panels = panels;
                    stub.pts = cq.gauss_pts;
                    ci.cumulative(stub, av, cum);
                }
                cplx acc = 0.0;
                for (size_t q = 0; q < ts.size(); ++q) {
                    double x = x0 + ts[q] * std::cos(th), y = y0 + ts[q] * std::sin(th);
                    cplx val = 0.0;
                    for (const auto& [k, ev] : comps)
                        val += ev(x, y) * std::exp(I * double(k) * th);
                    acc += ws[q] * val * std::exp(cum[q]);
                }
                samples[size_t(t) * g->size() + g->idx(i, j)] = acc;
            }
        }
    }
    return FiberField::from_theta_samples(g, K_out, samples, n_theta);
}

// ---------------------------------------------------------------------------
// Backprojections.
// ---------------------------------------------------------------------------

enum class Backprojection { I0sharp, Iperpsharp, I0star };

// I0sharp h  = 2 pi (h_psi)_0
// Iperpsharp = -2 pi (X_perp h_psi)_0   (sign fixed by the FBP identities)
// I0star h   = ((h / cos a)_psi)_0
inline DiscField backproject(const InflowField& h, Backprojection kind,
                             const PolarGridPtr& g) {
    switch (kind) {
        case Backprojection::I0sharp: {
            auto u = flow_extend_grid(h, g, 0);
            return cplx(two_pi) * u.mode(0);
        }
        case Backprojection::Iperpsharp: {
            auto u = flow_extend_grid(h, g, 1);
            return cplx(-two_pi) * transverse_X(u).mode(0);
        }
        case Backprojection::I0star:
            throw std::invalid_argument(
                "backproject: I0star needs samples (cos-divided) or a closed form; "
                "use backproject_I0star");
    }
    throw std::logic_error("backproject: unreachable");
}

// I0* from inflow samples: divides by cos(alpha) (the offset grid keeps
// cos(alpha) bounded away from zero; the amplification near glancing is the
// caller's lookout and is reported through the returned flag).
struct I0StarResult {
    DiscField field;
    double glancing_amplification = 0.0; // max 1/cos(alpha) used
};

inline I0StarResult backproject_I0star(const InflowSamples& s, const PolarGridPtr& g,
                                       int P, int Q) {
    InflowSamples divided(s.bg);
    double amp = 0.0;
    for (int i = 0; i < s.bg->n_beta; ++i)
        for (int t = 0; t < s.bg->n_alpha_in(); ++t) {
            double c = std::cos(s.bg->alpha_in(t));
            amp = std::max(amp, 1.0 / c);
            divided.at(i, t) = s.at(i, t) / c;
        }
    // W/cos-type data is even-frequency (V+ content)
    auto hf = analyze_inflow(divided, InflowBasis::even, P, Q);
    auto u = flow_extend_grid(hf, g, 0);
    return {u.mode(0), amp};
}

} // namespace disctomo
