#pragma once

#include "boundary_ops.hpp"
#include "transport.hpp"

namespace disctomo {

// ---------------------------------------------------------------------------
// Closed-form kernels.
// ---------------------------------------------------------------------------

// Z_k = sqrt((k+1)/(2 pi^2)) z^k, normalized to ||Z_k||_{L2(SM)} = 1.
inline cplx eval_Zk(int k, double x, double y) {
    return std::sqrt((k + 1) / (2 * pi * pi)) * std::pow(cplx(x, y), k);
}

inline DiscField Zk_field(int k) {
    return DiscField::analytic(
        [k](double x, double y) { return eval_Zk(k, x, y); }, "Z_k");
}

// W_k = (-1)^k (sqrt(k+1)/2) u'_{k,k} on d+SM.
inline cplx eval_Wk(int k, double beta, double alpha) {
    double c = double(k % 2 ? -1 : 1) * std::sqrt(k + 1.0) / (2 * pi * std::numbers::sqrt2);
    return c * std::exp(I * double(k) * beta) *
           (std::exp(I * (2.0 * k + 1.0) * alpha) +
            double(k % 2 ? -1 : 1) * std::exp(-I * alpha));
}

inline InflowField Wk_inflow(int k, int P, int Q) {
    return cplx(double(k % 2 ? -1 : 1) * std::sqrt(k + 1.0) / 2.0) *
           make_basis({BasisFamily::up, k, k}, P, Q);
}

// u'_{k,k}/cos(alpha) via the finite geometric sum (no cos division):
//   (sqrt2/pi) e^{ik beta} (-1)^k sum_{p=0}^k (-1)^p e^{2ip alpha}
inline cplx eval_ukk_over_cos(int k, double beta, double alpha) {
    cplx s = 0.0;
    for (int p = 0; p <= k; ++p)
        s += double(p % 2 ? -1 : 1) * std::exp(2.0 * I * double(p) * alpha);
    return std::numbers::sqrt2 / pi * double(k % 2 ? -1 : 1) *
           std::exp(I * double(k) * beta) * s;
}

inline InflowField ukk_over_cos_inflow(int k, int P, int Q) {
    InflowField f = InflowField::zero(P, Q);
    double c = std::numbers::sqrt2 / pi * double(k % 2 ? -1 : 1);
    for (int p = 0; p <= k; ++p) f.E.add(k, p, c * double(p % 2 ? -1 : 1));
    return f;
}

// The backprojection kernel
//   G(z; beta, alpha) = sum_k conj(W_k)(beta,alpha) Z_k(z)
//                     = (1/4pi^2) [ e^{-i alpha}/(1+z e^{-i(beta+2alpha)})^2
//                                 + e^{i alpha}/(1-z e^{-i beta})^2 ].
enum class GreenMode { closed, series, separable };

inline cplx green_kernel(cplx z, double beta, double alpha,
                         GreenMode mode = GreenMode::closed, int series_terms = 200) {
    if (std::abs(z) >= 1.0 - 1e-12)
        throw std::domain_error("green_kernel: |z| must be < 1");
    switch (mode) {
        case GreenMode::closed: {
            cplx d1 = 1.0 + z * std::exp(-I * (beta + 2.0 * alpha));
            cplx d2 = 1.0 - z * std::exp(-I * beta);
            return (std::exp(-I * alpha) / (d1 * d1) + std::exp(I * alpha) / (d2 * d2)) /
                   (4 * pi * pi);
        }
        case GreenMode::series: {
            cplx s = 0.0;
            for (int k = 0; k < series_terms; ++k)
                s += std::conj(eval_Wk(k, beta, alpha)) *
                     eval_Zk(k, z.real(), z.imag());
            return s;
        }
        case GreenMode::separable: {
            // (Id + S_A^*)/2 of e^{i alpha}/(2 pi^2 (1 - z e^{-i beta})^2)
            auto half = [&](double b, double a) {
                cplx d = 1.0 - z * std::exp(-I * b);
                return std::exp(I * a) / (2 * pi * pi * d * d);
            };
            return 0.5 * (half(beta, alpha) + half(beta + pi + 2 * alpha, -alpha));
        }
    }
    throw std::logic_error("green_kernel: unreachable");
}

// ---------------------------------------------------------------------------
// Invariant distributions with prescribed fiberwise average.
// ---------------------------------------------------------------------------

// Coefficients <f, Z_k>_{SM} of an (approximately) holomorphic disc function,
// plus the non-holomorphic defect ||f - sum c_k Z_k|| / ||f||.
struct HoloCoeffs {
    std::vector<cplx> c;
    double defect = 0.0;
};

inline HoloCoeffs holo_coefficients(const DiscField& f, int KZ) {
    DiscField fg = f;
    if (!fg.has_grid()) throw std::logic_error("holo_coefficients: needs grid");
    HoloCoeffs out;
    out.c.resize(KZ + 1);
    DiscField acc = DiscField::zero(fg.grid);
    for (int k = 0; k <= KZ; ++k) {
        DiscField zk = Zk_field(k).on_grid(fg.grid);
        out.c[k] = two_pi * fg.inner_M(zk);
        acc = acc + out.c[k] * zk;
    }
    double nf = fg.norm_M();
    out.defect = nf > 0 ? (fg - acc).norm_M() / nf : 0.0;
    return out;
}

// W_f = sum_k <f,Z_k> W_k as inflow data (odd family).
inline InflowField invariant_from_function(const HoloCoeffs& hc, int P, int Q) {
    InflowField out = InflowField::zero(P, Q);
    for (int k = 0; k < int(hc.c.size()); ++k)
        out = out + hc.c[k] * Wk_inflow(k, P, Q);
    return out;
}

// Same data divided by cos(alpha), assembled from the finite sums (even family).
inline InflowField invariant_over_cos(const HoloCoeffs& hc, int P, int Q) {
    InflowField out = InflowField::zero(P, Q);
    for (int k = 0; k < int(hc.c.size()); ++k)
        out = out + hc.c[k] * cplx(double(k % 2 ? -1 : 1) * std::sqrt(k + 1.0) / 2.0) *
                        ukk_over_cos_inflow(k, P, Q);
    return out;
}

// Kernel-integral representation W_f(beta,alpha) = 2pi int_M f conj(G) dx.
// The kernel has second-order poles on the boundary circle, so the integral
// is done ring by ring: the angular integral contracts the ring modes of f
// against the kernel's geometric series exactly, and the radial factors
// int f_m(rho) rho^{m+1} drho use the grid quadrature. (A brute 2-D node sum
// cannot resolve the pole; see the unit tests for the coarse cross-check.)
inline InflowSamples invariant_kernel_integral(const DiscField& f,
                                               const BoundaryGridPtr& bg) {
    DiscField fg = f;
    if (!fg.has_grid()) throw std::logic_error("invariant_kernel_integral: needs grid");
    const auto& g = *fg.grid;
    const int B = g.n_beta / 2 - 1, W = 2 * B + 1;
    auto modes = fg.ring_modes();
    // radial moments r_m = int_0^1 f_m(rho) rho^{m+1} drho, m >= 0
    std::vector<cplx> rm(B + 1, cplx{0.0});
    for (int m = 0; m <= B; ++m)
        for (int i = 0; i < g.n_rho; ++i)
            rm[m] += g.rho_w[i] * std::pow(g.rho[i], m + 1) *
                     modes[size_t(i) * W + m + B];
    InflowSamples out(bg);
    for (int i = 0; i < bg->n_beta; ++i)
        for (int t = 0; t < bg->n_alpha_in(); ++t) {
            double beta = bg->beta(i), alpha = bg->alpha_in(t);
            cplx acc = 0.0;
            for (int m = 0; m <= B; ++m) {
                if (rm[m] == cplx{0.0}) continue;
                cplx term = double(m % 2 ? -1 : 1) *
                                std::exp(I * (m * (beta + 2 * alpha) + alpha)) +
                            std::exp(I * (double(m) * beta - alpha));
                acc += double(m + 1) * term * rm[m];
            }
            out.at(i, t) = acc;
        }
    return out;
}

// J_{k,p}(x) = (1/2pi) int (e^{ik beta} e^{2ip alpha})_psi dtheta by direct
// angular quadrature of the footpoint map (the appendix oracle).
inline cplx j_kp_oracle(int k, int p, double x, double y, int n_nodes = 2048) {
    cplx s = 0.0;
    for (int t = 0; t < n_nodes; ++t) {
        FanBeamPoint fp = footpoint(x, y, two_pi * t / n_nodes);
        s += std::exp(I * (double(k) * fp.beta + 2.0 * double(p) * fp.alpha));
    }
    return s / double(n_nodes);
}

// Closed form of J_{k,p}: (1/2) z^k at p = 0 and (-1)^k (1/2) z^k at p = k
// for k >= 1, zero otherwise; J_{0,0} = 1 (flow extension of the constant).
inline cplx j_kp_closed(int k, int p, double x, double y) {
    if (k == 0 && p == 0) return 1.0;
    if (p == 0) return 0.5 * std::pow(cplx(x, y), k);
    if (p == k) return 0.5 * double(k % 2 ? -1 : 1) * std::pow(cplx(x, y), k);
    return 0.0;
}

// Split inflow samples into the ranges of I_0 and I_perp: the S_A-even part
// is expanded in the odd family (u'-span, where Range I_0 lives), the S_A-odd
// part in the even family (v-span, Range I_perp). This is the representation
// P-dagger acts on.
inline InflowField split_ranges(const InflowSamples& s, int P, int Q) {
    auto sym = s.sa_pullback();
    InflowSamples splus(s.bg), sminus(s.bg);
    for (size_t q = 0; q < s.v.size(); ++q) {
        splus.v[q] = 0.5 * (s.v[q] + sym.v[q]);
        sminus.v[q] = 0.5 * (s.v[q] - sym.v[q]);
    }
    return {analyze_inflow(sminus, InflowBasis::even, P, Q).E,
            analyze_inflow(splus, InflowBasis::odd, P, Q).O};
}

// Conjugate of inflow data: conj(sum c e^{i(p b + n a)}) reflects (p,n).
inline InflowField conj_inflow(const InflowField& f) {
    InflowField out = InflowField::zero(std::max(f.E.P, f.O.P),
                                        std::max(f.E.Q, f.O.Q + 1));
    for (int p = -f.E.P; p <= f.E.P; ++p)
        for (int q = -f.E.Q; q <= f.E.Q; ++q)
            out.E.at(-p, -q) += std::conj(f.E.at(p, q));
    for (int p = -f.O.P; p <= f.O.P; ++p)
        for (int q = -f.O.Q; q <= f.O.Q; ++q)
            out.O.at(-p, -q - 1) += std::conj(f.O.at(p, q));
    return out;
}

// ---------------------------------------------------------------------------
// Holomorphic integrating factors (HIF).
// ---------------------------------------------------------------------------

// w_a = 2 pi i (Id + iH) n_psi with n = -(1/8pi) P-* I_0 a: a fiberwise odd,
// holomorphic solution of X w = -a, with inflow trace
// rho_a = (1/2) I_0 a - (i/4) P-* I_0 a. The conjugate variant builds
// conj(w_{conj a}), the fiberwise odd antiholomorphic solution used for the
// negative-frequency side of the reconstruction.
struct IntegratingFactor {
    FiberField w;          // on SM
    InflowField rho;       // w|_{d+SM}
    BoundaryField w_trace; // w|_{dSM}
    InflowSamples rho_samples;
    bool conjugate_variant = false;
};

struct HifParams {
    int K = 16;       // fiber cutoff of w
    int P = 64;       // beta cutoff of boundary data
    int Q = 64;       // half-range alpha cutoff
    ChordQuadrature cq{};
};

inline IntegratingFactor hif_build(const DiscField& a, bool conjugate,
                                   const PolarGridPtr& g, const BoundaryGridPtr& bg,
                                   const HifParams& hp = {}) {
    DiscField aa = conjugate ? conj(a.on_grid(g)) : a.on_grid(g);
    auto sino = xray_I0(aa, bg, hp.cq);
    int P = std::min({hp.P, (bg->n_beta - 1) / 2, g->n_beta / 2 - hp.K - 1});
    int Q = std::min(hp.Q, bg->n_alpha / 4 - 1);
    // I_0 a lives in the odd family (V+ content); symmetrize and expand
    auto i0 = analyze_inflow(sino.data, InflowBasis::odd, P, Q).parity_part(+1);
    InflowField pstar = op_P_star(i0, HilbertParity::odd); // P-* I_0 a, v'-type
    InflowField n = cplx(-1.0 / (8 * pi)) * pstar;
    FiberField npsi = flow_extend_grid(n, g, hp.K);
    FiberField w = cplx(two_pi * I) * holo_projector(npsi, +1);
    InflowField rho = 0.5 * i0 + cplx(-0.25 * I) * pstar;
    // w|_{dSM} = (1/2) A- I_0 a - (i/4) A+ P-* I_0 a
    BoundaryField wtr = cplx(0.5) * a_extend(i0, -1) +
                        cplx(-0.25 * I) * a_extend(pstar, +1);
    IntegratingFactor out;
    if (conjugate) {
        out.w = conj(w);
        out.rho = conj_inflow(rho);
        out.w_trace = conj_field(wtr);
    } else {
        out.w = w;
        out.rho = rho;
        out.w_trace = wtr;
    }
    out.rho_samples = sample_inflow(out.rho, bg);
    out.conjugate_variant = conjugate;
    return out;
}

// ---------------------------------------------------------------------------
// The holomorphic primitive of Prop-type data: u = -i (Id+iH)(P^+ I(f0 + X_perp fs))_psi
// solves X u = -f0 - X_perp fs with u_0 = -i fs; fiberwise holomorphic.
// ---------------------------------------------------------------------------

struct PrimitiveParams {
    int K = 16;
    int P = 64;
    int Q = 64;
    ChordQuadrature cq{};
};

inline FiberField special_primitive(const DiscField& f0, const DiscField& fs,
                                    const PolarGridPtr& g, const BoundaryGridPtr& bg,
                                    const PrimitiveParams& pp = {}) {
    FiberField integrand(g, 1);
    integrand.mode(0) = f0.on_grid(g);
    FiberField xperp = transverse_of_scalar(fs.on_grid(g));
    integrand.mode(1) = xperp.mode(1);
    integrand.mode(-1) = xperp.mode(-1);
    DiscField none;
    auto sino = xray_attenuated(integrand, none, bg, pp.cq);
    int P = std::min({pp.P, (bg->n_beta - 1) / 2, g->n_beta / 2 - pp.K - 1});
    int Q = std::min(pp.Q, bg->n_alpha / 4 - 1);
    InflowField data = split_ranges(sino.data, P, Q);
    InflowField pd = op_P_dagger(data);
    FiberField ext = flow_extend_grid(pd, g, pp.K);
    return cplx(0, -1) * holo_projector(ext, +1);
}

// ---------------------------------------------------------------------------
// Holomorphization operator on boundary traces:
//   B-> h = (1/2)[(Id-iH)h + i(Id+iH)(A+ P^+ A-* (Id-iH) h)]|_{d+SM}
//   B<- h = conj(B->(conj h)).
// For a transport solution u of Xu = -f with f = O_{>= -1}, the corrected
// solution u - (B->(u|_{dSM}))_psi is fiberwise holomorphic.
// ---------------------------------------------------------------------------

// (Id -+ iH) on torus coefficients: multiplier 1 -+ ... acts per fiber mode n.
inline BoundaryField boundary_holo_projector(const BoundaryField& h, int csign) {
    if (h.has_square_part())
        throw std::domain_error("boundary_holo_projector: square-wave content");
    Coef2 r(h.b.P, h.b.Q);
    for (int p = -h.b.P; p <= h.b.P; ++p)
        for (int n = -h.b.Q; n <= h.b.Q; ++n)
            r.at(p, n) = (1.0 + csign * sgn(n)) * h.b.at(p, n);
    return BoundaryField{std::move(r)};
}

// The inflow data sits in Range I_0 (+) Range I_perp by the transport
// structure, so P-dagger acts on the grid-level parity split.
inline InflowField holomorphize(const BoundaryField& trace, const BoundaryGridPtr& bg,
                                bool backward = false) {
    if (backward) return conj_inflow(holomorphize(conj_field(trace), bg, false));
    BoundaryField w1 = boundary_holo_projector(trace, -1);
    InflowField s = a_restrict(w1, -1);
    int P = std::min(std::max(s.E.P, s.O.P), (bg->n_beta - 1) / 2);
    int Q = std::min(std::max(s.E.Q, s.O.Q), bg->n_alpha / 4 - 1);
    InflowField t = op_P_dagger(split_ranges(sample_inflow(s, bg), P, Q));
    BoundaryField r = a_extend(t, +1);
    if (r.has_square_part())
        throw std::logic_error("holomorphize: unexpected square-wave content");
    BoundaryField w2 = cplx(0, 1) * boundary_holo_projector(r, +1);
    return 0.5 * (restrict_coeffs(w1) + restrict_coeffs(w2));
}

} // namespace disctomo
