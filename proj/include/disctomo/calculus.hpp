#pragma once

#include <Eigen/Dense>

#include <mutex>

#include "field.hpp"

namespace disctomo {

enum class Wirtinger { del, dbar };

namespace detail {

// Global polynomial differentiation matrix on the grid's radial nodes
// (barycentric form). Spectrally accurate for smooth radial profiles.
inline const std::vector<double>& diff_matrix(const PolarGrid& g) {
    static std::mutex mtx;
    static std::map<const PolarGrid*, std::vector<double>> cache;
    std::scoped_lock lk(mtx);
    auto it = cache.find(&g);
    if (it != cache.end()) return it->second;
    const int n = g.n_rho;
    std::vector<double> D(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = (g.bary_w[j] / g.bary_w[i]) / (g.rho[i] - g.rho[j]);
            D[size_t(i) * n + j] = d;
            diag -= d;
        }
        D[size_t(i) * n + i] = diag;
    }
    return cache.emplace(&g, std::move(D)).first->second;
}

// ring modes -> ring modes derivative in rho
inline std::vector<cplx> radial_derivative(const PolarGrid& g,
                                           const std::vector<cplx>& modes) {
    const auto& D = diff_matrix(g);
    const int n = g.n_rho, W = g.n_beta - 1; // 2B+1 with B = n_beta/2-1
    std::vector<cplx> out(modes.size(), cplx{0.0});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d = D[size_t(i) * n + j];
            if (d == 0.0) continue;
            const cplx* src = &modes[size_t(j) * W];
            cplx* dst = &out[size_t(i) * W];
            for (int m = 0; m < W; ++m) dst[m] += d * src[m];
        }
    return out;
}

inline DiscField from_ring_modes(const PolarGridPtr& g, const std::vector<cplx>& modes) {
    const int nb = g->n_beta, B = nb / 2 - 1;
    DiscField f = DiscField::zero(g);
    std::vector<cplx> buf(nb);
    for (int i = 0; i < g->n_rho; ++i) {
        std::fill(buf.begin(), buf.end(), cplx{0.0});
        for (int n = -B; n <= B; ++n)
            buf[(n + nb) % nb] += modes[size_t(i) * (2 * B + 1) + n + B];
        fft::inverse(buf);
        std::copy_n(buf.begin(), nb, f.values.begin() + g->idx(i, 0));
    }
    return f;
}

} // namespace detail

// Wirtinger derivatives in polar form:
//   del  = (e^{-i beta}/2)(d_rho - (i/rho) d_beta)
//   dbar = (e^{+i beta}/2)(d_rho + (i/rho) d_beta)
// Spectral in beta, global polynomial differentiation in rho.
inline DiscField wirtinger(const DiscField& f, Wirtinger which) {
    if (!f.has_grid()) throw std::logic_error("wirtinger: field needs grid samples");
    const auto& g = *f.grid;
    const int B = g.n_beta / 2 - 1, W = 2 * B + 1;
    auto modes = f.ring_modes();
    auto dmodes = detail::radial_derivative(g, modes);
    std::vector<cplx> out(modes.size(), cplx{0.0});
    for (int i = 0; i < g.n_rho; ++i)
        for (int n = -B; n <= B; ++n) {
            int n_out = which == Wirtinger::del ? n - 1 : n + 1;
            if (std::abs(n_out) > B) continue;
            double sign = which == Wirtinger::del ? 1.0 : -1.0;
            cplx v = 0.5 * (dmodes[size_t(i) * W + n + B] +
                            sign * double(n) / g.rho[i] * modes[size_t(i) * W + n + B]);
            out[size_t(i) * W + n_out + B] += v;
        }
    return detail::from_ring_modes(f.grid, out);
}

// eta+ = e^{i theta} del and eta- = e^{-i theta} dbar on fiber fields;
// X = eta+ + eta-, X_perp = -i(eta+ - eta-).
inline FiberField eta_plus(const FiberField& u) {
    FiberField out(u.grid, u.K + 1);
    for (int k = -u.K; k <= u.K; ++k)
        out.mode(k + 1) = wirtinger(u.mode(k).on_grid(u.grid), Wirtinger::del);
    return out;
}
inline FiberField eta_minus(const FiberField& u) {
    FiberField out(u.grid, u.K + 1);
    for (int k = -u.K; k <= u.K; ++k)
        out.mode(k - 1) = wirtinger(u.mode(k).on_grid(u.grid), Wirtinger::dbar);
    return out;
}
inline FiberField geodesic_X(const FiberField& u) {
    return eta_plus(u) + eta_minus(u);
}
inline FiberField transverse_X(const FiberField& u) {
    return cplx(0, -1) * (eta_plus(u) - eta_minus(u));
}

// X_perp applied to a scalar (degree-0) field, as a degree-1 fiber field.
inline FiberField transverse_of_scalar(const DiscField& h) {
    FiberField u(h.grid, 0);
    u.mode(0) = h;
    return transverse_X(u);
}

// Boundary trace of each beta mode at rho = 1 via barycentric extrapolation.
// Returns coefficients c_n with f(e^{i beta}) = sum c_n e^{i n beta}.
inline std::vector<cplx> boundary_ring_modes(const DiscField& f) {
    const auto& g = *f.grid;
    const int B = g.n_beta / 2 - 1, W = 2 * B + 1;
    auto modes = f.ring_modes();
    std::vector<cplx> out(W);
    std::vector<cplx> prof(g.n_rho);
    for (int n = -B; n <= B; ++n) {
        for (int i = 0; i < g.n_rho; ++i) prof[i] = modes[size_t(i) * W + n + B];
        out[n + B] = barycentric_eval(1.0, g.rho, g.bary_w, prof);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-angular-mode radial solves.
// ---------------------------------------------------------------------------

namespace detail {

// Nodes {rho_0..rho_{nr-1}, 1} with the collocation Laplacian for mode n:
//   L_n = D^2 + diag(1/rho) D - n^2 diag(1/rho^2),
// rows at the interior nodes plus one boundary-condition row. The polynomial
// collocation space carries the regularity at rho = 0 implicitly (polynomials
// cannot represent rho^{-n}).
struct RadialSolver {
    int nr;
    std::vector<double> nodes, bw;
    Eigen::MatrixXd De; // derivative matrix on extended nodes

    explicit RadialSolver(const PolarGrid& g) : nr(g.n_rho) {
        nodes = g.rho;
        nodes.push_back(1.0);
        bw = barycentric_weights(nodes);
        const int m = nr + 1;
        De.resize(m, m);
        for (int i = 0; i < m; ++i) {
            double diag = 0.0;
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                double d = (bw[j] / bw[i]) / (nodes[i] - nodes[j]);
                De(i, j) = d;
                diag -= d;
            }
            De(i, i) = diag;
        }
    }

    // Solve L_n v = r with either v(1) = bc (dirichlet) or v'(1) = bc
    // (neumann). Returns values at the interior nodes.
    std::vector<cplx> solve(int n, std::span<const cplx> rhs, bool neumann,
                            cplx bc) const {
        const int m = nr + 1;
        Eigen::MatrixXd L = De * De;
        for (int i = 0; i < m; ++i) {
            double ri = 1.0 / nodes[i];
            for (int j = 0; j < m; ++j) L(i, j) += ri * De(i, j);
            L(i, i) -= double(n) * double(n) * ri * ri;
        }
        Eigen::MatrixXcd A(m, m);
        Eigen::VectorXcd b(m);
        for (int i = 0; i < nr; ++i) {
            for (int j = 0; j < m; ++j) A(i, j) = L(i, j);
            b(i) = rhs[i];
        }
        for (int j = 0; j < m; ++j)
            A(nr, j) = neumann ? cplx(De(nr, j)) : cplx(j == nr ? 1.0 : 0.0);
        b(nr) = bc;
        Eigen::VectorXcd v = A.partialPivLu().solve(b);
        std::vector<cplx> out(nr);
        for (int i = 0; i < nr; ++i) out[i] = v(i);
        return out;
    }
};

inline const RadialSolver& radial_solver(const PolarGrid& g) {
    static std::mutex mtx;
    static std::map<const PolarGrid*, RadialSolver> cache;
    std::scoped_lock lk(mtx);
    auto it = cache.find(&g);
    if (it == cache.end()) it = cache.emplace(&g, RadialSolver(g)).first;
    return it->second;
}

} // namespace detail

// Dirichlet Poisson solve: Delta v = rhs, v|_{dM} = 0, per beta mode.
inline DiscField poisson_dirichlet(const DiscField& rhs) {
    const auto& g = *rhs.grid;
    const auto& rs = detail::radial_solver(g);
    const int B = g.n_beta / 2 - 1, W = 2 * B + 1;
    auto modes = rhs.ring_modes();
    double mx = 0.0;
    for (const auto& c : modes) mx = std::max(mx, std::abs(c));
    std::vector<cplx> out(modes.size(), cplx{0.0});
    std::vector<int> active;
    for (int n = -B; n <= B; ++n) {
        double cn = 0.0;
        for (int i = 0; i < g.n_rho; ++i)
            cn = std::max(cn, std::abs(modes[size_t(i) * W + n + B]));
        if (cn > 1e-15 * std::max(mx, 1e-300)) active.push_back(n);
    }
#pragma omp parallel for schedule(dynamic)
    for (size_t ai = 0; ai < active.size(); ++ai) {
        int n = active[ai];
        std::vector<cplx> p(g.n_rho);
        for (int i = 0; i < g.n_rho; ++i) p[i] = modes[size_t(i) * W + n + B];
        auto v = rs.solve(n, p, false, 0.0);
        for (int i = 0; i < g.n_rho; ++i) out[size_t(i) * W + n + B] = v[i];
    }
    return detail::from_ring_modes(rhs.grid, out);
}

// The discrete Laplacian matching poisson_dirichlet (same collocation
// operator), for residual checks.
inline DiscField laplacian(const DiscField& f) {
    const auto& g = *f.grid;
    const auto& rs = detail::radial_solver(g);
    const int B = g.n_beta / 2 - 1, W = 2 * B + 1;
    auto modes = f.ring_modes();
    std::vector<cplx> out(modes.size(), cplx{0.0});
    // values at extended nodes: interior from samples, rho=1 by extrapolation
    for (int n = -B; n <= B; ++n) {
        Eigen::VectorXcd v(rs.nr + 1);
        std::vector<cplx> prof(g.n_rho);
        for (int i = 0; i < g.n_rho; ++i) {
            v(i) = modes[size_t(i) * W + n + B];
            prof[i] = v(i);
        }
        v(rs.nr) = barycentric_eval(1.0, g.rho, g.bary_w, prof);
        Eigen::VectorXcd dv = rs.De.cast<cplx>() * v;
        Eigen::VectorXcd ddv = rs.De.cast<cplx>() * dv;
        for (int i = 0; i < g.n_rho; ++i) {
            double ri = 1.0 / rs.nodes[i];
            out[size_t(i) * W + n + B] =
                ddv(i) + ri * dv(i) - double(n) * double(n) * ri * ri * v(i);
        }
    }
    return detail::from_ring_modes(f.grid, out);
}

// Decomposition f = del v + g with dbar g = 0 and v in H^1_0 (which = del),
// or f = dbar v + g with del g = 0 (which = dbar). g is the orthogonal
// projection onto the (anti)holomorphic subspace, computed against the
// monomial basis; v follows from exact first-order radial ODE quadrature and
// vanishes at rho = 1 identically.
struct EllipticSplit {
    DiscField v, g;
    double residual = 0.0; // ||dbar g|| / ||f|| (del) or ||del g|| / ||f||
};

inline EllipticSplit elliptic_split(const DiscField& f, Wirtinger which) {
    if (which == Wirtinger::dbar) {
        EllipticSplit es = elliptic_split(conj(f), Wirtinger::del);
        return {conj(es.v), conj(es.g), es.residual};
    }
    const auto& g = *f.grid;
    const int B = g.n_beta / 2 - 1, W = 2 * B + 1;
    auto modes = f.ring_modes();

    // holomorphic projection: ghat_n(rho) = 2(n+1) (int f_n s^{n+1} ds) rho^n
    std::vector<cplx> gm(modes.size(), cplx{0.0});
    for (int n = 0; n <= B; ++n) {
        cplx c = 0.0;
        for (int i = 0; i < g.n_rho; ++i)
            c += g.rho_w[i] * std::pow(g.rho[i], n + 1) * modes[size_t(i) * W + n + B];
        c *= 2.0 * (n + 1);
        for (int i = 0; i < g.n_rho; ++i)
            gm[size_t(i) * W + n + B] = c * std::pow(g.rho[i], n);
    }

    // v mode mu from (f-g) mode mu-1: (rho^mu v)' = 2 rho^mu (f-g)_{mu-1}
    std::vector<cplx> vm(modes.size(), cplx{0.0});
    GaussRule quad(g.n_rho);
    for (int mu = -B + 1; mu <= B; ++mu) {
        int n = mu - 1;
        std::vector<cplx> prof(g.n_rho);
        double pmax = 0.0;
        for (int i = 0; i < g.n_rho; ++i) {
            prof[i] = modes[size_t(i) * W + n + B] - gm[size_t(i) * W + n + B];
            pmax = std::max(pmax, std::abs(prof[i]));
        }
        if (pmax < 1e-300) continue;
        for (int i = 0; i < g.n_rho; ++i) {
            double rho = g.rho[i];
            double lo = mu > 0 ? 0.0 : 1.0;
            auto rule = quad.mapped(lo, rho);
            cplx acc = 0.0;
            for (size_t q = 0; q < rule.x.size(); ++q) {
                double s = rule.x[q];
                cplx h = barycentric_eval(s, g.rho, g.bary_w, prof);
                acc += rule.w[q] * std::exp(double(mu) * (std::log(s) - std::log(rho))) * h;
            }
            vm[size_t(i) * W + mu + B] = 2.0 * acc;
        }
    }

    EllipticSplit out;
    out.g = detail::from_ring_modes(f.grid, gm);
    out.v = detail::from_ring_modes(f.grid, vm);
    double nf = f.norm_M();
    out.residual = nf > 0 ? wirtinger(out.g, Wirtinger::dbar).norm_M() / nf : 0.0;
    return out;
}

// Hodge decomposition of a degree-(+-1) fiber field: V = X g + X_perp h with
// g in H^1_0 and h in dot-H^1 (boundary average zero). Returns (g, h) and the
// relative residual ||V - Xg - X_perp h||.
struct HodgeSplit {
    DiscField g, h;
    double residual = 0.0;
};

inline HodgeSplit hodge_decompose(const FiberField& V) {
    for (int k = -V.K; k <= V.K; ++k)
        if (std::abs(k) != 1 && V.mode(k).has_grid() && V.mode(k).norm_M() > 1e-13)
            throw std::invalid_argument("hodge_decompose: field must have degree +-1 only");
    const auto& gp = V.grid;
    DiscField v1 = V.mode(1).on_grid(gp), vm1 = V.mode(-1).on_grid(gp);
    // Delta g = 2 (dbar v1 + del v_-1), Dirichlet
    DiscField rhs_g = cplx(2.0) * (wirtinger(v1, Wirtinger::dbar) +
                                   wirtinger(vm1, Wirtinger::del));
    DiscField g = poisson_dirichlet(rhs_g);
    // Delta h = 2i (dbar v1 - del v_-1), Neumann from the gradient relations
    DiscField rhs_h = cplx(0, 2) * (wirtinger(v1, Wirtinger::dbar) -
                                    wirtinger(vm1, Wirtinger::del));
    // d_rho h = e^{i b} del h + e^{-i b} dbar h with
    //   del h = i (v1 - del g), dbar h = -i (v_-1 - dbar g)
    DiscField del_h = I * (v1 - wirtinger(g, Wirtinger::del));
    DiscField dbar_h = cplx(0, -1) * (vm1 - wirtinger(g, Wirtinger::dbar));
    // mode n of d_rho h = (del h shifted up by e^{i b}) + (dbar h shifted down)
    const auto& gr = *gp;
    const int B = gr.n_beta / 2 - 1, W = 2 * B + 1;
    auto mdel = del_h.ring_modes();
    auto mdbar = dbar_h.ring_modes();
    auto mrhs = rhs_h.ring_modes();
    const auto& rs = detail::radial_solver(gr);
    std::vector<cplx> hm(mrhs.size(), cplx{0.0});
    std::vector<cplx> prof(gr.n_rho);
    for (int n = -B; n <= B; ++n) {
        // Neumann value at rho=1: extrapolate mode n of d_rho h
        cplx bc = 0.0;
        if (n != 0) {
            for (int i = 0; i < gr.n_rho; ++i) {
                cplx a = (n - 1 >= -B) ? mdel[size_t(i) * W + (n - 1) + B] : cplx{0.0};
                cplx b = (n + 1 <= B) ? mdbar[size_t(i) * W + (n + 1) + B] : cplx{0.0};
                prof[i] = a + b;
            }
            bc = barycentric_eval(1.0, gr.rho, gr.bary_w, prof);
        }
        double cmax = 0.0;
        for (int i = 0; i < gr.n_rho; ++i) {
            prof[i] = mrhs[size_t(i) * W + n + B];
            cmax = std::max(cmax, std::abs(prof[i]));
        }
        if (cmax < 1e-300 && std::abs(bc) < 1e-300) continue;
        // mode 0: Dirichlet value 0 at the boundary fixes the dot-H^1 gauge
        auto sol = rs.solve(n, prof, n != 0, bc);
        for (int i = 0; i < gr.n_rho; ++i) hm[size_t(i) * W + n + B] = sol[i];
    }
    HodgeSplit out;
    out.g = g;
    out.h = detail::from_ring_modes(gp, hm);
    FiberField gf(gp, 0);
    gf.mode(0) = out.g;
    FiberField recon = geodesic_X(gf) + transverse_of_scalar(out.h);
    double nv = parseval_norm(V);
    out.residual = nv > 0 ? parseval_norm(V - recon) / nv : 0.0;
    return out;
}

// Cauchy-type extension of a boundary trace given by beta-Fourier
// coefficients: holo keeps modes k >= 0 (sum b_k z^k), antiholo keeps k <= 0.
// The dropped-mode residual (L^2(dM) norm) is reported, never silently lost.
struct CauchyExtension {
    DiscField interior;
    double dropped = 0.0;
};

enum class CauchySide { holo, antiholo };

inline CauchyExtension cauchy_extend(std::span<const cplx> trace_modes, int B,
                                     CauchySide side, const PolarGridPtr& g) {
    CauchyExtension out;
    double drop2 = 0.0;
    std::vector<std::pair<int, cplx>> keep;
    for (int k = -B; k <= B; ++k) {
        cplx c = trace_modes[k + B];
        bool kept = side == CauchySide::holo ? (k >= 0) : (k <= 0);
        if (kept)
            keep.emplace_back(k, c);
        else
            drop2 += std::norm(c);
    }
    out.dropped = std::sqrt(two_pi * drop2);
    out.interior = DiscField::sampled(g, [keep](double x, double y) {
        cplx z(x, y);
        cplx s = 0.0;
        for (auto& [k, c] : keep)
            s += c * (k >= 0 ? std::pow(z, k) : std::pow(std::conj(z), -k));
        return s;
    });
    return out;
}

// Poincare constant of the unit disc: C_P = 1/j_{0,1}^2, the inverse first
// Dirichlet eigenvalue, with j_{0,1} found by bisection on the J_0 power
// series.
inline double poincare_constant() {
    auto J0 = [](double x) {
        double term = 1.0, sum = 1.0;
        for (int m = 1; m < 40; ++m) {
            term *= -(x * x) / (4.0 * m * m);
            sum += term;
        }
        return sum;
    };
    double lo = 2.0, hi = 3.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (J0(lo) * J0(mid) <= 0)
            hi = mid;
        else
            lo = mid;
    }
    double j01 = 0.5 * (lo + hi);
    return 1.0 / (j01 * j01);
}

} // namespace disctomo
