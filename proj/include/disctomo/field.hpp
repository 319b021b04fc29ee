#pragma once

#include "fft.hpp"
#include "grid.hpp"

namespace disctomo {

// Complex-valued function on the unit disc. Backed by samples on a PolarGrid,
// by an analytic evaluator, or both (analytic wins for off-grid evaluation).
// Fields are treated as immutable after construction.
struct DiscField {
    PolarGridPtr grid;
    std::vector<cplx> values; // grid samples, size grid->size(), or empty
    std::function<cplx(double, double)> fn; // analytic evaluator in (x,y), or null
    std::string name;

    DiscField() = default;

    static DiscField zero(PolarGridPtr g) {
        DiscField f;
        f.grid = std::move(g);
        f.values.assign(f.grid->size(), cplx{0.0});
        return f;
    }

    static DiscField analytic(std::function<cplx(double, double)> e,
                              std::string nm = {}) {
        DiscField f;
        f.fn = std::move(e);
        f.name = std::move(nm);
        return f;
    }

    static DiscField sampled(PolarGridPtr g, std::function<cplx(double, double)> e,
                             std::string nm = {}) {
        DiscField f;
        f.grid = std::move(g);
        f.values.resize(f.grid->size());
        for (int i = 0; i < f.grid->n_rho; ++i)
            for (int j = 0; j < f.grid->n_beta; ++j)
                f.values[f.grid->idx(i, j)] = e(f.grid->x(i, j), f.grid->y(i, j));
        f.fn = std::move(e);
        f.name = std::move(nm);
        return f;
    }

    bool is_analytic() const { return static_cast<bool>(fn); }
    bool has_grid() const { return grid && !values.empty(); }

    cplx at(int i, int j) const { return values[grid->idx(i, j)]; }

    // Samples on g (reuses existing samples when the grid matches).
    DiscField on_grid(const PolarGridPtr& g) const {
        if (has_grid() && grid == g) return *this;
        if (!fn && !has_grid())
            throw std::logic_error("DiscField::on_grid: empty field");
        DiscField out;
        out.grid = g;
        out.name = name;
        out.values.resize(g->size());
        if (fn) {
            for (int i = 0; i < g->n_rho; ++i)
                for (int j = 0; j < g->n_beta; ++j)
                    out.values[g->idx(i, j)] = fn(g->x(i, j), g->y(i, j));
            out.fn = fn;
        } else {
            for (int i = 0; i < g->n_rho; ++i)
                for (int j = 0; j < g->n_beta; ++j)
                    out.values[g->idx(i, j)] = eval(g->x(i, j), g->y(i, j));
        }
        return out;
    }

    // Angular Fourier coefficients per radial ring: returns (n_rho x (2B+1))
    // with B = n_beta/2 - 1, row-major in the mode index n+B.
    std::vector<cplx> ring_modes() const {
        if (!has_grid()) throw std::logic_error("ring_modes: no grid samples");
        const int nb = grid->n_beta, B = nb / 2 - 1;
        std::vector<cplx> out(size_t(grid->n_rho) * (2 * B + 1));
        std::vector<cplx> buf(nb);
        for (int i = 0; i < grid->n_rho; ++i) {
            std::copy_n(values.begin() + grid->idx(i, 0), nb, buf.begin());
            fft::forward(buf);
            for (int n = -B; n <= B; ++n)
                out[size_t(i) * (2 * B + 1) + (n + B)] = buf[(n + nb) % nb] / double(nb);
        }
        return out;
    }

    // Off-grid evaluation: analytic when available; otherwise angular Fourier
    // interpolation combined with barycentric radial interpolation (the
    // radial polynomial extrapolates smoothly over the tiny gap to rho=1).
    cplx eval(double x, double y) const;

    double norm_M() const {
        if (!has_grid()) throw std::logic_error("norm_M: sample the field first");
        double s = 0.0;
        for (int i = 0; i < grid->n_rho; ++i)
            for (int j = 0; j < grid->n_beta; ++j)
                s += grid->area_w[i] * std::norm(values[grid->idx(i, j)]);
        return std::sqrt(s);
    }

    cplx inner_M(const DiscField& g) const {
        double sr = 0.0, si = 0.0;
        for (int i = 0; i < grid->n_rho; ++i)
            for (int j = 0; j < grid->n_beta; ++j) {
                cplx t = values[grid->idx(i, j)] * std::conj(g.values[grid->idx(i, j)]);
                sr += grid->area_w[i] * t.real();
                si += grid->area_w[i] * t.imag();
            }
        return {sr, si};
    }
};

namespace detail {
inline DiscField combine(const DiscField& a, const DiscField& b, cplx ca, cplx cb) {
    PolarGridPtr g = a.grid ? a.grid : b.grid;
    DiscField A = a.on_grid(g), B = b.on_grid(g);
    DiscField out = DiscField::zero(g);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = ca * A.values[i] + cb * B.values[i];
    return out;
}
} // namespace detail

inline DiscField operator+(const DiscField& a, const DiscField& b) {
    return detail::combine(a, b, 1.0, 1.0);
}
inline DiscField operator-(const DiscField& a, const DiscField& b) {
    return detail::combine(a, b, 1.0, -1.0);
}
inline DiscField operator*(cplx c, const DiscField& a) {
    DiscField out = a;
    if (out.fn) {
        auto f = a.fn;
        out.fn = [f, c](double x, double y) { return c * f(x, y); };
    }
    for (auto& v : out.values) v *= c;
    return out;
}
inline DiscField operator*(const DiscField& a, const DiscField& b) {
    PolarGridPtr g = a.grid ? a.grid : b.grid;
    DiscField A = a.on_grid(g), B = b.on_grid(g);
    DiscField out = DiscField::zero(g);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = A.values[i] * B.values[i];
    return out;
}
inline DiscField conj(const DiscField& a) {
    DiscField out = a;
    if (out.fn) {
        auto f = a.fn;
        out.fn = [f](double x, double y) { return std::conj(f(x, y)); };
    }
    for (auto& v : out.values) v = std::conj(v);
    return out;
}

// Reusable off-grid evaluator for a grid-backed field: per-ring angular
// coefficient sums plus barycentric radial interpolation. `band` trims
// angular modes below 1e-14 of the max so smooth fields evaluate cheaply.
struct DiscEval {
    PolarGridPtr grid;
    std::function<cplx(double, double)> fn; // set for analytic fields
    int B = 0, band = 0;
    std::vector<cplx> modes; // (n_rho x (2B+1))

    explicit DiscEval(const DiscField& f) {
        if (f.is_analytic()) {
            fn = f.fn;
            return;
        }
        grid = f.grid;
        B = grid->n_beta / 2 - 1;
        modes = f.ring_modes();
        double mx = 0.0;
        for (const auto& c : modes) mx = std::max(mx, std::abs(c));
        band = 0;
        for (int n = -B; n <= B; ++n) {
            double cn = 0.0;
            for (int i = 0; i < grid->n_rho; ++i)
                cn = std::max(cn, std::abs(modes[size_t(i) * (2 * B + 1) + n + B]));
            if (cn > 1e-14 * mx) band = std::max(band, std::abs(n));
        }
    }

    cplx operator()(double x, double y) const {
        if (fn) return fn(x, y);
        double rho = std::hypot(x, y), beta = std::atan2(y, x);
        const int nr = grid->n_rho, W = 2 * B + 1;
        const cplx ei = std::exp(I * beta);
        // ring values at angle beta for significant modes only
        cplx num = 0.0;
        double den = 0.0;
        bool hit = false;
        cplx hitval = 0.0;
        std::vector<cplx> pw(2 * band + 1);
        pw[band] = 1.0;
        for (int n = 1; n <= band; ++n) {
            pw[band + n] = pw[band + n - 1] * ei;
            pw[band - n] = std::conj(pw[band + n]);
        }
        for (int i = 0; i < nr; ++i) {
            cplx ring = 0.0;
            const cplx* row = &modes[size_t(i) * W];
            for (int n = -band; n <= band; ++n) ring += row[n + B] * pw[n + band];
            double d = rho - grid->rho[i];
            if (std::abs(d) < 1e-14) {
                hit = true;
                hitval = ring;
                break;
            }
            double t = grid->bary_w[i] / d;
            num += t * ring;
            den += t;
        }
        return hit ? hitval : num / den;
    }
};

inline cplx DiscField::eval(double x, double y) const {
    if (fn) return fn(x, y);
    return DiscEval(*this)(x, y);
}

// Function on SM stored as truncated circular-harmonic coefficients over a
// spatial grid: u(x,theta) = sum_{|k|<=K} comp[k+K](x) e^{i k theta}.
struct FiberField {
    PolarGridPtr grid;
    int K = 0;
    std::vector<DiscField> comp; // size 2K+1

    FiberField() = default;
    FiberField(PolarGridPtr g, int k) : grid(std::move(g)), K(k) {
        comp.resize(2 * K + 1);
        for (auto& c : comp) c = DiscField::zero(grid);
    }

    DiscField& mode(int k) { return comp[k + K]; }
    const DiscField& mode(int k) const { return comp[k + K]; }
    bool has_mode(int k) const { return std::abs(k) <= K; }

    // e^{ik\theta} coefficient; throws on out-of-range k
    const DiscField& harmonic_project(int k) const {
        if (!has_mode(k))
            throw std::out_of_range("harmonic_project: |k| exceeds cutoff K");
        return mode(k);
    }

    const DiscField& fiber_average() const { return mode(0); }

    cplx eval(double x, double y, double theta) const {
        cplx s = 0.0, e = std::exp(I * theta);
        cplx pw = std::exp(-double(K) * (I * theta));
        for (int k = -K; k <= K; ++k) {
            s += mode(k).eval(x, y) * pw;
            pw *= e;
        }
        return s;
    }

    // theta samples (n_t x grid size), n_t a power of two >= 2K+2
    std::vector<cplx> theta_samples(int n_t) const {
        std::vector<cplx> out(size_t(n_t) * grid->size(), cplx{0.0});
        std::vector<cplx> buf(n_t);
        for (size_t p = 0; p < grid->size(); ++p) {
            std::fill(buf.begin(), buf.end(), cplx{0.0});
            for (int k = -K; k <= K; ++k)
                buf[(k + n_t) % n_t] += comp[k + K].values[p];
            fft::inverse(buf);
            for (int t = 0; t < n_t; ++t) out[size_t(t) * grid->size() + p] = buf[t];
        }
        return out;
    }

    static FiberField from_theta_samples(const PolarGridPtr& g, int K,
                                         std::span<const cplx> samp, int n_t) {
        FiberField u(g, K);
        std::vector<cplx> buf(n_t);
        for (size_t p = 0; p < g->size(); ++p) {
            for (int t = 0; t < n_t; ++t) buf[t] = samp[size_t(t) * g->size() + p];
            fft::forward(buf);
            for (int k = -K; k <= K; ++k)
                u.comp[k + K].values[p] = buf[(k + n_t) % n_t] / double(n_t);
        }
        return u;
    }
};

// Fiberwise Hilbert transform: mode k multiplied by -i*sgn(k) (sgn 0 = 0).
// parity selects the even/odd-harmonic part H+ / H- (complementary modes are
// zeroed first).
enum class HilbertParity { all, even, odd };

inline FiberField fiber_hilbert(const FiberField& u,
                                HilbertParity par = HilbertParity::all) {
    FiberField out(u.grid, u.K);
    for (int k = -u.K; k <= u.K; ++k) {
        bool keep = par == HilbertParity::all || (par == HilbertParity::even && k % 2 == 0) ||
                    (par == HilbertParity::odd && k % 2 != 0);
        if (keep) out.mode(k) = cplx(-double(sgn(k)) * I) * u.mode(k);
    }
    return out;
}

// (Id + c*i*H)u convenience: c=+1 doubles positive modes and kills negative
// ones up to the mode-0 term; c=-1 is the conjugate projector.
inline FiberField holo_projector(const FiberField& u, int c) {
    FiberField out(u.grid, u.K);
    for (int k = -u.K; k <= u.K; ++k)
        out.mode(k) = cplx(1.0 + c * sgn(k)) * u.mode(k);
    return out;
}

inline FiberField operator+(const FiberField& a, const FiberField& b) {
    int K = std::max(a.K, b.K);
    FiberField out(a.grid, K);
    for (int k = -K; k <= K; ++k) {
        if (a.has_mode(k)) out.mode(k) = out.mode(k) + a.mode(k);
        if (b.has_mode(k)) out.mode(k) = out.mode(k) + b.mode(k);
    }
    return out;
}
inline FiberField operator-(const FiberField& a, const FiberField& b) {
    int K = std::max(a.K, b.K);
    FiberField out(a.grid, K);
    for (int k = -K; k <= K; ++k) {
        if (a.has_mode(k)) out.mode(k) = out.mode(k) + a.mode(k);
        if (b.has_mode(k)) out.mode(k) = out.mode(k) - b.mode(k);
    }
    return out;
}
inline FiberField operator*(cplx c, const FiberField& a) {
    FiberField out(a.grid, a.K);
    for (int k = -a.K; k <= a.K; ++k) out.mode(k) = c * a.mode(k);
    return out;
}
inline FiberField conj(const FiberField& a) {
    FiberField out(a.grid, a.K);
    for (int k = -a.K; k <= a.K; ++k) out.mode(k) = conj(a.mode(-k));
    return out;
}

// Pointwise product on SM via an anti-aliased theta grid.
inline FiberField fiber_product(const FiberField& a, const FiberField& b, int K_out) {
    int n_t = 4;
    while (n_t < 2 * (a.K + b.K) + 2 || n_t < 2 * K_out + 2) n_t *= 2;
    auto sa = a.theta_samples(n_t);
    auto sb = b.theta_samples(n_t);
    for (size_t i = 0; i < sa.size(); ++i) sa[i] *= sb[i];
    return FiberField::from_theta_samples(a.grid, K_out, sa, n_t);
}

// Pointwise exp(a) on SM, truncated at K_out modes.
inline FiberField fiber_exp(const FiberField& a, int K_out) {
    int n_t = 4;
    while (n_t < 4 * std::max(a.K, K_out) + 2) n_t *= 2;
    auto sa = a.theta_samples(n_t);
    for (auto& v : sa) v = std::exp(v);
    return FiberField::from_theta_samples(a.grid, K_out, sa, n_t);
}

// Parseval norm: ||u||^2 = 2 pi sum_k ||u_k||_M^2, with optional weight
// kappa^|k| (the L^{2,kappa} norm).
inline double parseval_norm(const FiberField& u, double kappa = 1.0) {
    double s = 0.0;
    for (int k = -u.K; k <= u.K; ++k) {
        double nk = u.mode(k).norm_M();
        s += std::pow(kappa, std::abs(k)) * nk * nk;
    }
    return std::sqrt(two_pi * s);
}

// L^2(SM) inner product <u,v> = 2 pi sum_k <u_k, v_k>_M.
inline cplx fiber_inner(const FiberField& u, const FiberField& v) {
    cplx s = 0.0;
    int K = std::min(u.K, v.K);
    for (int k = -K; k <= K; ++k) s += u.mode(k).inner_M(v.mode(k));
    return two_pi * s;
}

} // namespace disctomo
