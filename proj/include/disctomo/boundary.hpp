#pragma once

#include "fft.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "grid.hpp"

namespace disctomo {

// Dense (2P+1) x (2Q+1) complex coefficient table indexed by (p, q) with
// |p| <= P, |q| <= Q.
struct Coef2 {
    int P = 0, Q = 0;
    std::vector<cplx> a;

    Coef2() = default;
    Coef2(int P_, int Q_) : P(P_), Q(Q_), a(size_t(2 * P_ + 1) * (2 * Q_ + 1), cplx{0.0}) {}

    bool contains(int p, int q) const {
        return !a.empty() && std::abs(p) <= P && std::abs(q) <= Q;
    }
    cplx& at(int p, int q) { return a[size_t(p + P) * (2 * Q + 1) + (q + Q)]; }
    cplx at(int p, int q) const {
        return contains(p, q) ? a[size_t(p + P) * (2 * Q + 1) + (q + Q)] : cplx{0.0};
    }
    void add(int p, int q, cplx v) {
        if (!contains(p, q)) throw std::out_of_range("Coef2::add: index outside table");
        at(p, q) += v;
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a) m = std::max(m, std::abs(v));
        return m;
    }
    int q_support() const {
        int qs = 0;
        for (int p = -P; p <= P; ++p)
            for (int q = -Q; q <= Q; ++q)
                if (std::abs(at(p, q)) > 0.0) qs = std::max(qs, std::abs(q));
        return qs;
    }
    Coef2 resized(int P2, int Q2) const {
        Coef2 r(P2, Q2);
        int pm = std::min(P, P2), qm = std::min(Q, Q2);
        for (int p = -pm; p <= pm; ++p)
            for (int q = -qm; q <= qm; ++q) r.at(p, q) = at(p, q);
        return r;
    }
};

inline Coef2 operator+(const Coef2& x, const Coef2& y) {
    Coef2 r = x.resized(std::max(x.P, y.P), std::max(x.Q, y.Q));
    for (int p = -y.P; p <= y.P; ++p)
        for (int q = -y.Q; q <= y.Q; ++q) r.at(p, q) += y.at(p, q);
    return r;
}
inline Coef2 operator*(cplx c, const Coef2& x) {
    Coef2 r = x;
    for (auto& v : r.a) v *= c;
    return r;
}

// Function on the full boundary torus dSM:
//   w(beta, alpha) = sum b_{p,n} e^{i(p beta + n alpha)}
//                  + sign(cos alpha) * sum bs_{p,n} e^{i(p beta + n alpha)}.
// The square-wave part arises from odd scattering extensions; the pullbacks
// S*, S_A* and the restrictions A+-* are exact on this representation. The
// fiber degree of mode (p,n) is n (theta = beta + pi + alpha).
struct BoundaryField {
    Coef2 b;  // smooth part
    Coef2 bs; // square-wave part (empty tables mean zero)

    BoundaryField() = default;
    explicit BoundaryField(Coef2 plain) : b(std::move(plain)) {}
    BoundaryField(Coef2 plain, Coef2 sq) : b(std::move(plain)), bs(std::move(sq)) {}

    bool has_square_part() const { return bs.max_abs() > 0.0; }

    cplx eval(double beta, double alpha) const {
        auto sum = [&](const Coef2& c) {
            cplx s = 0.0;
            for (int p = -c.P; p <= c.P; ++p)
                for (int n = -c.Q; n <= c.Q; ++n) {
                    cplx v = c.at(p, n);
                    if (v != cplx{0.0})
                        s += v * std::exp(I * (p * beta + double(n) * alpha));
                }
            return s;
        };
        cplx s = sum(b);
        if (!bs.a.empty()) s += double(sgn(std::lround(std::copysign(
                                 1.0, std::cos(alpha))))) * sum(bs);
        return s;
    }

    // pullback by the scattering relation: S*(F + sigma G) = S*F - sigma S*G,
    // with mode map (p,n) -> (-1)^{p+n} at (p, 2p-n)
    BoundaryField scat_pullback() const {
        auto pull = [](const Coef2& c, double sign_all) {
            Coef2 r(c.P, 2 * c.P + c.Q);
            for (int p = -c.P; p <= c.P; ++p)
                for (int n = -c.Q; n <= c.Q; ++n) {
                    cplx v = c.at(p, n);
                    if (v != cplx{0.0})
                        r.at(p, 2 * p - n) += sign_all * double((p + n) % 2 ? -1 : 1) * v;
                }
            return r;
        };
        return {pull(b, 1.0), bs.a.empty() ? Coef2{} : pull(bs, -1.0)};
    }

    // pullback by the antipodal scattering relation: sigma is even under S_A,
    // mode map (p,n) -> (-1)^p at (p, 2p-n)
    BoundaryField sa_pullback() const {
        auto pull = [](const Coef2& c) {
            Coef2 r(c.P, 2 * c.P + c.Q);
            for (int p = -c.P; p <= c.P; ++p)
                for (int n = -c.Q; n <= c.Q; ++n) {
                    cplx v = c.at(p, n);
                    if (v != cplx{0.0}) r.at(p, 2 * p - n) += double(p % 2 ? -1 : 1) * v;
                }
            return r;
        };
        return {pull(b), bs.a.empty() ? Coef2{} : pull(bs)};
    }

    // fiberwise Hilbert transform on dSM: mode (p,n) times -i sgn(n).
    // H restricted to even/odd n annihilates the square-wave term whenever
    // the latter's content has the complementary parity (sigma carries odd
    // frequencies); otherwise the result leaves this representation.
    BoundaryField hilbert(HilbertParity par = HilbertParity::all) const {
        auto apply = [&](const Coef2& c) {
            Coef2 r(c.P, c.Q);
            for (int p = -c.P; p <= c.P; ++p)
                for (int n = -c.Q; n <= c.Q; ++n) {
                    bool keep = par == HilbertParity::all ||
                                (par == HilbertParity::even && n % 2 == 0) ||
                                (par == HilbertParity::odd && n % 2 != 0);
                    if (keep) r.at(p, n) = -I * double(sgn(n)) * c.at(p, n);
                }
            return r;
        };
        if (!bs.a.empty()) {
            double worst = 0.0;
            for (int p = -bs.P; p <= bs.P; ++p)
                for (int n = -bs.Q; n <= bs.Q; ++n) {
                    bool killed = (par == HilbertParity::even && n % 2 != 0) ||
                                  (par == HilbertParity::odd && n % 2 == 0);
                    if (!killed) worst = std::max(worst, std::abs(bs.at(p, n)));
                }
            if (worst > 1e-13 * std::max(1.0, b.max_abs() + bs.max_abs()))
                throw std::domain_error(
                    "BoundaryField::hilbert: square-wave content survives H and "
                    "leaves the band-limited representation");
        }
        return BoundaryField{apply(b)};
    }

    // fiber average on each boundary circle, as beta-Fourier coefficients
    // c_p of (w)_0(x(beta)) = sum_p c_p e^{i p beta}: the n = 0 row
    // (sign(cos alpha) has zero alpha-average, so bs does not contribute)
    std::vector<cplx> fiber_average_modes() const {
        std::vector<cplx> c(2 * b.P + 1);
        for (int p = -b.P; p <= b.P; ++p) c[p + b.P] = b.at(p, 0);
        return c;
    }

    BoundaryField truncated(int P2, int N2) const {
        return {b.resized(P2, N2), bs.a.empty() ? Coef2{} : bs.resized(P2, N2)};
    }
};

inline BoundaryField operator+(const BoundaryField& x, const BoundaryField& y) {
    BoundaryField r;
    r.b = x.b + y.b;
    if (!x.bs.a.empty() || !y.bs.a.empty()) r.bs = x.bs + y.bs;
    return r;
}
inline BoundaryField operator*(cplx c, const BoundaryField& x) {
    BoundaryField r = x;
    r.b = c * r.b;
    if (!r.bs.a.empty()) r.bs = c * r.bs;
    return r;
}
inline BoundaryField conj_field(const BoundaryField& x) {
    auto cj = [](const Coef2& c) {
        Coef2 r(c.P, c.Q);
        for (int p = -c.P; p <= c.P; ++p)
            for (int n = -c.Q; n <= c.Q; ++n) r.at(p, n) = std::conj(c.at(-p, -n));
        return r;
    };
    BoundaryField r;
    r.b = cj(x.b);
    if (!x.bs.a.empty()) r.bs = cj(x.bs);
    return r;
}

// Function on the inflow boundary d+SM in the two half-range Fourier bases:
//   u(beta, alpha) = sum (E_{p,q} + e^{i alpha} O_{p,q}) e^{i(p beta + 2q alpha)}.
// E holds the even fiber-frequency content (phi family), O the odd content
// (phi' family). Both bases are complete on d+SM; the split is part of the
// representation and is chosen by the data source (I_0-type data is odd,
// I_perp-type data is even).
struct InflowField {
    Coef2 E, O;

    InflowField() = default;
    InflowField(Coef2 e, Coef2 o) : E(std::move(e)), O(std::move(o)) {}

    static InflowField zero(int P, int Q) { return {Coef2(P, Q), Coef2(P, Q)}; }

    cplx eval(double beta, double alpha) const {
        cplx s = 0.0;
        for (int p = -E.P; p <= E.P; ++p)
            for (int q = -E.Q; q <= E.Q; ++q) {
                cplx v = E.at(p, q);
                if (v != cplx{0.0}) s += v * std::exp(I * (p * beta + 2.0 * q * alpha));
            }
        for (int p = -O.P; p <= O.P; ++p)
            for (int q = -O.Q; q <= O.Q; ++q) {
                cplx v = O.at(p, q);
                if (v != cplx{0.0})
                    s += v * std::exp(I * (p * beta + (2.0 * q + 1.0) * alpha));
            }
        return s;
    }

    // pullback by S_A (a map d+SM -> d+SM):
    //   E_{p,q} -> (-1)^p E at (p, p-q),  O_{p,q} -> (-1)^p O at (p, p-q-1)
    InflowField sa_pullback() const {
        auto pullE = [](const Coef2& c) {
            Coef2 r(c.P, c.P + c.Q);
            for (int p = -c.P; p <= c.P; ++p)
                for (int q = -c.Q; q <= c.Q; ++q) {
                    cplx v = c.at(p, q);
                    if (v != cplx{0.0}) r.at(p, p - q) += double(p % 2 ? -1 : 1) * v;
                }
            return r;
        };
        auto pullO = [](const Coef2& c) {
            Coef2 r(c.P, c.P + c.Q + 1);
            for (int p = -c.P; p <= c.P; ++p)
                for (int q = -c.Q; q <= c.Q; ++q) {
                    cplx v = c.at(p, q);
                    if (v != cplx{0.0}) r.at(p, p - q - 1) += double(p % 2 ? -1 : 1) * v;
                }
            return r;
        };
        return {pullE(E), pullO(O)};
    }

    // projections onto V+- = ker(Id -+ S_A*)
    InflowField parity_part(int sign) const {
        InflowField s = sa_pullback();
        InflowField r;
        r.E = 0.5 * (E.resized(s.E.P, s.E.Q) + double(sign) * s.E);
        r.O = 0.5 * (O.resized(s.O.P, s.O.Q) + double(sign) * s.O);
        return r;
    }

    double max_abs() const { return std::max(E.max_abs(), O.max_abs()); }
};

inline InflowField operator+(const InflowField& x, const InflowField& y) {
    return {x.E + y.E, x.O + y.O};
}
inline InflowField operator*(cplx c, const InflowField& x) {
    return {c * x.E, c * x.O};
}

// ---------------------------------------------------------------------------
// grid <-> coefficient transforms on the boundary
// ---------------------------------------------------------------------------

// Samples on the inflow grid (n_beta x n_alpha/2), alpha in (-pi/2, pi/2).
struct InflowSamples {
    BoundaryGridPtr bg;
    std::vector<cplx> v;

    InflowSamples() = default;
    explicit InflowSamples(BoundaryGridPtr g)
        : bg(std::move(g)), v(bg->in_size(), cplx{0.0}) {}

    cplx& at(int i, int t) { return v[bg->in_idx(i, t)]; }
    cplx at(int i, int t) const { return v[bg->in_idx(i, t)]; }

    double norm() const { // L2(d+SM) with the uniform grid weights
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return std::sqrt(s * (two_pi / bg->n_beta) * (two_pi / bg->n_alpha));
    }
    cplx inner(const InflowSamples& o) const {
        cplx s = 0.0;
        for (size_t i = 0; i < v.size(); ++i) s += v[i] * std::conj(o.v[i]);
        return s * (two_pi / bg->n_beta) * (two_pi / bg->n_alpha);
    }
    // pullback by the antipodal scattering relation (exact grid permutation)
    InflowSamples sa_pullback() const {
        InflowSamples r(bg);
        for (int i = 0; i < bg->n_beta; ++i)
            for (int t = 0; t < bg->n_alpha_in(); ++t) {
                auto [i2, t2] = bg->scatter_antipodal_in(i, t);
                r.at(i, t) = at(i2, t2);
            }
        return r;
    }
};

enum class InflowBasis { even, odd }; // expand in phi (even) or phi' (odd)

// Exact half-range analysis of inflow samples in the chosen basis family.
// The half-range FFT is exact for content band-limited to |q| < n_alpha/4.
inline InflowField analyze_inflow(const InflowSamples& s, InflowBasis basis,
                                  int P, int Q) {
    const auto& bg = *s.bg;
    const int nb = bg.n_beta, nt = bg.n_alpha_in();
    if (2 * P + 1 > nb || 2 * Q + 1 > nt)
        throw std::invalid_argument("analyze_inflow: cutoffs exceed grid band");
    // beta FFT first
    std::vector<cplx> tmp(size_t(nb) * nt);
    std::vector<cplx> buf(nb);
    for (int t = 0; t < nt; ++t) {
        for (int i = 0; i < nb; ++i) {
            cplx z = s.at(i, t);
            if (basis == InflowBasis::odd)
                z *= std::exp(-I * bg.alpha_in(t)); // divide by e^{i alpha}
            buf[i] = z;
        }
        fft::forward(buf);
        for (int i = 0; i < nb; ++i) tmp[size_t(t) * nb + i] = buf[i] / double(nb);
    }
    // alpha analysis on the offset half-range grid, period pi, modes e^{2iq a}
    InflowField out = InflowField::zero(P, Q);
    Coef2& C = (basis == InflowBasis::even) ? out.E : out.O;
    const double x0 = bg.alpha_in(0);
    std::vector<cplx> col(nt);
    for (int p = -P; p <= P; ++p) {
        int ip = (p + nb) % nb;
        for (int t = 0; t < nt; ++t) col[t] = tmp[size_t(t) * nb + ip];
        auto cq = fft::coeffs_from_samples(col, x0, pi, Q);
        for (int q = -Q; q <= Q; ++q) C.at(p, q) = cq[q + Q];
    }
    return out;
}

// Synthesis of an InflowField back to inflow grid samples (exact on the grid,
// including coefficient content beyond the grid band, which folds in with the
// correct offset-grid phases).
inline InflowSamples sample_inflow(const InflowField& f, const BoundaryGridPtr& bgp) {
    const auto& bg = *bgp;
    const int nb = bg.n_beta, nt = bg.n_alpha_in();
    InflowSamples out(bgp);
    const double x0 = bg.alpha_in(0);
    auto add_family = [&](const Coef2& C, bool odd) {
        if (C.a.empty() || C.max_abs() == 0.0) return;
        // per-p alpha synthesis, then beta synthesis
        std::vector<cplx> rows(size_t(2 * C.P + 1) * nt);
        std::vector<cplx> cq(2 * C.Q + 1);
        for (int p = -C.P; p <= C.P; ++p) {
            for (int q = -C.Q; q <= C.Q; ++q) cq[q + C.Q] = C.at(p, q);
            auto sampled = fft::samples_from_coeffs(cq, C.Q, x0, pi, nt);
            for (int t = 0; t < nt; ++t) rows[size_t(p + C.P) * nt + t] = sampled[t];
        }
        std::vector<cplx> buf(nb);
        for (int t = 0; t < nt; ++t) {
            std::fill(buf.begin(), buf.end(), cplx{0.0});
            for (int p = -C.P; p <= C.P; ++p)
                buf[(p + nb) % nb] += rows[size_t(p + C.P) * nt + t];
            fft::inverse(buf);
            cplx ph = odd ? std::exp(I * bg.alpha_in(t)) : cplx{1.0};
            for (int i = 0; i < nb; ++i) out.at(i, t) += ph * buf[i];
        }
    };
    add_family(f.E, false);
    add_family(f.O, true);
    return out;
}

// Zero-extension of inflow data to the torus, returned as band-limited torus
// coefficients via 2-D FFT (n-cutoff N, p-cutoff P).
inline BoundaryField extend_by_zero(const InflowSamples& s, int P, int N) {
    const auto& bg = *s.bg;
    const int nb = bg.n_beta, na = bg.n_alpha;
    if (2 * P + 1 > nb || 2 * N + 1 > na)
        throw std::invalid_argument("extend_by_zero: cutoffs exceed grid band");
    std::vector<cplx> torus(bg.torus_size(), cplx{0.0});
    for (int i = 0; i < nb; ++i)
        for (int t = 0; t < bg.n_alpha_in(); ++t)
            torus[bg.torus_idx(i, bg.torus_j(t))] = s.at(i, t);
    // beta FFT
    std::vector<cplx> buf(nb);
    std::vector<cplx> half(size_t(na) * nb);
    for (int j = 0; j < na; ++j) {
        for (int i = 0; i < nb; ++i) buf[i] = torus[bg.torus_idx(i, j)];
        fft::forward(buf);
        for (int i = 0; i < nb; ++i) half[size_t(j) * nb + i] = buf[i] / double(nb);
    }
    Coef2 out(P, N);
    std::vector<cplx> col(na);
    const double a0 = bg.alpha(0);
    for (int p = -P; p <= P; ++p) {
        int ip = (p + nb) % nb;
        for (int j = 0; j < na; ++j) col[j] = half[size_t(j) * nb + ip];
        auto cn = fft::coeffs_from_samples(col, a0, two_pi, N);
        for (int n = -N; n <= N; ++n) out.at(p, n) = cn[n + N];
    }
    return BoundaryField{std::move(out)};
}

// Torus samples of a BoundaryField on the boundary grid (exact, including
// the square-wave part: sign(cos alpha) is +-1 at the offset alpha nodes).
inline std::vector<cplx> sample_torus(const BoundaryField& w, const BoundaryGrid& bg) {
    std::vector<cplx> out(bg.torus_size(), cplx{0.0});
    auto add = [&](const Coef2& C, bool with_sigma) {
        if (C.a.empty() || C.max_abs() == 0.0) return;
        const int nb = bg.n_beta, na = bg.n_alpha;
        std::vector<cplx> rows(size_t(2 * C.P + 1) * na);
        std::vector<cplx> cn(2 * C.Q + 1);
        for (int p = -C.P; p <= C.P; ++p) {
            for (int n = -C.Q; n <= C.Q; ++n) cn[n + C.Q] = C.at(p, n);
            auto samp = fft::samples_from_coeffs(cn, C.Q, bg.alpha(0), two_pi, na);
            for (int j = 0; j < na; ++j) rows[size_t(p + C.P) * na + j] = samp[j];
        }
        std::vector<cplx> buf(nb);
        for (int j = 0; j < na; ++j) {
            std::fill(buf.begin(), buf.end(), cplx{0.0});
            for (int p = -C.P; p <= C.P; ++p)
                buf[(p + nb) % nb] += rows[size_t(p + C.P) * na + j];
            fft::inverse(buf);
            double sig = with_sigma ? (std::cos(bg.alpha(j)) > 0 ? 1.0 : -1.0) : 1.0;
            for (int i = 0; i < nb; ++i) out[bg.torus_idx(i, j)] += sig * buf[i];
        }
    };
    add(w.b, false);
    add(w.bs, true);
    return out;
}

// Restriction of a torus field to d+SM as inflow samples.
inline InflowSamples restrict_to_inflow(const BoundaryField& w, const BoundaryGridPtr& bgp) {
    auto torus = sample_torus(w, *bgp);
    InflowSamples out(bgp);
    for (int i = 0; i < bgp->n_beta; ++i)
        for (int t = 0; t < bgp->n_alpha_in(); ++t)
            out.at(i, t) = torus[bgp->torus_idx(i, bgp->torus_j(t))];
    return out;
}

// Exact restriction of a torus field to d+SM in coefficient space: sigma = 1
// on d+SM, even torus modes land in E, odd modes in O (q = n/2 or (n-1)/2).
inline InflowField restrict_coeffs(const BoundaryField& w) {
    int P = std::max(w.b.P, w.bs.P);
    int N = std::max(w.b.Q, w.bs.a.empty() ? 0 : w.bs.Q);
    int Q = N / 2 + 1;
    InflowField out = InflowField::zero(P, Q);
    auto add = [&](const Coef2& C) {
        if (C.a.empty()) return;
        for (int p = -C.P; p <= C.P; ++p)
            for (int n = -C.Q; n <= C.Q; ++n) {
                cplx v = C.at(p, n);
                if (v == cplx{0.0}) continue;
                if (n % 2 == 0)
                    out.E.at(p, n / 2) += v;
                else
                    out.O.at(p, (n - 1) / 2) += v;
            }
    };
    add(w.b);
    add(w.bs);
    return out;
}

// Boundary trace of a FiberField: samples u at (x(beta), theta = beta+pi+alpha)
// with barycentric radial extrapolation of each harmonic to rho = 1, then
// returns torus coefficients.
inline BoundaryField boundary_trace(const FiberField& u, const BoundaryGrid& bg,
                                    int P, int N) {
    const auto& g = *u.grid;
    const int nb = bg.n_beta, na = bg.n_alpha;
    if (nb % g.n_beta != 0 && g.n_beta % nb != 0)
        throw std::invalid_argument("boundary_trace: misaligned beta grids");
    // per-harmonic boundary ring values b_k(beta_i)
    std::vector<cplx> ring(size_t(2 * u.K + 1) * nb);
    for (int k = -u.K; k <= u.K; ++k) {
        const auto& m = u.mode(k);
        DiscEval ev(m);
        for (int i = 0; i < nb; ++i) {
            double beta = bg.beta(i);
            ring[size_t(k + u.K) * nb + i] = ev(std::cos(beta), std::sin(beta));
        }
    }
    // torus samples: w(beta_i, alpha_j) = sum_k b_k(beta_i) e^{ik(beta_i+pi+alpha_j)}
    std::vector<cplx> torus(bg.torus_size());
    std::vector<cplx> cfs(2 * u.K + 1), buf;
    for (int i = 0; i < nb; ++i) {
        for (int k = -u.K; k <= u.K; ++k)
            cfs[k + u.K] = ring[size_t(k + u.K) * nb + i] *
                           std::exp(I * double(k) * (bg.beta(i) + pi));
        buf = fft::samples_from_coeffs(cfs, u.K, bg.alpha(0), two_pi, na);
        for (int j = 0; j < na; ++j) torus[bg.torus_idx(i, j)] = buf[j];
    }
    // 2-D analysis as in extend_by_zero
    std::vector<cplx> bbuf(nb);
    std::vector<cplx> half(size_t(na) * nb);
    for (int j = 0; j < na; ++j) {
        for (int i = 0; i < nb; ++i) bbuf[i] = torus[bg.torus_idx(i, j)];
        fft::forward(bbuf);
        for (int i = 0; i < nb; ++i) half[size_t(j) * nb + i] = bbuf[i] / double(nb);
    }
    Coef2 out(P, N);
    std::vector<cplx> col(na);
    for (int p = -P; p <= P; ++p) {
        int ip = (p + nb) % nb;
        for (int j = 0; j < na; ++j) col[j] = half[size_t(j) * nb + ip];
        auto cn = fft::coeffs_from_samples(col, bg.alpha(0), two_pi, N);
        for (int n = -N; n <= N; ++n) out.at(p, n) = cn[n + N];
    }
    return BoundaryField{std::move(out)};
}

} // namespace disctomo
