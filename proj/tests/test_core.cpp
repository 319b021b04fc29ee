#include <catch2/catch_amalgamated.hpp>

#include <disctomo/common.hpp>
#include <disctomo/fft.hpp>
#include <disctomo/grid.hpp>

using namespace disctomo;
using Catch::Approx;

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    GaussRule g(8);
    // int_{-1}^{1} x^14 dx = 2/15
    double s = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 14);
    CHECK(s == Approx(2.0 / 15.0).epsilon(1e-13));
    auto m = g.mapped(0.0, 2.0);
    double t = 0.0;
    for (size_t i = 0; i < m.x.size(); ++i) t += m.w[i] * m.x[i] * m.x[i];
    CHECK(t == Approx(8.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("Fornberg weights reproduce derivatives on scattered nodes") {
    std::vector<double> xs = {0.0, 0.13, 0.21, 0.4, 0.55, 0.8, 1.0};
    auto w1 = fd_weights(0.4, xs, 1);
    auto w2 = fd_weights(0.4, xs, 2);
    double d1 = 0.0, d2 = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double f = std::pow(xs[i], 5);
        d1 += w1[i] * f;
        d2 += w2[i] * f;
    }
    CHECK(d1 == Approx(5 * std::pow(0.4, 4)).margin(1e-11));
    CHECK(d2 == Approx(20 * std::pow(0.4, 3)).margin(1e-9));
}

TEST_CASE("barycentric interpolation is exact for polynomials") {
    GaussRule g(12);
    std::vector<double> xs(g.x.begin(), g.x.end());
    auto w = barycentric_weights(xs);
    std::vector<cplx> f(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        f[i] = cplx(std::pow(xs[i], 7), std::pow(xs[i], 3));
    cplx v = barycentric_eval(0.3217, xs, w, f);
    CHECK(std::abs(v - cplx(std::pow(0.3217, 7), std::pow(0.3217, 3))) < 1e-13);
}

TEST_CASE("fft coefficient transforms round-trip on offset grids") {
    const int n = 64, kmax = 20;
    const double x0 = -pi / 2 + pi / n, L = pi;
    std::vector<cplx> c(2 * kmax + 1, cplx{0.0});
    c[kmax + 3] = cplx(0.7, -0.2);
    c[kmax - 5] = cplx(-0.1, 0.9);
    c[kmax] = 2.0;
    auto s = fft::samples_from_coeffs(c, kmax, x0, L, n);
    // check a sample directly
    double x = x0 + 7 * (L / n);
    cplx direct = c[kmax] + c[kmax + 3] * std::exp(two_pi * I * 3.0 * x / L) +
                  c[kmax - 5] * std::exp(-two_pi * I * 5.0 * x / L);
    CHECK(std::abs(s[7] - direct) < 1e-12);
    auto c2 = fft::coeffs_from_samples(s, x0, L, kmax);
    for (int k = -kmax; k <= kmax; ++k) CHECK(std::abs(c2[k + kmax] - c[k + kmax]) < 1e-12);
}

TEST_CASE("fft aliasing on offset grids folds with exact phases") {
    const int n = 16;
    const double x0 = 0.1, L = 2.0;
    const int k = 19; // aliases onto k-n = 3
    std::vector<cplx> c(2 * k + 1, cplx{0.0});
    c[k + k] = 1.0;
    auto s = fft::samples_from_coeffs(c, k, x0, L, n);
    for (int j = 0; j < n; ++j) {
        double x = x0 + j * (L / n);
        CHECK(std::abs(s[j] - std::exp(two_pi * I * double(k) * x / L)) < 1e-12);
    }
}

TEST_CASE("polar grid weights are positive and sum to pi") {
    PolarGrid g(32, 64);
    double s = 0.0;
    for (int i = 0; i < g.n_rho; ++i) {
        CHECK(g.area_w[i] > 0.0);
        s += g.area_w[i] * g.n_beta;
    }
    CHECK(s == Approx(pi).epsilon(1e-13));
    CHECK(std::is_sorted(g.rho.begin(), g.rho.end()));
    CHECK(g.rho.front() > 0.0);
    CHECK(g.rho.back() < 1.0);
}

TEST_CASE("boundary grid scattering relations are exact permutations") {
    BoundaryGrid bg(64, 32);
    for (int i = 0; i < bg.n_beta; i += 7)
        for (int j = 0; j < bg.n_alpha; j += 3) {
            auto [i2, j2] = bg.scatter(i, j);
            // angles must match the analytic map mod 2pi
            double b2 = wrap_angle(bg.beta(i) + pi + 2 * bg.alpha(j));
            double a2 = wrap_angle(pi - bg.alpha(j));
            CHECK(wrap_angle(bg.beta(i2)) == Approx(b2).margin(1e-12));
            CHECK(wrap_angle(bg.alpha(j2)) == Approx(a2).margin(1e-12));
            // involution
            auto [i3, j3] = bg.scatter(i2, j2);
            CHECK(i3 == i);
            CHECK(j3 == j);
            // antipodal map preserves the inward set
            auto [i4, j4] = bg.scatter_antipodal(i, j);
            (void)i4;
            CHECK((bg.inward_t(j) >= 0) == (bg.inward_t(j4) >= 0));
        }
}

TEST_CASE("inward grid indexing round-trips") {
    BoundaryGrid bg(128, 64);
    for (int t = 0; t < bg.n_alpha_in(); ++t) {
        int j = bg.torus_j(t);
        CHECK(bg.inward_t(j) == t);
        CHECK(std::cos(bg.alpha(j)) > 0.0);
        CHECK(bg.alpha_in(t) == Approx(wrap_angle_pm(bg.alpha(j))).margin(1e-12));
    }
}
