#include <catch2/catch_amalgamated.hpp>

#include <disctomo/field.hpp>
#include <disctomo/geometry.hpp>

#include <random>

using namespace disctomo;
using Catch::Approx;

namespace {
PolarGridPtr grid() {
    static PolarGridPtr g = make_polar_grid(32, 64);
    return g;
}
} // namespace

TEST_CASE("harmonic_project returns the e^{ik theta} coefficient") {
    FiberField u(grid(), 4);
    u.mode(2) = DiscField::sampled(grid(), [](double x, double y) {
        return cplx(x, y);
    });
    CHECK(u.harmonic_project(2).at(3, 5) == u.mode(2).at(3, 5));
    CHECK(std::abs(u.harmonic_project(1).at(3, 5)) == 0.0);
    CHECK_THROWS_AS(u.harmonic_project(5), std::out_of_range);

    // constant fiber field: average c, degree-1 projection 0
    FiberField c(grid(), 2);
    c.mode(0) = DiscField::sampled(grid(), [](double, double) { return cplx{3.5, -1}; });
    CHECK(c.fiber_average().at(0, 0) == cplx(3.5, -1));
    CHECK(std::abs(c.harmonic_project(1).at(0, 0)) == 0.0);
}

TEST_CASE("angular quadrature oracle: u(x,theta) = x cos(theta)") {
    // oracle: project u_k(x) = (1/2pi) int u(x,theta) e^{-ik theta} dtheta by
    // trapezoid at each grid node, then compare with the stored mode x/2
    const int nt = 64;
    auto g = grid();
    for (int k : {-1, 1}) {
        for (int i = 0; i < g->n_rho; i += 5)
            for (int j = 0; j < g->n_beta; j += 9) {
                double x = g->x(i, j);
                cplx s = 0.0;
                for (int t = 0; t < nt; ++t) {
                    double th = two_pi * t / nt;
                    s += x * std::cos(th) * std::exp(-I * double(k) * th);
                }
                s /= nt;
                CHECK(std::abs(s - cplx(x / 2)) < 1e-12);
            }
    }
}

TEST_CASE("fiber_hilbert spectral action") {
    FiberField u(grid(), 3);
    u.mode(2) = DiscField::sampled(grid(), [](double, double) { return cplx{1.0}; });
    u.mode(0) = DiscField::sampled(grid(), [](double, double) { return cplx{2.0}; });
    u.mode(-1) = DiscField::sampled(grid(), [](double x, double) { return cplx{x}; });
    auto h = fiber_hilbert(u);
    CHECK(h.mode(2).at(1, 1) == -I * cplx(1.0));
    CHECK(std::abs(h.mode(0).at(1, 1)) == 0.0); // sgn(0) = 0
    CHECK(h.mode(-1).at(5, 3) == I * u.mode(-1).at(5, 3));
    // H(H(u)) = -(u - u_0)
    auto hh = fiber_hilbert(h);
    for (int k = -3; k <= 3; ++k)
        for (int i = 0; i < grid()->n_rho; i += 7) {
            cplx expect = k == 0 ? cplx{0.0} : -u.mode(k).at(i, 0);
            CHECK(std::abs(hh.mode(k).at(i, 0) - expect) < 1e-14);
        }
    // parity split zeroes the complementary modes
    auto he = fiber_hilbert(u, HilbertParity::even);
    CHECK(std::abs(he.mode(-1).at(5, 3)) == 0.0);
    CHECK(he.mode(2).at(1, 1) == -I * cplx(1.0));
}

TEST_CASE("parseval norm") {
    // u = e^{i theta} * 1: ||u|| = sqrt(2 pi * pi)
    FiberField u(grid(), 2);
    u.mode(1) = DiscField::sampled(grid(), [](double, double) { return cplx{1.0}; });
    CHECK(parseval_norm(u) == Approx(std::sqrt(2 * pi * pi)).epsilon(1e-12));
    FiberField z(grid(), 2);
    CHECK(parseval_norm(z) == 0.0);
    // agreement with direct quadrature of |u|^2 over SM for a two-mode field
    FiberField w(grid(), 2);
    w.mode(0) = DiscField::sampled(grid(), [](double x, double y) { return cplx(x, y); });
    w.mode(2) = DiscField::sampled(grid(), [](double x, double) { return cplx(1 - x); });
    const int nt = 16;
    double direct = 0.0;
    for (int i = 0; i < grid()->n_rho; ++i)
        for (int j = 0; j < grid()->n_beta; ++j)
            for (int t = 0; t < nt; ++t) {
                double th = two_pi * t / nt;
                cplx val = w.mode(0).at(i, j) + w.mode(2).at(i, j) * std::exp(2.0 * I * th);
                direct += grid()->area_w[i] * (two_pi / nt) * std::norm(val);
            }
    CHECK(parseval_norm(w) == Approx(std::sqrt(direct)).epsilon(1e-10));
    // weighted variant
    double nk = parseval_norm(w, 3.0);
    double expect = std::sqrt(
        two_pi * (sq(w.mode(0).norm_M()) + 9.0 * sq(w.mode(2).norm_M())));
    CHECK(nk == Approx(expect).epsilon(1e-12));
}

TEST_CASE("grid <-> harmonic round trip is spectrally exact") {
    // band-limited u: modes -3..3 with polynomial profiles
    FiberField u(grid(), 3);
    for (int k = -3; k <= 3; ++k)
        u.mode(k) = DiscField::sampled(grid(), [k](double x, double y) {
            return std::pow(cplx(x, y), std::abs(k)) + cplx(0.1 * k);
        });
    int nt = 16;
    auto s = u.theta_samples(nt);
    auto u2 = FiberField::from_theta_samples(grid(), 3, s, nt);
    for (int k = -3; k <= 3; ++k)
        for (size_t p = 0; p < grid()->size(); ++p)
            CHECK(std::abs(u2.mode(k).values[p] - u.mode(k).values[p]) < 1e-10);
}

TEST_CASE("fiber_hilbert is skew-adjoint on mean-zero fields") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    FiberField u(grid(), 3), v(grid(), 3);
    for (int k = -3; k <= 3; ++k) {
        if (k == 0) continue;
        double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
        u.mode(k) = DiscField::sampled(grid(), [=](double x, double y) {
            return cplx(a + c * x * y, b * y);
        });
        v.mode(k) = DiscField::sampled(grid(), [=](double x, double y) {
            return cplx(d * x, a * y * y - b);
        });
    }
    cplx lhs = fiber_inner(fiber_hilbert(u), v);
    cplx rhs = fiber_inner(u, fiber_hilbert(v));
    CHECK(std::abs(lhs + rhs) < 1e-12);
}

TEST_CASE("off-grid evaluation interpolates band-limited fields") {
    auto f = DiscField::sampled(grid(), [](double x, double y) {
        cplx z(x, y);
        return z * z * z + 0.5 * std::conj(z) + cplx(0.0, 0.25);
    });
    DiscField gridded = f;
    gridded.fn = nullptr; // force interpolation
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-0.72, 0.72);
    for (int it = 0; it < 50; ++it) {
        double x = U(rng), y = U(rng);
        cplx z(x, y);
        cplx expect = z * z * z + 0.5 * std::conj(z) + cplx(0.0, 0.25);
        CHECK(std::abs(gridded.eval(x, y) - expect) < 1e-9);
    }
    // extrapolation to the boundary ring (rho=1) stays accurate
    cplx bexpect = cplx(1, 0) + 0.5 + cplx(0, 0.25);
    CHECK(std::abs(gridded.eval(1.0, 0.0) - bexpect) < 1e-8);
}

TEST_CASE("fiber products and exponentials") {
    FiberField a(grid(), 2);
    a.mode(1) = DiscField::sampled(grid(), [](double x, double y) { return cplx(x, y); });
    FiberField b(grid(), 2);
    b.mode(-1) = DiscField::sampled(grid(), [](double, double) { return cplx{2.0}; });
    auto p = fiber_product(a, b, 4);
    // e^{i th} z * 2 e^{-i th} = 2z at mode 0
    for (size_t q = 0; q < grid()->size(); ++q)
        CHECK(std::abs(p.mode(0).values[q] - 2.0 * a.mode(1).values[q]) < 1e-12);
    // exp of a degree-1 field matches pointwise exponential
    auto e = fiber_exp(a, 8);
    double x0 = grid()->x(3, 5), y0 = grid()->y(3, 5), th = 0.77;
    cplx direct = std::exp(cplx(x0, y0) * std::exp(I * th));
    cplx series = 0.0;
    for (int k = -8; k <= 8; ++k)
        series += e.mode(k).at(3, 5) * std::exp(I * double(k) * th);
    CHECK(std::abs(series - direct) < 1e-10);
}
