#pragma once

#include <memory>

#include "common.hpp"

namespace disctomo {

// Polar tensor-product grid on the open unit disc: Gauss-Legendre radii on
// (0,1) times uniform angles beta_j = 2*pi*j/n_beta. The GL radii avoid the
// center and give accurate area quadrature; rho=1 is not a node.
struct PolarGrid {
    int n_rho, n_beta;
    std::vector<double> rho;      // strictly increasing, in (0,1)
    std::vector<double> rho_w;    // weights for integral over drho on (0,1)
    std::vector<double> beta;     // 2*pi*j/n_beta
    std::vector<double> area_w;   // per-node weight for integral over the disc
    std::vector<double> bary_w;   // barycentric weights for radial interpolation

    PolarGrid(int nr, int nb) : n_rho(nr), n_beta(nb) {
        if (nr < 4 || nb < 4 || nb % 2 != 0)
            throw std::invalid_argument("PolarGrid: need n_rho>=4, even n_beta>=4");
        GaussRule g(nr);
        rho.resize(nr);
        rho_w.resize(nr);
        for (int i = 0; i < nr; ++i) {
            rho[i] = 0.5 * (g.x[i] + 1.0);
            rho_w[i] = 0.5 * g.w[i];
        }
        beta.resize(nb);
        for (int j = 0; j < nb; ++j) beta[j] = two_pi * j / nb;
        area_w.resize(nr);
        for (int i = 0; i < nr; ++i) area_w[i] = rho_w[i] * rho[i] * (two_pi / nb);
        bary_w = barycentric_weights(rho);
    }

    size_t size() const { return size_t(n_rho) * n_beta; }
    size_t idx(int i, int j) const { return size_t(i) * n_beta + j; }
    double x(int i, int j) const { return rho[i] * std::cos(beta[j]); }
    double y(int i, int j) const { return rho[i] * std::sin(beta[j]); }
};

using PolarGridPtr = std::shared_ptr<const PolarGrid>;

inline PolarGridPtr make_polar_grid(int nr, int nb) {
    return std::make_shared<const PolarGrid>(nr, nb);
}

// Boundary torus grid for dSM in fan-beam coordinates. beta_i = 2*pi*i/n_beta;
// the alpha grid is offset by half a step, alpha_j = 2*pi*(j+1/2)/n_alpha, so
// glancing rays alpha = +-pi/2 are never sampled and the scattering relations
// land exactly on nodes (requires n_alpha | n_beta, both even).
struct BoundaryGrid {
    int n_beta, n_alpha;

    BoundaryGrid(int nb, int na) : n_beta(nb), n_alpha(na) {
        if (nb % 2 || na % 2 || na < 4 || nb < 4 || nb % na != 0)
            throw std::invalid_argument(
                "BoundaryGrid: need even n_beta, n_alpha with n_alpha | n_beta");
    }

    double beta(int i) const { return two_pi * i / n_beta; }
    double alpha(int j) const { return two_pi * (j + 0.5) / n_alpha; }

    // inward grid: alpha in (-pi/2, pi/2), indexed t = 0..n_alpha/2-1
    int n_alpha_in() const { return n_alpha / 2; }
    double alpha_in(int t) const { return -pi / 2 + two_pi * (t + 0.5) / n_alpha; }

    // torus alpha index of inward index t
    int torus_j(int t) const {
        int j = t - n_alpha / 4;
        return j >= 0 ? j : j + n_alpha;
    }
    // inward index of torus alpha index j, or -1 if outgoing
    int inward_t(int j) const {
        if (j < n_alpha / 4) return j + n_alpha / 4;
        if (j >= 3 * n_alpha / 4) return j - 3 * n_alpha / 4;
        return -1;
    }

    // scattering relation S(beta,alpha) = (beta+pi+2alpha, pi-alpha) as an
    // exact torus index map
    std::pair<int, int> scatter(int i, int j) const {
        int r = n_beta / n_alpha;
        int i2 = (i + n_beta / 2 + r * (2 * j + 1)) % n_beta;
        int j2 = (n_alpha / 2 - 1 - j + n_alpha) % n_alpha;
        return {i2, j2};
    }
    // antipodal scattering S_A(beta,alpha) = (beta+pi+2alpha, -alpha)
    std::pair<int, int> scatter_antipodal(int i, int j) const {
        int r = n_beta / n_alpha;
        int i2 = (i + n_beta / 2 + r * (2 * j + 1)) % n_beta;
        int j2 = (n_alpha - 1 - j) % n_alpha;
        return {i2, j2};
    }
    // S_A restricted to the inward grid, in (i, t) indexing
    std::pair<int, int> scatter_antipodal_in(int i, int t) const {
        auto [i2, j2] = scatter_antipodal(i, torus_j(t));
        int t2 = inward_t(j2);
        assert(t2 >= 0);
        return {i2, t2};
    }

    size_t torus_size() const { return size_t(n_beta) * n_alpha; }
    size_t torus_idx(int i, int j) const { return size_t(i) * n_alpha + j; }
    size_t in_size() const { return size_t(n_beta) * n_alpha_in(); }
    size_t in_idx(int i, int t) const { return size_t(i) * n_alpha_in() + t; }
};

using BoundaryGridPtr = std::shared_ptr<const BoundaryGrid>;

inline BoundaryGridPtr make_boundary_grid(int nb, int na) {
    return std::make_shared<const BoundaryGrid>(nb, na);
}

} // namespace disctomo
