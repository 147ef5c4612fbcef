#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qst/grid.hpp"

using namespace qst;
using namespace qst::star;
using Eigen::VectorXd;

namespace {

GridSymbol gaussian_1d(double width, double extent, int points) {
    return GridSymbol::sample({{extent, points}}, [width](const VectorXd& x) {
        return cplx(std::exp(-0.5 * x(0) * x(0) / (width * width)), 0);
    });
}

/// Random sum of a few displaced complex Gaussian bumps; smooth and decaying.
GridSymbol random_bumps(std::vector<Axis> axes, Rng& rng, int nbumps = 3) {
    const int d = int(axes.size());
    std::vector<VectorXd> centres;
    std::vector<cplx> amps;
    std::vector<double> widths;
    for (int b = 0; b < nbumps; ++b) {
        VectorXd c(d);
        for (int k = 0; k < d; ++k) c(k) = 0.1 * axes[size_t(k)].extent * (rng.uniform() - 0.5);
        centres.push_back(c);
        amps.push_back(rng.normal_complex());
        widths.push_back(0.06 * axes[0].extent * (1.0 + 0.3 * rng.uniform()));
    }
    return GridSymbol::sample(axes, [&](const VectorXd& x) {
        cplx acc = 0;
        for (int b = 0; b < nbumps; ++b)
            acc += amps[size_t(b)] * std::exp(-0.5 * (x - centres[size_t(b)]).squaredNorm() /
                                              (widths[size_t(b)] * widths[size_t(b)]));
        return acc;
    });
}

}  // namespace

TEST_CASE("fourier of the unit gaussian matches the closed form") {
    // e^{-x^2/2}  ->  (2 pi)^{-1/2} e^{-k^2/2}
    GridSymbol f = gaussian_1d(1.0, 20.0, 64);
    GridSymbol fk = fourier(f);
    double worst = 0;
    for (std::size_t i = 0; i < fk.size(); ++i) {
        const double k = fk.point(i)(0);
        const double expected = std::exp(-0.5 * k * k) / std::sqrt(2.0 * pi);
        worst = std::max(worst, std::abs(fk[i] - cplx(expected, 0)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("round trip inverse_fourier(fourier(f)) = f") {
    Rng rng(31);
    GridSymbol f = random_bumps({{12.0, 32}, {12.0, 32}}, rng);
    GridSymbol back = inverse_fourier(fourier(f));
    CHECK((back - f).l2_norm() <= 1e-10 * f.l2_norm());
}

TEST_CASE("fourier is linear to machine rounding") {
    Rng rng(32);
    GridSymbol f = random_bumps({{16.0, 32}}, rng);
    GridSymbol g = random_bumps({{16.0, 32}}, rng);
    GridSymbol lhs = fourier(f + g);
    GridSymbol rhs = fourier(f) + fourier(g);
    CHECK((lhs - rhs).l2_norm() <= 1e-13 * (fourier(f).l2_norm() + fourier(g).l2_norm()));
}

TEST_CASE("spectral derivative: fourier identity and finite differences") {
    GridSymbol f = gaussian_1d(1.3, 24.0, 96);
    GridSymbol df = derivative(f, 0);

    // fourier(d_mu f)(k) = i k fcheck(k)
    GridSymbol lhs = fourier(df);
    GridSymbol fk = fourier(f);
    double worst = 0;
    for (std::size_t i = 0; i < fk.size(); ++i) {
        const double k = fk.point(i)(0);
        worst = std::max(worst, std::abs(lhs[i] - cplx(0, k) * fk[i]));
    }
    CHECK(worst <= 1e-10 * fk.max_abs());

    // central-difference oracle at interior nodes
    const double h = f.axis(0).dx();
    double worst_fd = 0;
    for (int j = 2; j < f.axis(0).points - 2; ++j) {
        const cplx fd = (f[size_t(j + 1)] - f[size_t(j - 1)]) / (2.0 * h);
        worst_fd = std::max(worst_fd, std::abs(df[size_t(j)] - fd));
    }
    // central differences are only O(h^2); the spectral result is the accurate one
    CHECK(worst_fd <= 1e-2);
    // difference quotient of the band-limited interpolant itself, small step
    double worst_r = 0;
    const double hh = 1e-4;
    for (int j = 8; j < f.axis(0).points - 8; j += 5) {
        VectorXd xp(1), xm(1);
        xp << f.axis(0).x(j) + hh;
        xm << f.axis(0).x(j) - hh;
        const cplx fd = (spectral_eval(f, xp) - spectral_eval(f, xm)) / (2.0 * hh);
        worst_r = std::max(worst_r, std::abs(df[size_t(j)] - fd));
    }
    CHECK(worst_r <= 1e-6);
}

TEST_CASE("boundary decay is enforced") {
    GridSymbol ones = GridSymbol::sample({{8.0, 16}}, [](const VectorXd&) { return cplx(1, 0); });
    CHECK(ones.boundary_ratio() == 1.0);
    CHECK_THROWS_AS(fourier(ones), validation_error);

    GridSymbol ok = gaussian_1d(0.8, 16.0, 32);
    CHECK(ok.satisfies_decay());
}

TEST_CASE("grid constraints are validated") {
    CHECK_THROWS_AS(GridSymbol::zeros({{4.0, 4}}, Domain::Position), validation_error);
    CHECK_THROWS_AS(GridSymbol::zeros({{4.0, 9}}, Domain::Position), validation_error);
    CHECK_THROWS_AS(GridSymbol({{4.0, 16}}, Domain::Position, std::vector<cplx>(3)),
                    validation_error);
}

TEST_CASE("spectral_eval reproduces grid samples and interpolates") {
    GridSymbol f = gaussian_1d(1.0, 20.0, 64);
    VectorXd x(1);
    x << f.axis(0).x(20);
    CHECK(std::abs(spectral_eval(f, x) - f[20]) <= 1e-12);
    x << 0.31;  // off-grid
    CHECK(std::abs(spectral_eval(f, x) - cplx(std::exp(-0.5 * 0.31 * 0.31), 0)) <= 1e-9);
}
