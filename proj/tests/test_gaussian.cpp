#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qst/star.hpp"

using namespace qst;
using namespace qst::star;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

MatrixXd theta_j(double t) {
    MatrixXd th = MatrixXd::Zero(2, 2);
    th(0, 1) = t;
    th(1, 0) = -t;
    return th;
}

MatrixXd theta_standard4(double scale = 1.0) {
    MatrixXd th = MatrixXd::Zero(4, 4);
    th(0, 2) = -scale;
    th(2, 0) = scale;
    th(1, 3) = -scale;
    th(3, 1) = scale;
    return th;
}

}  // namespace

TEST_CASE("gaussian fourier matches the grid engine") {
    Rng rng(41);
    GaussianSymbol f = random_gaussian(2, rng);
    GridSymbol grid = f.to_grid({{18.0, 64}, {18.0, 64}});
    GridSymbol gridk = fourier(grid);
    GaussianSymbol fk = fourier(f);
    double worst = 0;
    for (std::size_t i = 0; i < gridk.size(); i += 7) {
        worst = std::max(worst, std::abs(gridk[i] - fk.evaluate(gridk.point(i))));
    }
    CHECK(worst <= 1e-9 * gridk.max_abs());
}

TEST_CASE("gaussian fourier round trip is exact") {
    Rng rng(42);
    for (int rep = 0; rep < 10; ++rep) {
        GaussianSymbol f = random_gaussian(3, rng);
        GaussianSymbol back = inverse_fourier(fourier(f));
        ProbeCloud cloud(f, 7);
        const double err = cloud.rel_error([&](const VectorXd& x) { return f.evaluate(x); },
                                           [&](const VectorXd& x) { return back.evaluate(x); });
        CHECK(err <= 1e-12);
    }
}

TEST_CASE("theta = 0 star product is the pointwise product") {
    Rng rng(43);
    GaussianSymbol f = random_gaussian(2, rng);
    GaussianSymbol g = random_gaussian(2, rng);
    GaussianSymbol st = star_product(f, g, MatrixXd::Zero(2, 2));
    GaussianSymbol pw = f.pointwise(g);
    ProbeCloud cloud(pw, 8);
    CHECK(cloud.rel_error([&](const VectorXd& x) { return pw.evaluate(x); },
                          [&](const VectorXd& x) { return st.evaluate(x); }) <= 1e-12);
}

TEST_CASE("gaussian star value at x = 0 agrees with the quadrature oracle") {
    // (f star g)(0) = integral dh fcheck(h) g(-1/2 theta^T h), trapezoid on a fine box
    Rng rng(44);
    const MatrixXd th = theta_j(0.7);
    for (int rep = 0; rep < 3; ++rep) {
        GaussianSymbol f = random_gaussian(2, rng);
        GaussianSymbol g = random_gaussian(2, rng);
        GaussianSymbol fk = fourier(f);

        const int M = 320;
        const double K = 14.0;
        const double dh = 2.0 * K / M;
        cplx acc = 0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) {
                VectorXd h(2);
                h << -K + (i + 0.5) * dh, -K + (j + 0.5) * dh;
                VectorXd s = 0.5 * (th.transpose() * h);
                acc += fk.evaluate(h) * g.evaluate(-s);
            }
        acc *= dh * dh;

        const cplx direct = star_product(f, g, th).evaluate(VectorXd::Zero(2));
        CHECK(std::abs(direct - acc) <= 1e-8 * std::abs(direct));
    }
}

TEST_CASE("gaussian star is associative") {
    Rng rng(45);
    for (int rep = 0; rep < 5; ++rep) {
        const MatrixXd th = theta_j(0.4 + 0.2 * rep);
        GaussianSymbol f = random_gaussian(2, rng);
        GaussianSymbol g = random_gaussian(2, rng);
        GaussianSymbol h = random_gaussian(2, rng);
        GaussianSymbol lhs = star_product(star_product(f, g, th), h, th);
        GaussianSymbol rhs = star_product(f, star_product(g, h, th), th);
        ProbeCloud cloud(lhs, 9);
        CHECK(cloud.rel_error([&](const VectorXd& x) { return lhs.evaluate(x); },
                              [&](const VectorXd& x) { return rhs.evaluate(x); }) <= 1e-8);
    }
    // and in dimension 4 with the standard commutator matrix
    Rng rng4(46);
    GaussianSymbol f = random_gaussian(4, rng4);
    GaussianSymbol g = random_gaussian(4, rng4);
    GaussianSymbol h = random_gaussian(4, rng4);
    const MatrixXd th4 = theta_standard4();
    GaussianSymbol lhs = star_product(star_product(f, g, th4), h, th4);
    GaussianSymbol rhs = star_product(f, star_product(g, h, th4), th4);
    ProbeCloud cloud(lhs, 10);
    CHECK(cloud.rel_error([&](const VectorXd& x) { return lhs.evaluate(x); },
                          [&](const VectorXd& x) { return rhs.evaluate(x); }) <= 1e-8);
}

TEST_CASE("involution: conj(f star g) = conj(g) star conj(f)") {
    Rng rng(47);
    const MatrixXd th = theta_standard4(0.8);
    GaussianSymbol f = random_gaussian(4, rng);
    GaussianSymbol g = random_gaussian(4, rng);
    GaussianSymbol lhs = star_product(f, g, th).conj();
    GaussianSymbol rhs = star_product(g.conj(), f.conj(), th);
    ProbeCloud cloud(lhs, 11);
    CHECK(cloud.rel_error([&](const VectorXd& x) { return lhs.evaluate(x); },
                          [&](const VectorXd& x) { return rhs.evaluate(x); }) <= 1e-12);
}

TEST_CASE("closed form equals the grid engine on the common domain") {
    Rng rng(48);
    const MatrixXd th = theta_j(1.0);
    GaussianSymbol f = random_gaussian(2, rng, 1.2);
    GaussianSymbol g = random_gaussian(2, rng, 1.2);
    std::vector<Axis> axes{{20.0, 64}, {20.0, 64}};
    GridSymbol fg = f.to_grid(axes);
    GridSymbol gg = g.to_grid(axes);
    GridSymbol grid_star = star_product(fg, gg, th);
    GaussianSymbol exact = star_product(f, g, th);
    GridSymbol exact_grid = exact.to_grid(axes);
    CHECK((grid_star - exact_grid).l2_norm() <= 1e-6 * exact_grid.l2_norm());
}

TEST_CASE("theta -> 0 limit is monotone towards the pointwise product") {
    Rng rng(49);
    GaussianSymbol f = random_gaussian(2, rng);
    GaussianSymbol g = random_gaussian(2, rng);
    GaussianSymbol pw = f.pointwise(g);
    ProbeCloud cloud(pw, 12);
    double prev = 1e300;
    for (double t : {1.0, 0.5, 0.25, 0.125}) {
        GaussianSymbol st = star_product(f, g, theta_j(t));
        const double err = cloud.rel_error([&](const VectorXd& x) { return pw.evaluate(x); },
                                           [&](const VectorXd& x) { return st.evaluate(x); });
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("derivative: closed form, finite differences, fourier identity, leibniz") {
    Rng rng(50);
    GaussianSymbol f = random_gaussian(2, rng);
    PolyGaussian df = derivative(f, 0);

    // finite-difference oracle
    VectorXd x(2);
    x << 0.3, -0.4;
    const double h = 1e-5;
    VectorXd xp = x, xm = x;
    xp(0) += h;
    xm(0) -= h;
    const cplx fd = (f.evaluate(xp) - f.evaluate(xm)) / (2 * h);
    CHECK(std::abs(df.evaluate(x) - fd) <= 1e-6);

    // fourier identity checked through the grid engine
    GridSymbol fgrid = f.to_grid({{18.0, 64}, {18.0, 64}});
    GridSymbol dgrid = derivative(fgrid, 0);
    CHECK(std::abs(dgrid[dgrid.flat_index({32, 32})] -
                   df.evaluate(dgrid.point(dgrid.flat_index({32, 32})))) <= 1e-8);

    // leibniz rule for the star product at constant theta
    const MatrixXd th = theta_j(0.6);
    GaussianSymbol g = random_gaussian(2, rng);
    GaussianSymbol fg = star_product(f, g, th);
    PolyGaussian dfg = PolyGaussian(fg).derivative(0);
    PolyGaussian lhs1 = star_product(derivative(f, 0), g, th);
    PolyGaussian lhs2 = star_product(f, derivative(g, 0), th);
    ProbeCloud cloud(fg, 13);
    const double err =
        cloud.rel_error([&](const VectorXd& y) { return dfg.evaluate(y); },
                        [&](const VectorXd& y) { return lhs1.evaluate(y) + lhs2.evaluate(y); });
    CHECK(err <= 1e-8);
}

TEST_CASE("pullback: identity, translation phase, composition") {
    Rng rng(51);
    GaussianSymbol f = random_gaussian(2, rng);

    GaussianSymbol id = pullback(f, MatrixXd::Identity(2, 2), VectorXd::Zero(2));
    ProbeCloud cloud(f, 14);
    CHECK(cloud.rel_error([&](const VectorXd& x) { return f.evaluate(x); },
                          [&](const VectorXd& x) { return id.evaluate(x); }) <= 1e-14);

    // shift theorem: fourier(f(. - a))(k) = e^{-i k.a} fourier(f)(k)
    VectorXd a(2);
    a << 0.7, -1.1;
    GaussianSymbol shifted = f.translated(a);
    GaussianSymbol fk = fourier(f);
    GaussianSymbol sk = fourier(shifted);
    for (int rep = 0; rep < 16; ++rep) {
        VectorXd k(2);
        k << rng.normal(), rng.normal();
        const cplx expected = std::exp(cplx(0, -k.dot(a))) * fk.evaluate(k);
        CHECK(std::abs(sk.evaluate(k) - expected) <= 1e-12 * std::abs(expected));
    }

    // composition law on the exact path
    const MatrixXd L1 = boost2(0.5), L2 = boost2(-0.3);
    VectorXd a1(2), a2(2);
    a1 << 0.4, 0.2;
    a2 << -0.3, 0.9;
    GaussianSymbol one_then_two = pullback(pullback(f, L1, a1), L2, a2);
    // pullback(pullback(f,L1,a1), L2,a2)(x) = f(L1^{-1}(L2^{-1}(x-a2)-a1)) = pullback(f, L2 L1, L2 a1 + a2)
    GaussianSymbol combined = pullback(f, L2 * L1, L2 * a1 + a2);
    ProbeCloud cloud2(combined, 15);
    CHECK(cloud2.rel_error([&](const VectorXd& x) { return combined.evaluate(x); },
                           [&](const VectorXd& x) { return one_then_two.evaluate(x); }) <= 1e-8);
}

TEST_CASE("covariance: transformed-sigma defect vanishes, fixed-sigma defect does not") {
    Rng rng(52);
    const MatrixXd sigma = theta_standard4();
    GaussianSymbol f = random_gaussian(4, rng);
    GaussianSymbol g = random_gaussian(4, rng);

    CovarianceDefectReport id =
        covariance_defect(f, g, sigma, MatrixXd::Identity(4, 4), VectorXd::Zero(4));
    CHECK(id.transformed <= 1e-14);
    CHECK(id.fixed <= 1e-14);

    // boost of rapidity 0.5 in the (0,1) plane, embedded in dim 4
    MatrixXd L = MatrixXd::Identity(4, 4);
    L.block<2, 2>(0, 0) = boost2(0.5);
    CovarianceDefectReport rep = covariance_defect(f, g, sigma, L, VectorXd::Zero(4));
    CHECK(rep.transformed <= 1e-8);
    CHECK(rep.fixed >= 1e-3);

    // space reflection (improper); the pullback identity still holds
    MatrixXd R = MatrixXd::Identity(4, 4);
    R(1, 1) = R(2, 2) = R(3, 3) = -1.0;
    CovarianceDefectReport rrep = covariance_defect(f, g, sigma, R, VectorXd::Zero(4));
    CHECK(rrep.transformed <= 1e-8);
}

TEST_CASE("gaussian moyal: order 0 and order 1 terms") {
    Rng rng(53);
    const MatrixXd th = theta_j(0.8);
    GaussianSymbol f = random_gaussian(2, rng);
    GaussianSymbol g = random_gaussian(2, rng);

    auto m0 = moyal_product(f, g, th, 0);
    auto m1 = moyal_product(f, g, th, 1);
    GaussianSymbol pw = f.pointwise(g);
    PolyGaussian df = derivative(f, 0), dg = derivative(g, 1);
    PolyGaussian df1 = derivative(f, 1), dg0 = derivative(g, 0);

    ProbeCloud cloud(pw, 16);
    for (const VectorXd& x : cloud.points) {
        CHECK(std::abs(evaluate_sum(m0, x) - pw.evaluate(x)) <= 1e-12);
        const cplx first = pw.evaluate(x) +
                           cplx(0, 0.5) * (th(0, 1) * df.evaluate(x) * dg.evaluate(x) +
                                           th(1, 0) * df1.evaluate(x) * dg0.evaluate(x));
        CHECK(std::abs(evaluate_sum(m1, x) - first) <= 1e-12);
    }
}

TEST_CASE("star product preserves Re-positivity across wild parameters") {
    // closure property of the admissible gaussian class; the constructor of
    // the result re-validates, so any loss would throw numeric_error
    Rng rng(54);
    int built = 0;
    for (int it = 0; it < 300; ++it) {
        MatrixXd re(2, 2), im(2, 2);
        const double a = std::exp(rng.uniform(-3, 1)), c = std::exp(rng.uniform(-3, 1));
        const double b = std::sqrt(a * c) * 0.95 * rng.uniform();
        re << a, b, b, c;
        im << rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6);
        im(1, 0) = im(0, 1);
        GaussianSymbol f(1.0, re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>(), VectorXcd::Zero(2));
        GaussianSymbol g = random_gaussian(2, rng);
        GaussianSymbol r = star_product(f, g, theta_j(std::exp(rng.uniform(-2, 3))));
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(r.quadratic_form().real());
        CHECK(es.eigenvalues().minCoeff() > 0);
        ++built;
    }
    CHECK(built == 300);
}
