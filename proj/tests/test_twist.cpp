#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qst/twist.hpp"

using namespace qst;
using namespace qst::star;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd sigma_j(double t) {
    MatrixXd s = MatrixXd::Zero(2, 2);
    s(0, 1) = t;
    s(1, 0) = -t;
    return s;
}

GridSymbol test_gaussian(const std::vector<Axis>& axes, const VectorXd& centre, double width,
                         cplx amp = 1.0) {
    return GridSymbol::sample(axes, [&](const VectorXd& x) {
        return amp * std::exp(-0.5 * (x - centre).squaredNorm() / (width * width));
    });
}

}  // namespace

TEST_CASE("twist followed by inverse twist is the identity") {
    Rng rng(71);
    std::vector<Axis> axes{{12.0, 16}, {12.0, 16}};
    TwoSlotSymbol F = TwoSlotSymbol::random_bandlimited(axes, rng, 4);
    const MatrixXd s = sigma_j(0.8);
    TwoSlotSymbol round = apply_twist(apply_twist(F, s, +1), s, -1);
    CHECK((round - F).frobenius() <= 1e-12 * F.frobenius());
}

TEST_CASE("identity lorentz element gives the identity twisted action") {
    Rng rng(72);
    std::vector<Axis> axes{{12.0, 16}, {12.0, 16}};
    TwoSlotSymbol F = TwoSlotSymbol::random_bandlimited(axes, rng, 4);
    const MatrixXd s = sigma_j(1.0);
    TwoSlotSymbol acted = twisted_action(MatrixXd::Identity(2, 2), s, F);
    CHECK((acted - F).frobenius() <= 1e-12 * F.frobenius());
}

TEST_CASE("two-slot star of an outer product is the twisted product") {
    std::vector<Axis> axes{{20.0, 32}, {20.0, 32}};
    VectorXd c1(2), c2(2);
    c1 << -0.8, 0.4;
    c2 << 0.6, -0.2;
    GridSymbol f = test_gaussian(axes, c1, 1.3);
    GridSymbol g = test_gaussian(axes, c2, 1.4, cplx(0.7, 0.4));
    const MatrixXd s = sigma_j(0.9);
    GridSymbol via_two_slot = two_slot_star(TwoSlotSymbol::outer(f, g), s);
    GridSymbol direct = star_product(f, g, s);
    CHECK((via_two_slot - direct).l2_norm() <= 1e-8 * direct.l2_norm());
}

TEST_CASE("twisted covariance: star after twisted action equals pullback of star") {
    std::vector<Axis> axes{{20.0, 32}, {20.0, 32}};
    VectorXd c1(2), c2(2);
    c1 << -0.5, 0.3;
    c2 << 0.5, -0.3;
    GridSymbol f = test_gaussian(axes, c1, 1.5);
    GridSymbol g = test_gaussian(axes, c2, 1.6, cplx(0.6, 0.3));
    const MatrixXd s = sigma_j(1.0);
    const MatrixXd L = boost2(0.3);

    TwoSlotSymbol acted = twisted_action(L, s, TwoSlotSymbol::outer(f, g));
    GridSymbol lhs = two_slot_star(acted, s);
    GridSymbol rhs = pullback(star_product(f, g, s), L, VectorXd::Zero(2));
    CHECK((lhs - rhs).l2_norm() <= 1e-5 * rhs.l2_norm());
}

TEST_CASE("memory cap is enforced") {
    std::vector<Axis> axes{{12.0, 128}, {12.0, 128}};  // slot size 16384 -> 2.7e8 entries
    CHECK_THROWS_AS(TwoSlotSymbol::outer(GridSymbol::zeros(axes, Domain::Position),
                                         GridSymbol::zeros(axes, Domain::Position)),
                    numeric_error);
}

TEST_CASE("coassociativity probe") {
    std::vector<Axis> axes{{20.0, 48}, {20.0, 48}};
    VectorXd c1(2), c2(2), c3(2);
    c1 << -0.6, 0.4;
    c2 << 0.5, -0.3;
    c3 << 0.2, 0.5;
    GridSymbol f = test_gaussian(axes, c1, 1.5);
    GridSymbol g = test_gaussian(axes, c2, 1.6, cplx(0.5, 0.5));
    GridSymbol h = test_gaussian(axes, c3, 1.55, cplx(-0.3, 0.8));
    MatrixXd omega(2, 2);  // boost generator in 1+1 dimensions
    omega << 0, 1, 1, 0;

    SUBCASE("zero sigma gives exactly zero defect") {
        CoassociativityReport rep = coassociativity_probe(MatrixXd::Zero(2, 2), f, g, h, omega);
        CHECK(rep.coassoc_defect == 0.0);
    }
    SUBCASE("generic sigma stays within tolerance and star is associative") {
        CoassociativityReport rep = coassociativity_probe(sigma_j(0.9), f, g, h, omega);
        CHECK(rep.star_assoc_defect <= 1e-8);
        CHECK(rep.coassoc_defect <= 1e-6);
    }
}
