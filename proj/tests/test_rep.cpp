#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qst/core.hpp"
#include "qst/rep.hpp"

using namespace qst;
using namespace qst::rep;
using Eigen::Matrix4d;
using Eigen::Vector4d;

TEST_CASE("schrodinger pair: exact commutator block and corner defect") {
    const int N = 16;
    auto [P, Q] = schrodinger_pair(N);
    CHECK((P - P.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((Q - Q.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);

    MatrixXcd comm = P * Q - Q * P + cplx(0, 1) * MatrixXcd::Identity(N, N);
    double off_corner = 0;
    for (int i = 0; i < N - 1; ++i)
        for (int j = 0; j < N - 1; ++j) off_corner = std::max(off_corner, std::abs(comm(i, j)));
    CHECK(off_corner <= 1e-13);

    // ladder-matrix oracle: ([P,Q])_{N-1,N-1} = -i (1 - N)
    const cplx corner = (P * Q - Q * P)(N - 1, N - 1);
    CHECK(std::abs(corner - cplx(0, -1.0) * (1.0 - N)) <= 1e-12);
}

TEST_CASE("basic quadruple realises i S on the safe subspace") {
    BasicQuadruple bx = build_X(12);
    const Matrix4d S = core::sigma_standard().matrix();
    const SpMat id = sparse_identity(bx.space.dim());
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            SpMat defect = SpMat(commutator(bx.x[size_t(mu)], bx.x[size_t(nu)]) -
                                 cplx(0, S(mu, nu)) * id);
            CHECK(bx.space.safe_block_max(defect) <= 1e-12);
        }
    // tensor factors commute exactly
    CHECK(max_abs(commutator(bx.x[0], bx.x[1])) == 0.0);
}

TEST_CASE("coordinates from a boost and from a singular matrix") {
    DFRCoordinates ident = build_coordinates(Matrix4d::Identity(), 1.0, 12);
    CHECK(ident.commutator_residual() <= 1e-12);

    const double chi = 0.8;
    core::PoincareTransform L(core::boost_matrix(chi, Eigen::Vector3d(0.2, -1.0, 0.5)));
    DFRCoordinates boosted = build_coordinates(L.lambda(), 1.0, 12);
    CHECK(boosted.commutator_residual() <= 1e-10 * std::cosh(chi) * std::cosh(chi));

    // hermiticity
    for (const SpMat& q : boosted.q) {
        MatrixXcd dq = MatrixXcd(q);
        CHECK((dq - dq.adjoint()).cwiseAbs().maxCoeff() <= 1e-13);
    }

    Matrix4d singular = Matrix4d::Zero();
    singular(1, 0) = 1.0;  // q^1 = lambda X^0, everything else zero
    singular(2, 2) = 1.0;
    DFRCoordinates degenerate = build_coordinates(singular, 1.0, 12);
    CHECK(degenerate.commutator_residual() <= 1e-12);
}

TEST_CASE("translation generators") {
    TranslationGenerators tg = build_pi(6);
    const Matrix4d g = core::minkowski_metric();
    const SpMat id = sparse_identity(tg.space.dim());

    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            SpMat pp = commutator(tg.pi_upper[size_t(mu)], tg.pi_upper[size_t(nu)]);
            CHECK(tg.space.safe_block_max(pp) <= 1e-12);
            SpMat px = SpMat(commutator(tg.pi_upper[size_t(mu)], tg.x[size_t(nu)]) +
                             cplx(0, g(mu, nu)) * id);
            CHECK(tg.space.safe_block_max(px) <= 1e-12);
        }
    // disjoint modes commute exactly
    CHECK(max_abs(commutator(tg.pi_upper[1], tg.x[0])) == 0.0);
    CHECK_THROWS_AS(build_pi(16), numeric_error);
}

TEST_CASE("universal xi realises the (1,1,-1) relations") {
    UniversalXi ux = universal_xi(8);
    const SpMat id = sparse_identity(ux.space.dim());
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            SpMat defect = SpMat(commutator(ux.xi[size_t(mu)], ux.xi[size_t(nu)]) -
                                 cplx(0, ux.theta(mu, nu)) * id);
            CHECK(ux.space.safe_block_max(defect) <= 1e-12);
        }
    // [xi^0, xi^1] and [xi^0, xi^2] involve disjoint modes
    CHECK(max_abs(commutator(ux.xi[0], ux.xi[1])) == 0.0);
    CHECK(max_abs(commutator(ux.xi[0], ux.xi[2])) == 0.0);
    CHECK_THROWS_AS(universal_xi(17), numeric_error);
}

TEST_CASE("weyl operators: unitarity, adjoint, composition phase") {
    DFRCoordinates coords = build_coordinates(Matrix4d::Identity(), 1.0, 32);
    Vector4d k(0.4, -0.3, 0.6, 0.2), h(-0.5, 0.2, 0.3, -0.4);

    MatrixXcd W0 = weyl_operator(Vector4d::Zero(), coords);
    CHECK((W0 - MatrixXcd::Identity(W0.rows(), W0.cols())).cwiseAbs().maxCoeff() <= 1e-13);

    MatrixXcd Wk = weyl_operator(k, coords);
    CHECK((Wk * Wk.adjoint() - MatrixXcd::Identity(Wk.rows(), Wk.cols())).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK((Wk.adjoint() - weyl_operator(-k, coords)).cwiseAbs().maxCoeff() <= 1e-12);

    // composition: W(k) W(h) = e^{-(i/2) k theta h} W(k+h) on the safe block
    MatrixXcd lhs = Wk * weyl_operator(h, coords);
    MatrixXcd rhs = weyl_composition_phase(k, h, coords.theta()) * weyl_operator(k + h, coords);
    CHECK(coords.space.safe_block_max(MatrixXcd(lhs - rhs)) <= 1e-8);
}

TEST_CASE("weyl quantisation: plane-wave surrogate and hermiticity") {
    DFRCoordinates coords = build_coordinates(Matrix4d::Identity(), 1.0, 16);

    // single sharp coefficient peak -> the corresponding weyl operator
    const Vector4d k0(0.35, -0.15, 0.25, 0.05);
    KGrid kg{4.0, 8};
    const double dk = kg.extent / kg.points;
    auto peak = [&](const Vector4d& k) {
        return (k - k0).cwiseAbs().maxCoeff() < 0.5 * dk ? cplx(1.0, 0) : cplx(0, 0);
    };
    MatrixXcd Qp = weyl_quantize(peak, coords, kg);
    // the grid point nearest k0 carries the whole weight dk^4
    Vector4d ksnap;
    for (int i = 0; i < 4; ++i)
        ksnap(i) = -0.5 * kg.extent + (std::floor((k0(i) + 0.5 * kg.extent) / dk) + 0.5) * dk;
    MatrixXcd expected = std::pow(dk, 4) * weyl_operator(ksnap, coords);
    CHECK((Qp - expected).cwiseAbs().maxCoeff() <= 1e-12);

    // real symbol -> hermitian operator (to quadrature tolerance)
    star::GaussianSymbol f = star::GaussianSymbol::isotropic(4, 1.1, 0.8);
    MatrixXcd Qf = weyl_quantize(f, coords, KGrid{12.0, 12});
    CHECK((Qf - Qf.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * Qf.cwiseAbs().maxCoeff());
}

TEST_CASE("quantisation is a homomorphism onto the star product") {
    Rng rng(81);
    DFRCoordinates coords = build_coordinates(Matrix4d::Identity(), 1.0, 24);
    star::GaussianSymbol f = star::random_gaussian(4, rng, 1.15);
    star::GaussianSymbol g = star::random_gaussian(4, rng, 1.15);

    const KGrid kg{14.0, 24};
    MatrixXcd Qf = weyl_quantize(f, coords, kg);
    MatrixXcd Qg = weyl_quantize(g, coords, kg);
    star::GaussianSymbol fg = star::star_product(f, g, coords.theta());
    MatrixXcd Qfg = weyl_quantize(fg, coords, kg);

    const Eigen::ArrayXd mask = coords.space.safe_mask(8);
    MatrixXcd diff = Qf * Qg - Qfg;
    double num = 0, den = 0;
    for (long i = 0; i < diff.rows(); ++i)
        for (long j = 0; j < diff.cols(); ++j) {
            if (mask(i) == 0 || mask(j) == 0) continue;
            num += std::norm(diff(i, j));
            den += std::norm(Qfg(i, j));
        }
    CHECK(std::sqrt(num / den) <= 1e-4);
}

TEST_CASE("time/space classifier") {
    SUBCASE("printed solution (1,1,-1): conditions hold and residuals vanish") {
        ClassifyReport r = timespace_classify(1, 1, -1, 24);
        CHECK(r.paper_conditions);
        CHECK(r.residual <= 1e-10);
        CHECK(r.verified);
        CHECK_FALSE(r.discrepancy);
    }
    SUBCASE("abelian branch") {
        ClassifyReport r = timespace_classify(0, 0, 0, 16);
        CHECK(r.abelian);
        CHECK(r.verified);
        CHECK(r.residual == 0.0);
    }
    SUBCASE("(1,0,1): printed conditions fail but the measured residuals pass") {
        ClassifyReport r = timespace_classify(1, 0, 1, 32);
        CHECK_FALSE(r.paper_conditions);
        CHECK(r.residual <= 1e-10);
        CHECK(r.verified);
        CHECK(r.discrepancy);  // flagged, never silently resolved
    }
    SUBCASE("permuted branches construct representations too") {
        for (auto [a, b, c] : {std::array<double, 3>{0, 1, 0}, {0, 0, 1}, {0, 2, -1}}) {
            ClassifyReport r = timespace_classify(a, b, c, 24);
            CHECK(r.verified);
        }
    }
}

TEST_CASE("classifier sweep over a rational lattice") {
    SweepSummary s = classify_sweep(1, 1, 12);  // 26 nonzero lattice points
    CHECK(s.total == 26);
    CHECK(s.verified == s.total);  // representations exist everywhere on the lattice
    CHECK(s.discrepancies > 0);    // and mostly outside the printed conditions
    CHECK(s.worst_residual <= 1e-10);
}

TEST_CASE("universal xi matches the classifier target for (1,1,-1)") {
    UniversalXi ux = universal_xi(8);
    ClassifyReport r = timespace_classify(1, 1, -1, 8);
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            CHECK(ux.theta(mu, nu) == doctest::Approx(r.target[size_t(mu)][size_t(nu)]));
}
