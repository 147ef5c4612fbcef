#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qst/core.hpp"
#include "qst/localisation.hpp"

using namespace qst;
using namespace qst::loc;
using namespace qst::rep;
using Eigen::Matrix4d;

namespace {

DFRCoordinates standard_coords(int levels, double lambda = 1.0) {
    return build_coordinates(Matrix4d::Identity(), lambda, levels);
}

}  // namespace

TEST_CASE("uncertainty: eigenvector has zero spread; ground state saturates heisenberg") {
    const int N = 16;
    OscillatorSpace space(1, N);
    auto [P, Q] = schrodinger_pair(N);

    // eigenvector of the number operator (diagonal): basis state
    MatrixXcd number = MatrixXcd::Zero(N, N);
    for (int n = 0; n < N; ++n) number(n, n) = n;
    VectorXcd e3 = VectorXcd::Zero(N);
    e3(3) = 1.0;
    QuantumState st = QuantumState::vector(space, e3);
    CHECK(uncertainty(st, number) <= 1e-12);

    QuantumState vac = QuantumState::vacuum(space);
    HeisenbergReport hr = heisenberg_check(vac, P, Q);
    CHECK(hr.delta_a == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(hr.delta_b == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(hr.bound == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(hr.slack) <= 1e-10);
    CHECK(hr.pass);
}

TEST_CASE("heisenberg inequality holds on random states (operator certainty)") {
    const int N = 16;
    OscillatorSpace space(1, N, N);  // no safe restriction: the inequality is exact anyway
    auto [P, Q] = schrodinger_pair(N);
    Rng rng(91);
    for (int s = 0; s < 10000; ++s) {
        QuantumState st = QuantumState::random_safe(space, rng, N);
        HeisenbergReport hr = heisenberg_check(st, P, Q);
        REQUIRE(hr.pass);
    }
}

TEST_CASE("non-hermitian input is rejected") {
    OscillatorSpace space(1, 8);
    QuantumState vac = QuantumState::vacuum(space);
    MatrixXcd bad = ladder(8);
    CHECK_THROWS_AS(uncertainty(vac, bad), validation_error);
}

TEST_CASE("stur: coherent vacuum gives 3/2 on both sides") {
    DFRCoordinates coords = standard_coords(16);
    SturReport r = stur_check(QuantumState::vacuum(coords.space), coords);
    CHECK(r.lhs_time_space == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.lhs_space_space == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.pass);

    // displaced vacuum: same variances (means shift only); deeper truncation
    // so the displacement tails stay far inside the safe subspace
    DFRCoordinates coords32 = standard_coords(32);
    QuantumState disp =
        QuantumState::coherent(coords32.space, {cplx(0.9, 0.3), cplx(-0.5, 0.7)});
    SturReport rd = stur_check(disp, coords32);
    CHECK(rd.lhs_time_space == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(rd.lhs_space_space == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(rd.pass);
}

TEST_CASE("stur: squeezed family stays above the bound") {
    DFRCoordinates coords = standard_coords(32);
    double min_lhs = 1e300;
    for (double r : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        for (auto rs : {std::pair{r, r}, {r, -r}, {-r, r}}) {
            QuantumState st =
                QuantumState::squeezed(coords.space, {rs.first, rs.second}).projected();
            SturReport rep = stur_check(st, coords, 1e-12);
            min_lhs = std::min(min_lhs, std::min(rep.lhs_time_space, rep.lhs_space_space));
            CHECK(rep.pass);
        }
    }
    CHECK(min_lhs >= 1.0 - 1e-6);
}

TEST_CASE("stur: monte-carlo scan has zero violations") {
    DFRCoordinates coords = standard_coords(16);
    SturScanReport scan = stur_scan(coords, 10000, 2024);
    CHECK(scan.samples == 10000);
    CHECK(scan.violations == 0);
    CHECK(scan.worst_margin >= 0.0);
}

TEST_CASE("stur rejects states leaking outside the safe subspace") {
    DFRCoordinates coords = standard_coords(8);
    VectorXcd top = VectorXcd::Zero(coords.space.dim());
    top(coords.space.dim() - 1) = 1.0;  // occupation (7,7)
    CHECK_THROWS_AS(stur_check(QuantumState::vector(coords.space, top), coords),
                    validation_error);
}

TEST_CASE("optimal localization: vacuum attains 2 lambda^2, squeezing increases it") {
    DFRCoordinates coords = standard_coords(48);
    LocalizationScan scan = optimal_localization_scan(coords);
    CHECK(scan.bound == doctest::Approx(2.0));
    CHECK(scan.minimum == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(scan.attained_by_vacuum);
    CHECK(scan.coherent_spread <= 1e-8);           // displacement shifts means only
    CHECK(scan.squeezed_minimum > scan.minimum);   // strictly increased
}

TEST_CASE("distance squared operator: exact bottom spectrum") {
    DFRCoordinates coords = standard_coords(16);
    Spectrum sp = distance_sq_operator(coords);
    CHECK(std::abs(sp.eigenvalues(0) - 2.0) <= 1e-10 * 2.0);

    // second distinct level 4 lambda^2 with multiplicity 2
    CHECK(sp.eigenvalues(1) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(sp.eigenvalues(2) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(sp.eigenvalues(3) == doctest::Approx(6.0).epsilon(1e-10));

    // lambda scaling
    DFRCoordinates coords2 = standard_coords(16, 2.0);
    Spectrum sp2 = distance_sq_operator(coords2);
    CHECK(std::abs(sp2.eigenvalues(0) - 4.0 * sp.eigenvalues(0)) <= 1e-9);

    // rotation invariance of the low spectrum
    core::PoincareTransform R = core::random_rotation(17);
    DFRCoordinates rotated = build_coordinates(R.lambda(), 1.0, 16);
    Spectrum spr = distance_sq_operator(rotated);
    for (int i = 0; i < 20; ++i)
        CHECK(std::abs(spr.eigenvalues(i) - sp.eigenvalues(i)) <= 1e-9);
}
