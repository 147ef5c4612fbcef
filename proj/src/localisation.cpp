#include "qst/localisation.hpp"

#include <cmath>

namespace qst::loc {

SturReport stur_check(const QuantumState& omega, const DFRCoordinates& coords, double leak_tol) {
    if (omega.leakage() > leak_tol)
        throw validation_error("stur_check: state leaks outside the safe subspace (" +
                               std::to_string(omega.leakage()) + ")");
    SturReport rep;
    for (int mu = 0; mu < 4; ++mu) rep.dq[size_t(mu)] = uncertainty(omega, coords.q[size_t(mu)]);
    rep.lhs_time_space = rep.dq[0] * (rep.dq[1] + rep.dq[2] + rep.dq[3]);
    rep.lhs_space_space = rep.dq[1] * rep.dq[2] + rep.dq[1] * rep.dq[3] + rep.dq[2] * rep.dq[3];
    const double l2 = coords.length_scale * coords.length_scale;
    rep.bound = l2;
    rep.margin = std::min(rep.lhs_time_space, rep.lhs_space_space) - l2;
    rep.pass = rep.lhs_time_space >= l2 * (1 - 1e-6) && rep.lhs_space_space >= l2 * (1 - 1e-6);
    return rep;
}

SturScanReport stur_scan(const DFRCoordinates& coords, int samples, std::uint64_t seed) {
    SturScanReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.worst_margin = 1e300;
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        QuantumState omega = QuantumState::random_safe(coords.space, rng);
        SturReport r = stur_check(omega, coords);
        rep.worst_margin = std::min(rep.worst_margin, r.margin);
        if (!r.pass) ++rep.violations;
    }
    return rep;
}

namespace {

double variance_sum(const QuantumState& omega, const DFRCoordinates& coords) {
    double s = 0;
    for (int mu = 0; mu < 4; ++mu) {
        const double d = uncertainty(omega, coords.q[size_t(mu)]);
        s += d * d;
    }
    return s;
}

}  // namespace

LocalizationScan optimal_localization_scan(const DFRCoordinates& coords, int alpha_points,
                                           double alpha_max, const std::vector<double>& squeeze) {
    LocalizationScan scan;
    const double l2 = coords.length_scale * coords.length_scale;
    scan.bound = 2.0 * l2;

    const double vacuum_value = variance_sum(QuantumState::vacuum(coords.space), coords);
    scan.minimum = vacuum_value;
    double coh_min = vacuum_value, coh_max = vacuum_value;

    for (int i = 0; i <= alpha_points; ++i)
        for (int j = 0; j <= alpha_points; ++j)
            for (double phase : {0.0, pi / 3, 3 * pi / 4}) {
                const cplx a1 = std::polar(alpha_max * i / alpha_points, phase);
                const cplx a2 = std::polar(alpha_max * j / alpha_points, 2 * phase + 0.4);
                const double v =
                    variance_sum(QuantumState::coherent(coords.space, {a1, a2}), coords);
                scan.minimum = std::min(scan.minimum, v);
                coh_min = std::min(coh_min, v);
                coh_max = std::max(coh_max, v);
            }
    scan.coherent_spread = coh_max - coh_min;

    scan.squeezed_minimum = 1e300;
    for (double r : squeeze) {
        for (auto rs : {std::pair{r, r}, {r, 0.0}, {-r, r}}) {
            const double v = variance_sum(
                QuantumState::squeezed(coords.space, {rs.first, rs.second}), coords);
            scan.squeezed_minimum = std::min(scan.squeezed_minimum, v);
        }
    }
    scan.attained_by_vacuum = std::abs(vacuum_value - scan.minimum) <= 1e-12 &&
                              std::abs(scan.minimum - scan.bound) <= 1e-6 * scan.bound;
    return scan;
}

Spectrum distance_sq_operator(const DFRCoordinates& coords) {
    SpMat acc(coords.space.dim(), coords.space.dim());
    for (int mu = 0; mu < 4; ++mu)
        acc = SpMat(acc + SpMat(coords.q[size_t(mu)] * coords.q[size_t(mu)]));
    Spectrum out;
    out.op = MatrixXcd(acc);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(out.op, Eigen::EigenvaluesOnly);
    out.eigenvalues = es.eigenvalues();
    return out;
}

}  // namespace qst::loc
