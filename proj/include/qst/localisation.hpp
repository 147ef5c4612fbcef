#pragma once

#include "qst/quantum_state.hpp"
#include "qst/rep.hpp"

namespace qst::loc {

using rep::DFRCoordinates;

struct SturReport {
    double lhs_time_space = 0;   ///< dq0 (dq1 + dq2 + dq3)
    double lhs_space_space = 0;  ///< dq1 dq2 + dq1 dq3 + dq2 dq3
    double bound = 0;            ///< lambda^2
    double margin = 0;           ///< min(lhs) - bound
    std::array<double, 4> dq{};
    bool pass = false;
};

/// Checks the spacetime uncertainty relations on a state supported in the
/// safe subspace (where the truncated commutators are exact). States leaking
/// outside it are rejected: their variances say nothing about the relations.
SturReport stur_check(const QuantumState& omega, const DFRCoordinates& coords,
                      double leak_tol = 1e-10);

struct SturScanReport {
    int samples = 0;
    int violations = 0;
    double worst_margin = 0;  ///< most negative margin seen (>= 0 when clean)
    std::uint64_t seed = 0;
};

/// Monte-Carlo scan over random safe-subspace states.
SturScanReport stur_scan(const DFRCoordinates& coords, int samples, std::uint64_t seed);

struct LocalizationScan {
    double minimum = 0;           ///< min over the scanned family of sum_mu dq_mu^2
    double bound = 0;             ///< 2 lambda^2
    double coherent_spread = 0;   ///< max - min over displaced states (means shift only)
    double squeezed_minimum = 0;  ///< min over the squeezed perturbations (r != 0)
    bool attained_by_vacuum = false;
};

/// Scans coherent states on an amplitude grid plus squeezed perturbations;
/// the sum of the four variances is minimised by the (displaced) vacuum at
/// the value 2 lambda^2, and squeezing strictly increases it.
LocalizationScan optimal_localization_scan(const DFRCoordinates& coords, int alpha_points = 4,
                                           double alpha_max = 1.2,
                                           const std::vector<double>& squeeze = {0.25, 0.5, 1.0});

struct Spectrum {
    Eigen::VectorXd eigenvalues;  ///< ascending
    MatrixXcd op;                 ///< the operator (dense)
};

/// sum_mu (q^mu)^2; for sigma in the rotation orbit the low spectrum is
/// 2 lambda^2 (n1 + n2 + 1), truncation-exact at the bottom.
Spectrum distance_sq_operator(const DFRCoordinates& coords);

}  // namespace qst::loc
