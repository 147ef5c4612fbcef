#pragma once

#include "qst/quantum_state.hpp"
#include "qst/rep.hpp"

namespace qst::loc {

/// n independent events with identified commutator tensor: the coordinates of
/// event j act on the j-th pair of modes of a 2n-mode space, all built from
/// the SAME sigma, so [q_j^mu, q_k^nu] = i lambda^2 sigma^{mu nu} delta_jk.
class EventSystem {
public:
    /// Dense-path cap n <= 2 (dimension levels^4); sparse ops stay valid to n <= 5.
    EventSystem(const Eigen::Matrix4d& lambda, double length_scale, int levels, int n);

    int events() const { return n_; }
    const OscillatorSpace& space() const { return space_; }
    double length_scale() const { return length_scale_; }
    Eigen::Matrix4d theta() const;

    const SpMat& q(int event, int mu) const;
    /// Separation q_j - q_k.
    SpMat separation(int j, int k, int mu) const;
    /// Barycentre (1/n) sum_j q_j.
    SpMat barycentre(int mu) const;

private:
    int n_;
    OscillatorSpace space_;
    Eigen::Matrix4d lambda_;
    double length_scale_;
    std::vector<std::array<SpMat, 4>> q_;
};

struct SeparationReport {
    double separation_residual = 0;   ///< [dq^mu, dq^nu] vs 2 i lambda^2 sigma^{mu nu}
    double barycentre_residual = 0;   ///< max | [qbar^mu, dq^nu] |
    double pair_independence = 0;     ///< max difference of commutators across pairs (j,k)
    double cross_event_commutator = 0;  ///< max | [q_j, q_k] |, j != k (exactly zero)
};

SeparationReport separation_and_barycenter(const EventSystem& ev);

/// Spectrum of sum_mu (dq^mu)^2 for two events. The operator conserves the
/// total occupation of each corresponding-mode pair as an exact matrix
/// identity, so blocks with pair occupation <= levels-2 carry the untruncated
/// eigenvalues 4 lambda^2 (m1 + m2 + 1); blocks beyond are corrupted by the
/// ladder cut and can dip below the true lower bound. `exact_sector` is the
/// dense solve restricted to the exact blocks; `full` (optional) is the whole
/// truncated matrix with its artifacts, for diagnosis.
struct SeparationSpectrum {
    Eigen::VectorXd exact_sector;
    Eigen::VectorXd full;           ///< empty unless requested
    int artifacts_below_bound = 0;  ///< full eigenvalues below min(exact_sector) - tol
};
SeparationSpectrum separation_distance_spectrum(const EventSystem& ev, bool compute_full = false);

struct VolumeProbe {
    long dim = 0;
    double hermitian_part_defect = 0;   ///< max | V_H - V_H^dag |
    double smallest_magnitude = 0;      ///< smallest |eigenvalue| estimate of V_H
    double largest_magnitude = 0;       ///< largest |eigenvalue| estimate of V_H
    double solver_residual = 0;         ///< ||V_H^2 v - theta v|| for the smallest Ritz pair
    int lanczos_iterations = 0;
};

/// Oriented 4-volume of five events,
/// V = eps_{mu nu rho sigma} (q2-q1)^mu (q3-q2)^nu (q4-q3)^rho (q5-q4)^sigma.
SpMat volume_operator(const EventSystem& ev);

/// Extremal-eigenvalue probe of the Hermitian part of V (Lanczos on V_H and
/// on V_H^2 with full reorthogonalisation). Qualitative: the coarse per-mode
/// truncation bounds what the gap estimate can certify.
VolumeProbe volume_gap_probe(const EventSystem& ev, int iterations = 200,
                             std::uint64_t seed = 4);

/// The same epsilon-contraction on commuting diagonal surrogates (classical
/// limit sanity): entrywise the classical signed 4-volume of the samples.
Eigen::VectorXcd classical_volume_diagonal(const std::vector<std::array<Eigen::Vector4d, 5>>& pts);

}  // namespace qst::loc
