#pragma once

#include "qst/oscillator.hpp"

namespace qst::loc {

using rep::MatrixXcd;
using rep::OscillatorSpace;
using rep::SpMat;
using rep::VectorXcd;

/// State on an OscillatorSpace: a unit vector or a density matrix.
class QuantumState {
public:
    static QuantumState vector(OscillatorSpace space, VectorXcd psi);
    static QuantumState density(OscillatorSpace space, MatrixXcd rho);

    /// Ground state |0...0>.
    static QuantumState vacuum(const OscillatorSpace& space);
    /// Displaced vacuum, one displacement amplitude per mode.
    static QuantumState coherent(const OscillatorSpace& space, const std::vector<cplx>& alpha);
    /// Squeezed vacuum exp(r/2 (a^2 - a^dag^2)) |0>, one parameter per mode.
    static QuantumState squeezed(const OscillatorSpace& space, const std::vector<double>& r);
    /// Normalised complex-gaussian random vector supported on the safe subspace.
    static QuantumState random_safe(const OscillatorSpace& space, Rng& rng, int cutoff = -1);

    const OscillatorSpace& space() const { return space_; }
    bool is_vector() const { return rho_.size() == 0; }
    const VectorXcd& psi() const { return psi_; }

    cplx expectation(const MatrixXcd& a) const;
    cplx expectation(const SpMat& a) const;

    /// Projection onto occupation < cutoff in every mode, renormalised.
    QuantumState projected(int cutoff = -1) const;

    /// Probability weight outside occupation < cutoff (cutoff < 0: n_safe).
    double leakage(int cutoff = -1) const;
    /// Largest occupation (over modes) carrying weight above tol.
    int max_occupation(double tol = 1e-14) const;

private:
    QuantumState(OscillatorSpace space, VectorXcd psi, MatrixXcd rho);
    OscillatorSpace space_;
    VectorXcd psi_;
    MatrixXcd rho_;
};

/// Delta_omega(A) = sqrt(omega(A^2) - omega(A)^2); input must be Hermitian.
double uncertainty(const QuantumState& omega, const MatrixXcd& a);
double uncertainty(const QuantumState& omega, const SpMat& a);

struct HeisenbergReport {
    double delta_a = 0;
    double delta_b = 0;
    double bound = 0;  ///< 1/2 |omega([A,B])|
    double slack = 0;  ///< delta_a * delta_b - bound
    bool pass = false;
};

/// Robertson inequality Delta(A) Delta(B) >= 1/2 |omega([A,B])|; an exact
/// operator statement, asserted up to 1e-10 * scale floating slack.
HeisenbergReport heisenberg_check(const QuantumState& omega, const MatrixXcd& a,
                                  const MatrixXcd& b);

}  // namespace qst::loc
