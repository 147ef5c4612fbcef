#pragma once

#include <array>
#include <functional>

#include "qst/gaussian.hpp"
#include "qst/oscillator.hpp"

namespace qst::rep {

using Eigen::Matrix4d;
using Eigen::Vector4d;

/// Truncated Schrodinger pair in the number basis: Hermitian P, Q with
/// [P,Q] = -i I exactly outside the (N-1, N-1) corner.
std::pair<MatrixXcd, MatrixXcd> schrodinger_pair(int levels);

/// The two-mode quadruple X^0 = P_1, X^1 = P_2, X^2 = Q_1, X^3 = Q_2 with
/// [X^mu, X^nu] = i S^{mu nu} I on the safe subspace.
struct BasicQuadruple {
    OscillatorSpace space;
    std::array<SpMat, 4> x;
};
BasicQuadruple build_X(int levels);

/// Coordinates q^mu = lambda Lambda^mu_nu X^nu. Lambda may be any real
/// matrix, not necessarily Lorentz or invertible; the realised commutators
/// are i lambda^2 (Lambda S Lambda^T)^{mu nu}.
struct DFRCoordinates {
    OscillatorSpace space;
    std::array<SpMat, 4> q;
    Matrix4d lambda_matrix;
    double length_scale;

    Matrix4d theta() const;
    /// max residual of [q^mu,q^nu] - i theta^{mu nu} I over the safe block.
    double commutator_residual() const;
};
DFRCoordinates build_coordinates(const Matrix4d& lambda, double length_scale, int levels);

/// Translation generators on four modes, with the matching four-mode X's:
/// [Pi^mu, Pi^nu] = 0 and [Pi^mu, X^nu] = -i g^{mu nu} I on the safe subspace.
struct TranslationGenerators {
    OscillatorSpace space;
    std::array<SpMat, 4> pi_lower;  ///< Pi_mu
    std::array<SpMat, 4> pi_upper;  ///< Pi^mu = g^{mu nu} Pi_nu
    std::array<SpMat, 4> x;
};
TranslationGenerators build_pi(int levels);

/// The universal time/space-commutative quadruple on three modes for
/// (a,b,c) = (1,1,-1): xi^0 = Q_2, xi^1 = P_1, xi^2 = Q_1,
/// xi^3 = P_1 + Q_1 + Q_3.
struct UniversalXi {
    OscillatorSpace space;
    std::array<SpMat, 4> xi;
    Matrix4d theta;
};
UniversalXi universal_xi(int levels);

/// exp(i k_mu q^mu), assembled mode-by-mode (k.q splits across the tensor
/// factors), unitary to machine precision.
MatrixXcd weyl_operator(const Vector4d& k, const DFRCoordinates& coords);

/// Phase of the composition law W(k) W(h) = phase * W(k+h) induced by the
/// commutators [q^mu,q^nu] = i theta^{mu nu}: phase = exp(-(i/2) k theta h).
cplx weyl_composition_phase(const Vector4d& k, const Vector4d& h, const Matrix4d& theta);

/// Uniform quadrature grid for the quantisation, axes in the oscillator
/// frame (the k' = Lambda^T k variables, in which the Weyl factor splits
/// across the two modes).
struct KGrid {
    double extent;  ///< per-axis box [-extent/2, extent/2)
    int points;     ///< per-axis count
};

/// Weyl quantisation sum_k fcheck(k) W(k) dk by the factorised quadrature
/// over the oscillator frame; Lambda must be invertible.
MatrixXcd weyl_quantize(const std::function<cplx(const Vector4d&)>& fourier_coeff,
                        const DFRCoordinates& coords, const KGrid& kgrid);

/// Quantisation of a closed-form symbol (through its exact transform).
MatrixXcd weyl_quantize(const star::GaussianSymbol& f, const DFRCoordinates& coords,
                        const KGrid& kgrid);

// ---------------------------------------------------------------------------
// time/space-commutative classifier

/// Relations [x^0, x^j] = 0, [x^1,x^2] = -i a, [x^1,x^3] = -i b,
/// [x^2,x^3] = -i c. The classifier constructs the candidate irreducible
/// representation by the Schur reduction (x^0 scalar; the central combination
/// c x^1 - b x^2 + a x^3 set to a scalar; the remaining pair realised by a
/// Schrodinger pair) and measures all six commutators against their targets.
/// The verdict follows the measured residuals alone.
struct ClassifyReport {
    double a = 0, b = 0, c = 0;
    bool abelian = false;
    bool paper_conditions = false;   ///< the printed consistency conditions c = -ab and c = -b
    double residual = 0;             ///< max safe-block residual over all six commutators
    double tolerance = 0;
    bool verified = false;           ///< residual <= tolerance
    bool discrepancy = false;        ///< verified differs from paper_conditions
    std::array<std::array<double, 4>, 4> target{};    ///< theta^{mu nu}
    std::array<std::array<double, 4>, 4> measured{};  ///< Im of the realised commutators
    std::string note;
};

ClassifyReport timespace_classify(double a, double b, double c, int levels);

/// Residual-measured verdicts over the rational lattice
/// {(a,b,c) = (i,j,k)/den : |i|,|j|,|k| <= span}, skipping (0,0,0).
struct SweepSummary {
    int total = 0;
    int verified = 0;
    int paper_condition_holds = 0;
    int discrepancies = 0;  ///< verified but outside the printed conditions
    double worst_residual = 0;
};
SweepSummary classify_sweep(int span, int den, int levels);

}  // namespace qst::rep
