#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>

#include "qst/common.hpp"

namespace qst::core {

using Eigen::Matrix4d;
using Eigen::Vector3d;
using Eigen::Vector4d;

/// Minkowski metric diag(+,-,-,-). g*g = identity.
const Matrix4d& minkowski_metric();

/// Antisymmetric 4x4 tensor with upper indices, sigma^{mu nu}.
///
/// Construction antisymmetrises exactly (sigma <- (sigma - sigma^T)/2) after
/// rejecting inputs whose antisymmetry defect exceeds an absolute tolerance,
/// so stored values satisfy sigma^{mu nu} == -sigma^{nu mu} entrywise.
class SigmaPoint {
public:
    SigmaPoint() : m_(Matrix4d::Zero()) {}
    explicit SigmaPoint(const Matrix4d& m, double asym_tol = 1e-9);

    const Matrix4d& matrix() const { return m_; }
    double operator()(int mu, int nu) const { return m_(mu, nu); }

    /// Electric part e_j = sigma^{0j}.
    Vector3d electric() const;
    /// Magnetic part m_i = sigma^{jk}, (i,j,k) cyclic.
    Vector3d magnetic() const;

    static SigmaPoint from_em(const Vector3d& e, const Vector3d& m);

private:
    Matrix4d m_;
};

/// Antisymmetric commutator tensor theta = lambda^2 * sigma, lambda a length.
class ThetaMatrix {
public:
    ThetaMatrix(double lambda, const SigmaPoint& sigma);

    double lambda() const { return lambda_; }
    const SigmaPoint& sigma() const { return sigma_; }
    Matrix4d matrix() const { return lambda_ * lambda_ * sigma_.matrix(); }

private:
    double lambda_;
    SigmaPoint sigma_;
};

/// The standard symplectic matrix S: rows (0,0,-1,0),(0,0,0,-1),(1,0,0,0),(0,1,0,0).
SigmaPoint sigma_standard();

/// The dilation-covariant point with e=(1,0,0), m=(0,1,0); both invariants vanish.
SigmaPoint sigma_conf_standard();

/// Hodge dual carries lower indices; kept as a distinct type to avoid mixing
/// index positions. Orientation convention: epsilon_{0123} = +1.
struct CovariantSigma {
    Matrix4d m;
};

/// (*sigma)_{mu nu} = 1/2 epsilon_{mu nu rho tau} sigma^{rho tau}.
CovariantSigma hodge_dual(const SigmaPoint& sigma);

/// Raise both indices with the metric and wrap as a SigmaPoint.
SigmaPoint raise_indices(const CovariantSigma& low);

/// sigma_{mu nu} sigma^{mu nu}; equals 2(|m|^2 - |e|^2).
double invariant_1(const SigmaPoint& sigma);

/// sigma^{mu nu} (*sigma)_{mu nu}; equals 4 (e . m) with epsilon_{0123} = +1.
/// Only the square is convention-free.
double invariant_2(const SigmaPoint& sigma);

/// Poincare transformation (Lambda, a). Lambda must preserve the metric:
/// ||Lambda^T g Lambda - g||_max <= metric_tol, else validation_error.
class PoincareTransform {
public:
    static constexpr double metric_tol = 1e-8;

    explicit PoincareTransform(const Matrix4d& lambda, const Vector4d& a = Vector4d::Zero());

    const Matrix4d& lambda() const { return lambda_; }
    const Vector4d& translation() const { return a_; }
    double det() const { return det_; }
    bool orthochronous() const { return lambda_(0, 0) > 0; }

    static PoincareTransform identity();
    PoincareTransform inverse() const;
    /// Composition: (*this) after other, i.e. L1 * L2 maps x to L1(L2(x)).
    PoincareTransform operator*(const PoincareTransform& other) const;

    Vector4d apply(const Vector4d& x) const { return lambda_ * x + a_; }

private:
    Matrix4d lambda_;
    Vector4d a_;
    double det_;
};

/// sigma' = Lambda sigma Lambda^T (index form Lambda^mu_mu' Lambda^nu_nu' sigma^{mu'nu'}).
SigmaPoint lorentz_act_sigma(const PoincareTransform& L, const SigmaPoint& sigma);

enum class Orbit {
    Sigma,      ///< |e| = |m|, e.m = +-1 (the full-orbit characterisation)
    Sigma1,     ///< rotation orbit of S: m = -e, |e| = 1
    SigmaConf,  ///< |e| = |m| != 0, e perpendicular to m
};

Orbit orbit_from_string(const std::string& name);

bool is_in_orbit(const SigmaPoint& sigma, Orbit orbit, double tol = 1e-9);

/// Uniform random rotation (Haar on SO(3), quaternion method), embedded as a
/// spatial 4x4 Lorentz matrix.
PoincareTransform random_rotation(std::uint64_t seed);

/// Deterministic random Lorentz transform: uniform rotation composed with a
/// z-boost of rapidity uniform in [0, rapidity_max].
PoincareTransform random_lorentz(std::uint64_t seed, double rapidity_max);

/// Boost of given rapidity along a (not necessarily unit) spatial direction.
Matrix4d boost_matrix(double rapidity, const Vector3d& direction);

}  // namespace qst::core
