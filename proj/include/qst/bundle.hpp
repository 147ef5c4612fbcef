#pragma once

#include <optional>

#include "qst/core.hpp"
#include "qst/gaussian.hpp"
#include "qst/quantum_state.hpp"
#include "qst/rep.hpp"

namespace qst::bundle {

using core::PoincareTransform;
using core::SigmaPoint;
using Eigen::Matrix4d;
using Eigen::Vector4d;

/// One sampled base point: sigma, its sampling weight, and a Lorentz matrix
/// generating it from the standard matrix (sigma = Lambda S Lambda^T), kept
/// so the fibre representation can be rebuilt on demand.
struct SamplePoint {
    SigmaPoint sigma;
    double weight = 1.0;
    Matrix4d generator = Matrix4d::Identity();
};

/// Finite sample of the base manifold; every point must pass the membership
/// test of the declared orbit.
class SigmaSample {
public:
    SigmaSample(core::Orbit orbit, std::vector<SamplePoint> points, double tol = 1e-9);

    /// Rotation images of the standard matrix (inside the optimal-localisation
    /// sub-orbit), uniform weights.
    static SigmaSample rotations(int count, std::uint64_t seed);
    /// Boost-and-rotation images of the standard matrix (full orbit sample).
    static SigmaSample boosts(int count, std::uint64_t seed, double rapidity_max);
    static SigmaSample single(const SigmaPoint& sigma, const Matrix4d& generator,
                              core::Orbit orbit);

    core::Orbit orbit() const { return orbit_; }
    int size() const { return int(points_.size()); }
    const SamplePoint& point(int i) const { return points_[size_t(i)]; }

    /// Weights scaled to sum to one (for use as a state measure).
    std::vector<double> normalized_weights() const;

    bool compatible(const SigmaSample& other, double tol = 1e-12) const;

private:
    core::Orbit orbit_;
    std::vector<SamplePoint> points_;
};

/// Fibre value over one sigma: a finite sum of Gaussian symbols, or a
/// constant (the finite-sample surrogate of a central multiplier).
class Fiber {
public:
    static Fiber constant(cplx value);
    static Fiber gaussian(star::GaussianSymbol g);
    static Fiber sum(std::vector<star::GaussianSymbol> terms);

    bool is_constant() const { return !terms_.has_value(); }
    cplx constant_value() const;
    const std::vector<star::GaussianSymbol>& terms() const;

    Fiber conj() const;
    Fiber scaled(cplx factor) const;
    cplx evaluate(const Vector4d& x) const;
    /// L2 norm squared of the fibre (not defined for constants).
    double norm_sq() const;

private:
    std::optional<std::vector<star::GaussianSymbol>> terms_;
    cplx constant_ = 0;
};

/// Symbol on the bundle: one fibre per sampled sigma.
class GeneralizedSymbol {
public:
    GeneralizedSymbol(SigmaSample sample, std::vector<Fiber> fibers);
    static GeneralizedSymbol uniform(const SigmaSample& sample, const Fiber& fiber);

    const SigmaSample& sample() const { return sample_; }
    const Fiber& fiber(int i) const { return fibers_[size_t(i)]; }

    GeneralizedSymbol conj() const;

private:
    SigmaSample sample_;
    std::vector<Fiber> fibers_;
};

/// Fibrewise product: (f star g)(sigma; .) = f(sigma;.) star_sigma g(sigma;.)
/// with theta = length_scale^2 sigma on each fibre.
GeneralizedSymbol fiberwise_star(const GeneralizedSymbol& f, const GeneralizedSymbol& g,
                                 double length_scale = 1.0);

/// Poincare action (gamma(L) f)(sigma'; x') = det(Lambda) f(sigma; x) on the
/// pushed-forward sample. Constants pick up the det factor only.
GeneralizedSymbol poincare_action(const PoincareTransform& L, const GeneralizedSymbol& f);

/// Sharp-time conditional expectation per fibre:
/// integral dx f(sigma; x) delta(x^0 - t), exact on the Gaussian class.
std::vector<cplx> conditional_expectation(const GeneralizedSymbol& f, double t);

/// Exact time slice of one Gaussian term (integral over the spatial block).
cplx gaussian_time_slice(const star::GaussianSymbol& g, double t);

/// State on the bundle: a probability weight and a fibre vector state per
/// sampled sigma, with the fibre coordinates built from the sample generators.
class BundleState {
public:
    BundleState(const SigmaSample& sample, int levels, double length_scale,
                std::vector<loc::QuantumState> states);
    /// Fibrewise oscillator vacuum.
    static BundleState vacuum(const SigmaSample& sample, int levels, double length_scale);

    const SigmaSample& sample() const { return sample_; }
    double length_scale() const { return length_scale_; }
    const loc::QuantumState& state(int i) const { return states_[size_t(i)]; }
    const rep::DFRCoordinates& coords(int i) const { return coords_[size_t(i)]; }

private:
    SigmaSample sample_;
    double length_scale_;
    std::vector<loc::QuantumState> states_;
    std::vector<rep::DFRCoordinates> coords_;
};

/// omega(f) = sum_sigma w_sigma <psi_sigma| Q_sigma(f(sigma)) |psi_sigma>,
/// quantising each fibre over its own coordinates. Constant fibres contribute
/// w_sigma * value exactly.
cplx evaluate_state(const BundleState& omega, const GeneralizedSymbol& f,
                    const rep::KGrid& kgrid);

struct NegativityWitness {
    bool found = false;
    int sigma_index = -1;
    Vector4d point = Vector4d::Zero();
    double value = 0;  ///< most negative Re (fbar star f)(sigma; x) seen
};

/// Scans (fbar star f)(sigma; x) over the sample and a point grid for a
/// strictly negative real part (evaluation at a sharp point is not positive).
NegativityWitness sharp_point_negativity(const GeneralizedSymbol& f, double length_scale,
                                         double box = 3.0, int points_per_axis = 7);

}  // namespace qst::bundle
