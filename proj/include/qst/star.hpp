#pragma once

#include "qst/gaussian.hpp"
#include "qst/grid.hpp"

namespace qst::star {

/// Twisted convolution on a common frequency grid:
/// (fk x~ gk)(k) = integral dh fk(h) gk(k-h) e^{-(i/2) h_mu theta^{mu nu} k_nu},
/// trapezoid quadrature; contributions with k-h outside the band are dropped.
GridSymbol twisted_convolution(const GridSymbol& fk, const GridSymbol& gk, const MatrixXd& theta);

/// Twisted product on the grid, reduced one-transform form
///   (f star g)(x) = integral dh fcheck(h) e^{i h.x} g(x^nu - 1/2 h_mu theta^{mu nu})
/// with the shifted g evaluated spectrally. Algebraically identical to the
/// double Fourier integral; cross-validated against the
/// fourier -> twisted_convolution -> inverse_fourier reference path in tests.
GridSymbol star_product(const GridSymbol& f, const GridSymbol& g, const MatrixXd& theta);

/// Moyal expansion truncated at `order`, via pointwise products of spectral
/// derivatives; local at grid nodes at every order, unlike the full product.
GridSymbol moyal_product(const GridSymbol& f, const GridSymbol& g, const MatrixXd& theta,
                         int order);

struct LocalityReport {
    double moyal_max = 0;  ///< max |truncated Moyal product|
    double star_max = 0;   ///< max |twisted product|
    double scale = 0;      ///< ||f||_inf * ||g||_inf
};

/// Contrasts the locality of the truncated Moyal expansion with the
/// nonlocality of the integral twisted product on disjointly supported
/// inputs. Overlapping numerical supports are rejected.
LocalityReport locality_probe(const GridSymbol& f, const GridSymbol& g, const MatrixXd& theta,
                              int order, double support_tol = 1e-12);

/// f(Lambda^{-1}(x-a)) by trigonometric interpolation. Lambda must preserve
/// the d-dimensional Minkowski metric diag(+,-,...,-); boosts are capped at
/// rapidity 1 (operator norm <= e) on the grid path.
GridSymbol pullback(const GridSymbol& f, const MatrixXd& lambda, const VectorXd& a);

/// Aliasing bound of the interpolation: boundary ratio of the spectrum.
double pullback_aliasing_bound(const GridSymbol& f);

struct CovarianceDefectReport {
    double transformed;  ///< || f' star_{s'} g' - (f star_s g)' || / || f star_s g ||
    double fixed;        ///< same with the untransformed sigma (noncovariance witness)
};

/// Exact-path (Gaussian) check of the covariance identity
/// (f' star_{sigma'} g')(x) = (f star_sigma g)'(x), sigma' = Lambda sigma Lambda^T.
CovarianceDefectReport covariance_defect(const GaussianSymbol& f, const GaussianSymbol& g,
                                         const MatrixXd& sigma, const MatrixXd& lambda,
                                         const VectorXd& a, std::uint64_t probe_seed = 99);

/// d-dimensional Minkowski metric diag(+,-,...,-).
MatrixXd minkowski(int dim);

/// 2d boost [[cosh, sinh],[sinh, cosh]] of the given rapidity.
MatrixXd boost2(double rapidity);

/// Metric-preservation defect of lambda w.r.t. minkowski(d).
double lorentz_defect(const MatrixXd& lambda);

}  // namespace qst::star
