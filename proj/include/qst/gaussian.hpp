#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "qst/common.hpp"
#include "qst/grid.hpp"

namespace qst::star {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Closed-form symbol c * exp(-1/2 x^T A x + b^T x) with A complex symmetric
/// and Re(A) positive definite. Re(A) > 0 keeps every eigenvalue of A (and of
/// any Schur complement appearing below) in the open right half-plane, so
/// principal logarithms are unambiguous and the Gaussian calculus is
/// branch-safe.
class GaussianSymbol {
public:
    GaussianSymbol(cplx amplitude, MatrixXcd quadratic_form, VectorXcd linear_term);

    int dim() const { return int(b_.size()); }
    cplx amplitude() const { return c_; }
    const MatrixXcd& quadratic_form() const { return A_; }
    const VectorXcd& linear_term() const { return b_; }

    /// Isotropic e^{-|x|^2/(2 width^2)} scaled by amplitude.
    static GaussianSymbol isotropic(int dim, double width, cplx amplitude = 1.0);

    cplx evaluate(const VectorXd& x) const;
    GaussianSymbol conj() const;
    GaussianSymbol scaled(cplx factor) const;
    GaussianSymbol pointwise(const GaussianSymbol& o) const;
    /// f(x - a)
    GaussianSymbol translated(const VectorXd& a) const;

    /// Centre and covariance of |f| (from the real parts).
    VectorXd centre() const;
    MatrixXd abs_covariance() const;

    /// Samples onto a position grid.
    GridSymbol to_grid(std::vector<Axis> axes) const;

private:
    cplx c_;
    MatrixXcd A_;
    VectorXcd b_;
};

/// Forward Fourier transform, (2*pi)^{-d} convention; exact on Gaussians.
GaussianSymbol fourier(const GaussianSymbol& f);
GaussianSymbol inverse_fourier(const GaussianSymbol& fk);

/// Exact L2 pairing integral conj(u) v dx.
cplx l2_inner(const GaussianSymbol& u, const GaussianSymbol& v);
double l2_norm(const GaussianSymbol& u);

/// Twisted product of Gaussians in closed form (completing the square in the
/// twisted convolution). Throws numeric_error if the result loses
/// Re-positivity (possible for large theta * bandwidth).
GaussianSymbol star_product(const GaussianSymbol& f, const GaussianSymbol& g,
                            const MatrixXd& theta);

/// f(Lambda^{-1}(x - a)), exact.
GaussianSymbol pullback(const GaussianSymbol& f, const MatrixXd& lambda, const VectorXd& a);

/// Gaussian with a polynomial prefactor: (sum_alpha p_alpha x^alpha) * base.
/// Closed under derivatives and pointwise products; carries the exact
/// derivative calculus of the Gaussian class.
class PolyGaussian {
public:
    PolyGaussian(std::map<std::vector<unsigned>, cplx> poly, GaussianSymbol base);
    explicit PolyGaussian(const GaussianSymbol& base);

    int dim() const { return base_.dim(); }
    const GaussianSymbol& base() const { return base_; }
    const std::map<std::vector<unsigned>, cplx>& poly() const { return poly_; }

    cplx evaluate(const VectorXd& x) const;
    PolyGaussian derivative(int mu) const;
    PolyGaussian pointwise(const PolyGaussian& o) const;
    PolyGaussian scaled(cplx factor) const;

private:
    std::map<std::vector<unsigned>, cplx> poly_;
    GaussianSymbol base_;
};

/// d_mu f as an affine-prefactor Gaussian, exact.
PolyGaussian derivative(const GaussianSymbol& f, int mu);

/// Exact star products with one affine-prefactor factor, obtained by
/// differentiating the closed-form star parameters with respect to the
/// linear term of that factor. Prefactor degree of lin must be <= 1.
PolyGaussian star_product(const PolyGaussian& lin, const GaussianSymbol& g, const MatrixXd& theta);
PolyGaussian star_product(const GaussianSymbol& f, const PolyGaussian& lin, const MatrixXd& theta);

/// Truncated Moyal sum for Gaussian factors: sum_{j<=order} (i/2)^j/j!
/// m((theta^{mu nu} d_mu (x) d_nu)^j f (x) g), each term exact.
std::vector<PolyGaussian> moyal_product(const GaussianSymbol& f, const GaussianSymbol& g,
                                        const MatrixXd& theta, int order);

cplx evaluate_sum(const std::vector<PolyGaussian>& terms, const VectorXd& x);

/// Deterministic relative L2 seminorm of (u - v) on a probe cloud drawn from
/// the envelope of ref. Differences are formed pointwise, so defects far
/// below the closed-form norm's cancellation floor remain resolvable.
struct ProbeCloud {
    explicit ProbeCloud(const GaussianSymbol& ref, std::uint64_t seed = 2024, int points = 512);
    std::vector<VectorXd> points;

    template <typename F, typename G>
    double rel_error(const F& u, const G& v) const {
        double num = 0, den = 0;
        for (const VectorXd& x : points) {
            num += std::norm(u(x) - v(x));
            den += std::norm(u(x));
        }
        if (den == 0) return num == 0 ? 0 : 1e300;
        return std::sqrt(num / den);
    }
};

/// Random Gaussian symbol with moderate complex parameters (for tests/CLI).
GaussianSymbol random_gaussian(int dim, Rng& rng, double spread = 1.0);

/// (1/2) log det A by principal logs of the eigenvalues; requires Re(A) > 0
/// so that all eigenvalues sit in the open right half-plane.
cplx half_log_det(const MatrixXcd& a);

}  // namespace qst::star
