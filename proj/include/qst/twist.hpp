#pragma once

#include "qst/star.hpp"

namespace qst::star {

/// Function of two slots, F(x, y) with x, y in R^d, sampled on the tensor
/// grid of a shared per-slot axis set. Row index = slot 1, column = slot 2.
class TwoSlotSymbol {
public:
    static constexpr std::size_t max_entries = std::size_t(1) << 24;

    TwoSlotSymbol(std::vector<Axis> axes, Domain domain, Eigen::MatrixXcd data);

    static TwoSlotSymbol outer(const GridSymbol& f, const GridSymbol& g);
    static TwoSlotSymbol random_bandlimited(std::vector<Axis> axes, Rng& rng, int band);

    int dim() const { return int(axes_.size()); }
    const std::vector<Axis>& axes() const { return axes_; }
    Domain domain() const { return domain_; }
    std::size_t slot_size() const { return std::size_t(data_.rows()); }
    const Eigen::MatrixXcd& data() const { return data_; }

    double frobenius() const { return data_.norm(); }
    TwoSlotSymbol operator-(const TwoSlotSymbol& o) const;

    /// Restriction to the diagonal F(x, x).
    GridSymbol diagonal() const;

private:
    std::vector<Axis> axes_;
    Domain domain_;
    Eigen::MatrixXcd data_;
};

/// Slot-wise forward/backward transforms (same conventions as the one-slot engine).
TwoSlotSymbol two_slot_fourier(const TwoSlotSymbol& F);
TwoSlotSymbol two_slot_inverse_fourier(const TwoSlotSymbol& Fk);

/// The twist as a two-slot Fourier multiplier: phases e^{-(i/2) h_mu sigma^{mu nu} k_nu}
/// on slot frequencies (h, k). A pure phase, inverted by direction = -1.
TwoSlotSymbol twist_multiplier(const std::vector<Axis>& axes, const MatrixXd& sigma);

/// F_sigma acting on position-domain two-slot data:
/// fft2 -> multiply twist^{direction} -> ifft2.
TwoSlotSymbol apply_twist(const TwoSlotSymbol& F, const MatrixXd& sigma, int direction);

/// gamma_2(Lambda) = gamma(Lambda) (x) gamma(Lambda): slot-wise pullback
/// F(Lambda^{-1} x, Lambda^{-1} y) by trigonometric interpolation.
TwoSlotSymbol two_slot_pullback(const TwoSlotSymbol& F, const MatrixXd& lambda);

/// Twisted Lorentz action F_sigma^{-1} . gamma_2(Lambda) . F_sigma.
TwoSlotSymbol twisted_action(const MatrixXd& lambda, const MatrixXd& sigma,
                             const TwoSlotSymbol& F);

/// The product map m~2 = m . F_sigma: twist, then restrict to the diagonal.
/// On outer(f, g) this is the twisted product f star_sigma g.
GridSymbol two_slot_star(const TwoSlotSymbol& F, const MatrixXd& sigma);

struct CoassociativityReport {
    double star_assoc_defect;  ///< relative defect of (f*g)*h vs f*(g*h), grid path
    double coassoc_defect;     ///< relative defect of the two iterated twisted coproduct actions
};

/// Compares the two iterations of the twisted infinitesimal coproduct action
/// on the three-slot tensor f (x) g (x) h: the three-slot twist is assembled
/// either as (twist slots 1,2) then (twist merged-12 against 3), or as
/// (twist slots 2,3) then (twist 1 against merged-23). With the symmetric
/// three-slot phase these coincide; omega is a Lorentz generator acting as
/// omega^mu_nu x^nu d_mu on every slot.
/// The star prerequisite runs at the inputs' resolution; the three-slot
/// tensor subsamples to three_slot_points per axis (a divisor of the input
/// resolution, capped so that the tensor fits the memory budget).
CoassociativityReport coassociativity_probe(const MatrixXd& sigma, const GridSymbol& f,
                                            const GridSymbol& g, const GridSymbol& h,
                                            const MatrixXd& omega, int three_slot_points = 8);

}  // namespace qst::star
