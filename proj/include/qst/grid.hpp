#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "qst/common.hpp"

namespace qst::star {

/// One axis of the sampling box: x in [-extent/2, extent/2), spacing extent/points.
/// The same axis describes the dual grid k = (2*pi/extent) * m, m in [-points/2, points/2).
struct Axis {
    double extent;
    int points;

    double dx() const { return extent / points; }
    double dk() const { return 2.0 * pi / extent; }
    double x(int j) const { return -0.5 * extent + j * dx(); }
    double k(int t) const { return dk() * (t - points / 2); }
};

enum class Domain { Position, Frequency };

/// Complex samples of a symbol on a uniform grid, in natural (ascending
/// coordinate) order, axis 0 slowest. Values are immutable after
/// construction; the Fourier cache is filled lazily per value.
class GridSymbol {
public:
    /// Boundary decay required of admissible symbols (f and its transform L1
    /// at grid level): max |f| on the outermost shell <= decay_threshold * max |f|.
    static constexpr double decay_threshold = 1e-6;

    GridSymbol(std::vector<Axis> axes, Domain domain, std::vector<cplx> data);

    static GridSymbol zeros(std::vector<Axis> axes, Domain domain);
    static GridSymbol sample(std::vector<Axis> axes,
                             const std::function<cplx(const Eigen::VectorXd&)>& fn);

    int dim() const { return int(axes_.size()); }
    const Axis& axis(int i) const { return axes_[size_t(i)]; }
    const std::vector<Axis>& axes() const { return axes_; }
    Domain domain() const { return domain_; }
    std::size_t size() const { return data_.size(); }
    const std::vector<cplx>& data() const { return data_; }

    cplx operator[](std::size_t flat) const { return data_[flat]; }

    /// Multi-index <-> flat index (axis 0 slowest).
    std::size_t flat_index(const std::vector<int>& idx) const;
    std::vector<int> multi_index(std::size_t flat) const;

    /// Grid point (position or frequency, per domain) of a flat index.
    Eigen::VectorXd point(std::size_t flat) const;

    double max_abs() const;
    /// max |f| on the outermost shell divided by max |f| (0 if f = 0).
    double boundary_ratio() const;
    bool satisfies_decay() const { return boundary_ratio() <= decay_threshold; }
    void require_decay(const char* who) const;

    /// Riemann L2 norm: sqrt(sum |f|^2 * cell).
    double l2_norm() const;
    double cell_volume() const;

    GridSymbol conj() const;
    GridSymbol operator+(const GridSymbol& o) const;
    GridSymbol operator-(const GridSymbol& o) const;
    GridSymbol operator*(cplx scale) const;
    /// Pointwise product on the common grid.
    GridSymbol pointwise(const GridSymbol& o) const;

    bool compatible(const GridSymbol& o) const;
    void require_compatible(const GridSymbol& o, const char* who) const;

    /// Fourier data of a Position-domain symbol (natural order), cached.
    const std::vector<cplx>& spectrum() const;

private:
    std::vector<Axis> axes_;
    Domain domain_;
    std::vector<cplx> data_;
    mutable std::optional<std::vector<cplx>> spectrum_cache_;
};

/// Forward transform (2*pi)^{-d} * integral f(x) e^{-i k.x} dx, trapezoid on
/// the periodic grid. Position -> Frequency.
GridSymbol fourier(const GridSymbol& f);

/// Inverse transform integral fk(k) e^{+i k.x} dk. Frequency -> Position.
GridSymbol inverse_fourier(const GridSymbol& fk);

/// Spectral derivative d_mu f (Position domain in, Position domain out).
GridSymbol derivative(const GridSymbol& f, int mu);

/// Grid point (position or frequency values) of a flat index on the axes.
Eigen::VectorXd grid_point(const std::vector<Axis>& axes, std::size_t flat, Domain domain);

/// Natural-order transforms on raw data vectors (shared by the multi-slot
/// containers). Same conventions as fourier / inverse_fourier.
std::vector<cplx> fourier_data(const std::vector<Axis>& axes, const std::vector<cplx>& in);
std::vector<cplx> inverse_fourier_data(const std::vector<Axis>& axes, const std::vector<cplx>& in);

/// Trigonometric interpolation: evaluates the band-limited extension of f at
/// an arbitrary point (sum of the full spectrum; O(size) per point).
cplx spectral_eval(const GridSymbol& f, const Eigen::VectorXd& y);

/// Every factor-th sample along each axis (same extents, position domain).
GridSymbol subsample(const GridSymbol& f, int factor);

}  // namespace qst::star
