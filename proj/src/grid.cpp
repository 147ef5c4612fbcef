#include "qst/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>

namespace qst::star {

GridSymbol::GridSymbol(std::vector<Axis> axes, Domain domain, std::vector<cplx> data)
    : axes_(std::move(axes)), domain_(domain), data_(std::move(data)) {
    std::size_t n = 1;
    for (const Axis& a : axes_) {
        if (a.points < 8) throw validation_error("GridSymbol: need at least 8 points per axis");
        if (a.points % 2 != 0) throw validation_error("GridSymbol: points per axis must be even");
        if (!(a.extent > 0)) throw validation_error("GridSymbol: extent must be positive");
        n *= std::size_t(a.points);
    }
    if (data_.size() != n) throw validation_error("GridSymbol: data size does not match axes");
}

GridSymbol GridSymbol::zeros(std::vector<Axis> axes, Domain domain) {
    std::size_t n = 1;
    for (const Axis& a : axes) n *= std::size_t(a.points);
    return GridSymbol(std::move(axes), domain, std::vector<cplx>(n, cplx(0, 0)));
}

GridSymbol GridSymbol::sample(std::vector<Axis> axes,
                              const std::function<cplx(const Eigen::VectorXd&)>& fn) {
    GridSymbol out = zeros(axes, Domain::Position);
    std::vector<cplx> data(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) data[i] = fn(out.point(i));
    return GridSymbol(std::move(axes), Domain::Position, std::move(data));
}

std::size_t GridSymbol::flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int d = 0; d < dim(); ++d) flat = flat * std::size_t(axes_[d].points) + std::size_t(idx[d]);
    return flat;
}

std::vector<int> GridSymbol::multi_index(std::size_t flat) const {
    std::vector<int> idx(dim());
    for (int d = dim() - 1; d >= 0; --d) {
        idx[d] = int(flat % std::size_t(axes_[d].points));
        flat /= std::size_t(axes_[d].points);
    }
    return idx;
}

Eigen::VectorXd GridSymbol::point(std::size_t flat) const {
    std::vector<int> idx = multi_index(flat);
    Eigen::VectorXd p(dim());
    for (int d = 0; d < dim(); ++d)
        p(d) = domain_ == Domain::Position ? axes_[d].x(idx[d]) : axes_[d].k(idx[d]);
    return p;
}

double GridSymbol::max_abs() const {
    double m = 0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double GridSymbol::boundary_ratio() const {
    const double m = max_abs();
    if (m == 0) return 0;
    double shell = 0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        std::vector<int> idx = multi_index(i);
        bool outer = false;
        for (int d = 0; d < dim(); ++d)
            if (idx[d] == 0 || idx[d] == axes_[d].points - 1) outer = true;
        if (outer) shell = std::max(shell, std::abs(data_[i]));
    }
    return shell / m;
}

void GridSymbol::require_decay(const char* who) const {
    const double r = boundary_ratio();
    if (r > decay_threshold)
        throw validation_error(std::string(who) + ": boundary decay violated (ratio " +
                               std::to_string(r) + ")");
}

double GridSymbol::cell_volume() const {
    double v = 1;
    for (const Axis& a : axes_) v *= (domain_ == Domain::Position ? a.dx() : a.dk());
    return v;
}

double GridSymbol::l2_norm() const {
    double s = 0;
    for (const cplx& v : data_) s += std::norm(v);
    return std::sqrt(s * cell_volume());
}

GridSymbol GridSymbol::conj() const {
    std::vector<cplx> d(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) d[i] = std::conj(data_[i]);
    return GridSymbol(axes_, domain_, std::move(d));
}

bool GridSymbol::compatible(const GridSymbol& o) const {
    if (dim() != o.dim() || domain_ != o.domain_) return false;
    for (int d = 0; d < dim(); ++d)
        if (axes_[d].extent != o.axes_[d].extent || axes_[d].points != o.axes_[d].points)
            return false;
    return true;
}

void GridSymbol::require_compatible(const GridSymbol& o, const char* who) const {
    if (!compatible(o)) throw validation_error(std::string(who) + ": grid mismatch");
}

GridSymbol GridSymbol::operator+(const GridSymbol& o) const {
    require_compatible(o, "GridSymbol::operator+");
    std::vector<cplx> d(data_.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = data_[i] + o.data_[i];
    return GridSymbol(axes_, domain_, std::move(d));
}

GridSymbol GridSymbol::operator-(const GridSymbol& o) const {
    require_compatible(o, "GridSymbol::operator-");
    std::vector<cplx> d(data_.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = data_[i] - o.data_[i];
    return GridSymbol(axes_, domain_, std::move(d));
}

GridSymbol GridSymbol::operator*(cplx scale) const {
    std::vector<cplx> d(data_.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = data_[i] * scale;
    return GridSymbol(axes_, domain_, std::move(d));
}

GridSymbol GridSymbol::pointwise(const GridSymbol& o) const {
    require_compatible(o, "GridSymbol::pointwise");
    std::vector<cplx> d(data_.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = data_[i] * o.data_[i];
    return GridSymbol(axes_, domain_, std::move(d));
}

namespace {

/// Natural-order rank-d DFT both ways. sign = -1 forward, +1 backward.
std::vector<cplx> fft_nd(const std::vector<Axis>& axes, const std::vector<cplx>& in, int sign) {
    std::vector<int> dims;
    dims.reserve(axes.size());
    for (const Axis& a : axes) dims.push_back(a.points);
    std::vector<cplx> buf = in;
    fftw_plan plan = fftw_plan_dft(int(dims.size()), dims.data(),
                                   reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()),
                                   sign == -1 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return buf;
}

/// Parity factor prod_mu (-1)^{m_mu} for natural index tuple (m = t - N/2).
double parity(const std::vector<Axis>& axes, std::size_t flat) {
    int s = 0;
    for (int d = int(axes.size()) - 1; d >= 0; --d) {
        const int n = axes[size_t(d)].points;
        const int t = int(flat % std::size_t(n));
        flat /= std::size_t(n);
        s += t - n / 2;
    }
    return (s % 2 == 0) ? 1.0 : -1.0;
}

/// Natural index tuple t <-> wrapped DFT index q = (t - N/2) mod N.
std::size_t natural_to_wrapped(const std::vector<Axis>& axes, std::size_t flat) {
    std::size_t out = 0;
    std::vector<int> idx(axes.size());
    for (int d = int(axes.size()) - 1; d >= 0; --d) {
        const int n = axes[size_t(d)].points;
        idx[size_t(d)] = int(flat % std::size_t(n));
        flat /= std::size_t(n);
    }
    for (std::size_t d = 0; d < axes.size(); ++d) {
        const int n = axes[d].points;
        int q = (idx[d] - n / 2) % n;
        if (q < 0) q += n;
        out = out * std::size_t(n) + std::size_t(q);
    }
    return out;
}

}  // namespace

std::vector<cplx> fourier_data(const std::vector<Axis>& axes, const std::vector<cplx>& in) {
    std::vector<cplx> dft = fft_nd(axes, in, -1);
    double scale = 1.0;
    for (const Axis& a : axes) scale *= a.dx() / (2.0 * pi);
    std::vector<cplx> out(in.size());
    for (std::size_t t = 0; t < out.size(); ++t)
        out[t] = scale * parity(axes, t) * dft[natural_to_wrapped(axes, t)];
    return out;
}

std::vector<cplx> inverse_fourier_data(const std::vector<Axis>& axes, const std::vector<cplx>& in) {
    std::vector<cplx> buf(in.size());
    for (std::size_t t = 0; t < in.size(); ++t)
        buf[natural_to_wrapped(axes, t)] = parity(axes, t) * in[t];
    std::vector<cplx> y = fft_nd(axes, buf, +1);
    double scale = 1.0;
    for (const Axis& a : axes) scale *= a.dk();
    for (cplx& v : y) v *= scale;
    return y;
}

const std::vector<cplx>& GridSymbol::spectrum() const {
    if (domain_ != Domain::Position)
        throw validation_error("GridSymbol::spectrum: symbol already in frequency domain");
    if (!spectrum_cache_) {
        GridSymbol fk = fourier(*this);
        spectrum_cache_ = fk.data();
    }
    return *spectrum_cache_;
}

GridSymbol fourier(const GridSymbol& f) {
    if (f.domain() != Domain::Position)
        throw validation_error("fourier: expected a position-domain symbol");
    f.require_decay("fourier");
    return GridSymbol(f.axes(), Domain::Frequency, fourier_data(f.axes(), f.data()));
}

GridSymbol inverse_fourier(const GridSymbol& fk) {
    if (fk.domain() != Domain::Frequency)
        throw validation_error("inverse_fourier: expected a frequency-domain symbol");
    return GridSymbol(fk.axes(), Domain::Position, inverse_fourier_data(fk.axes(), fk.data()));
}

GridSymbol derivative(const GridSymbol& f, int mu) {
    if (f.domain() != Domain::Position)
        throw validation_error("derivative: expected a position-domain symbol");
    if (mu < 0 || mu >= f.dim()) throw validation_error("derivative: axis out of range");
    GridSymbol fk = fourier(f);
    std::vector<cplx> d(fk.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = cplx(0, 1) * fk.point(i)(mu) * fk[i];
    }
    return inverse_fourier(GridSymbol(fk.axes(), Domain::Frequency, std::move(d)));
}

GridSymbol subsample(const GridSymbol& f, int factor) {
    if (f.domain() != Domain::Position)
        throw validation_error("subsample: expected a position-domain symbol");
    if (factor < 1) throw validation_error("subsample: factor must be >= 1");
    std::vector<Axis> axes2;
    for (const Axis& a : f.axes()) {
        if (a.points % factor != 0)
            throw validation_error("subsample: factor must divide the point count");
        axes2.push_back({a.extent, a.points / factor});
    }
    GridSymbol proto = GridSymbol::zeros(axes2, Domain::Position);
    std::vector<cplx> data(proto.size());
    for (std::size_t i = 0; i < proto.size(); ++i) {
        std::vector<int> idx = proto.multi_index(i);
        for (int& v : idx) v *= factor;
        data[i] = f[f.flat_index(idx)];
    }
    return GridSymbol(axes2, Domain::Position, std::move(data));
}

Eigen::VectorXd grid_point(const std::vector<Axis>& axes, std::size_t flat, Domain domain) {
    Eigen::VectorXd p(axes.size());
    for (int d = int(axes.size()) - 1; d >= 0; --d) {
        const int n = axes[size_t(d)].points;
        const int t = int(flat % std::size_t(n));
        flat /= std::size_t(n);
        p(d) = domain == Domain::Position ? axes[size_t(d)].x(t) : axes[size_t(d)].k(t);
    }
    return p;
}

cplx spectral_eval(const GridSymbol& f, const Eigen::VectorXd& y) {
    const std::vector<cplx>& spec = f.domain() == Domain::Position ? f.spectrum() : f.data();
    double cell = 1.0;
    for (const Axis& a : f.axes()) cell *= a.dk();
    cplx acc(0, 0);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec[i] == cplx(0, 0)) continue;
        acc += spec[i] * std::exp(cplx(0, grid_point(f.axes(), i, Domain::Frequency).dot(y)));
    }
    return acc * cell;
}

}  // namespace qst::star
