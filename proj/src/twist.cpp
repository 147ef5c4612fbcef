#include "qst/twist.hpp"

#include <cmath>

namespace qst::star {

namespace {

void check_lambda(const MatrixXd& lambda, int d, const char* who) {
    if (lambda.rows() != d || lambda.cols() != d)
        throw validation_error(std::string(who) + ": lambda dimension mismatch");
    if (lorentz_defect(lambda) > 1e-8)
        throw validation_error(std::string(who) + ": matrix does not preserve the Minkowski metric");
    if (lambda.operatorNorm() > std::exp(1.0) + 1e-9)
        throw validation_error(std::string(who) + ": grid path capped at rapidity 1");
}

}  // namespace

TwoSlotSymbol::TwoSlotSymbol(std::vector<Axis> axes, Domain domain, Eigen::MatrixXcd data)
    : axes_(std::move(axes)), domain_(domain), data_(std::move(data)) {
    std::size_t p = 1;
    for (const Axis& a : axes_) p *= std::size_t(a.points);
    if (std::size_t(data_.rows()) != p || std::size_t(data_.cols()) != p)
        throw validation_error("TwoSlotSymbol: data size does not match axes");
    if (p * p > max_entries) throw numeric_error("TwoSlotSymbol: memory budget exceeded");
}

TwoSlotSymbol TwoSlotSymbol::outer(const GridSymbol& f, const GridSymbol& g) {
    f.require_compatible(g, "TwoSlotSymbol::outer");
    const std::size_t p = f.size();
    Eigen::Map<const Eigen::VectorXcd> fv(f.data().data(), long(p));
    Eigen::Map<const Eigen::VectorXcd> gv(g.data().data(), long(p));
    return TwoSlotSymbol(f.axes(), f.domain(), fv * gv.transpose());
}

TwoSlotSymbol TwoSlotSymbol::random_bandlimited(std::vector<Axis> axes, Rng& rng, int band) {
    std::size_t p = 1;
    for (const Axis& a : axes) p *= std::size_t(a.points);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(long(p), long(p));
    auto inside = [&](std::size_t flat) {
        for (int d = int(axes.size()) - 1; d >= 0; --d) {
            const int n = axes[size_t(d)].points;
            const int t = int(flat % std::size_t(n));
            flat /= std::size_t(n);
            if (std::abs(t - n / 2) > band) return false;
        }
        return true;
    };
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            if (inside(i) && inside(j)) m(long(i), long(j)) = rng.normal_complex();
    TwoSlotSymbol freq(axes, Domain::Frequency, std::move(m));
    return two_slot_inverse_fourier(freq);
}

TwoSlotSymbol TwoSlotSymbol::operator-(const TwoSlotSymbol& o) const {
    if (domain_ != o.domain_) throw validation_error("TwoSlotSymbol: domain mismatch");
    return TwoSlotSymbol(axes_, domain_, data_ - o.data_);
}

GridSymbol TwoSlotSymbol::diagonal() const {
    const std::size_t p = slot_size();
    std::vector<cplx> d(p);
    for (std::size_t i = 0; i < p; ++i) d[i] = data_(long(i), long(i));
    return GridSymbol(axes_, domain_, std::move(d));
}

namespace {

enum class Slot { One, Two };

Eigen::MatrixXcd slot_transform(const std::vector<Axis>& axes, const Eigen::MatrixXcd& m,
                                Slot slot, bool forward) {
    const std::size_t p = std::size_t(m.rows());
    Eigen::MatrixXcd out(m.rows(), m.cols());
    std::vector<cplx> buf(p);
    for (long fixed = 0; fixed < m.cols(); ++fixed) {
        for (std::size_t i = 0; i < p; ++i)
            buf[i] = slot == Slot::One ? m(long(i), fixed) : m(fixed, long(i));
        std::vector<cplx> tr = forward ? fourier_data(axes, buf) : inverse_fourier_data(axes, buf);
        for (std::size_t i = 0; i < p; ++i) {
            if (slot == Slot::One)
                out(long(i), fixed) = tr[i];
            else
                out(fixed, long(i)) = tr[i];
        }
    }
    return out;
}

}  // namespace

TwoSlotSymbol two_slot_fourier(const TwoSlotSymbol& F) {
    if (F.domain() != Domain::Position)
        throw validation_error("two_slot_fourier: expected position domain");
    Eigen::MatrixXcd m = slot_transform(F.axes(), F.data(), Slot::One, true);
    m = slot_transform(F.axes(), m, Slot::Two, true);
    return TwoSlotSymbol(F.axes(), Domain::Frequency, std::move(m));
}

TwoSlotSymbol two_slot_inverse_fourier(const TwoSlotSymbol& Fk) {
    if (Fk.domain() != Domain::Frequency)
        throw validation_error("two_slot_inverse_fourier: expected frequency domain");
    Eigen::MatrixXcd m = slot_transform(Fk.axes(), Fk.data(), Slot::One, false);
    m = slot_transform(Fk.axes(), m, Slot::Two, false);
    return TwoSlotSymbol(Fk.axes(), Domain::Position, std::move(m));
}

TwoSlotSymbol twist_multiplier(const std::vector<Axis>& axes, const MatrixXd& sigma) {
    std::size_t p = 1;
    for (const Axis& a : axes) p *= std::size_t(a.points);
    Eigen::MatrixXcd m(static_cast<long>(p), static_cast<long>(p));
    std::vector<Eigen::VectorXd> freq(p);
    for (std::size_t i = 0; i < p; ++i) freq[i] = grid_point(axes, i, Domain::Frequency);
    for (std::size_t i = 0; i < p; ++i) {
        const Eigen::VectorXd hs = sigma.transpose() * freq[i];
        for (std::size_t j = 0; j < p; ++j)
            m(long(i), long(j)) = std::exp(cplx(0, -0.5 * hs.dot(freq[j])));
    }
    return TwoSlotSymbol(axes, Domain::Frequency, std::move(m));
}

TwoSlotSymbol apply_twist(const TwoSlotSymbol& F, const MatrixXd& sigma, int direction) {
    if (direction != 1 && direction != -1)
        throw validation_error("apply_twist: direction must be +-1");
    TwoSlotSymbol Fk = F.domain() == Domain::Frequency ? F : two_slot_fourier(F);
    TwoSlotSymbol tw = twist_multiplier(F.axes(), sigma);
    Eigen::MatrixXcd m = direction == 1 ? Fk.data().cwiseProduct(tw.data()).eval()
                                        : Fk.data().cwiseProduct(tw.data().conjugate()).eval();
    TwoSlotSymbol twisted(F.axes(), Domain::Frequency, std::move(m));
    return F.domain() == Domain::Frequency ? twisted : two_slot_inverse_fourier(twisted);
}

TwoSlotSymbol two_slot_pullback(const TwoSlotSymbol& F, const MatrixXd& lambda) {
    check_lambda(lambda, F.dim(), "two_slot_pullback");
    if (F.domain() != Domain::Position)
        throw validation_error("two_slot_pullback: expected position domain");
    const std::size_t p = F.slot_size();
    const MatrixXd Binv = lambda.inverse();

    // evaluation matrix: spectrum (natural order) -> values at Lambda^{-1} x
    double dk_vol = 1.0;
    for (const Axis& a : F.axes()) dk_vol *= a.dk();
    Eigen::MatrixXcd E(static_cast<long>(p), static_cast<long>(p));
    for (std::size_t j = 0; j < p; ++j) {
        const Eigen::VectorXd y = Binv * grid_point(F.axes(), j, Domain::Position);
        for (std::size_t mth = 0; mth < p; ++mth) {
            E(long(j), long(mth)) =
                dk_vol * std::exp(cplx(0, grid_point(F.axes(), mth, Domain::Frequency).dot(y)));
        }
    }
    Eigen::MatrixXcd m = slot_transform(F.axes(), F.data(), Slot::One, true);
    m = E * m;
    m = slot_transform(F.axes(), m, Slot::Two, true);
    m = m * E.transpose();
    return TwoSlotSymbol(F.axes(), Domain::Position, std::move(m));
}

TwoSlotSymbol twisted_action(const MatrixXd& lambda, const MatrixXd& sigma,
                             const TwoSlotSymbol& F) {
    TwoSlotSymbol twisted = apply_twist(F, sigma, +1);
    TwoSlotSymbol moved = two_slot_pullback(twisted, lambda);
    return apply_twist(moved, sigma, -1);
}

GridSymbol two_slot_star(const TwoSlotSymbol& F, const MatrixXd& sigma) {
    return apply_twist(F, sigma, +1).diagonal();
}

namespace {

/// Dense three-slot tensor, flat index (i1 * p + i2) * p + i3.
struct ThreeSlot {
    std::vector<Axis> axes;
    std::size_t p;
    std::vector<cplx> data;
};

void slot3_transform(ThreeSlot& t, int slot, bool forward) {
    const std::size_t p = t.p;
    std::vector<cplx> buf(p);
    const std::size_t strides[3] = {p * p, p, 1};
    const std::size_t s = strides[slot];
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
            // base offset with the slot index zeroed
            std::size_t base = 0;
            if (slot == 0) base = a * p + b;
            if (slot == 1) base = a * p * p + b;
            if (slot == 2) base = a * p * p + b * p;
            for (std::size_t i = 0; i < p; ++i) buf[i] = t.data[base + i * s];
            std::vector<cplx> tr =
                forward ? fourier_data(t.axes, buf) : inverse_fourier_data(t.axes, buf);
            for (std::size_t i = 0; i < p; ++i) t.data[base + i * s] = tr[i];
        }
}

void fft3(ThreeSlot& t) {
    for (int s = 0; s < 3; ++s) slot3_transform(t, s, true);
}
void ifft3(ThreeSlot& t) {
    for (int s = 0; s < 3; ++s) slot3_transform(t, s, false);
}

enum class Iteration { LeftFirst, RightFirst };

/// Multiply by the iterated three-slot twist in frequency space. The two
/// iterations assemble the same symmetric phase from different factors.
void apply_twist3(ThreeSlot& t, const MatrixXd& sigma, Iteration it, int direction) {
    const std::size_t p = t.p;
    std::vector<Eigen::VectorXd> k(p);
    for (std::size_t i = 0; i < p; ++i) k[i] = grid_point(t.axes, i, Domain::Frequency);
    // pair phases s(a,b) = k_a . sigma^T' ... = (sigma^T k_a) . k_b
    Eigen::MatrixXd s(static_cast<long>(p), static_cast<long>(p));
    for (std::size_t a = 0; a < p; ++a) {
        const Eigen::VectorXd w = sigma.transpose() * k[a];
        for (std::size_t b = 0; b < p; ++b) s(long(a), long(b)) = w.dot(k[b]);
    }
    const double dir = direction;
    std::size_t idx = 0;
    for (std::size_t i1 = 0; i1 < p; ++i1)
        for (std::size_t i2 = 0; i2 < p; ++i2) {
            const double s12 = s(long(i1), long(i2));
            for (std::size_t i3 = 0; i3 < p; ++i3, ++idx) {
                cplx ph;
                if (it == Iteration::LeftFirst) {
                    ph = std::exp(cplx(0, -0.5 * dir * s12)) *
                         std::exp(cplx(0, -0.5 * dir * (s(long(i1), long(i3)) + s(long(i2), long(i3)))));
                } else {
                    ph = std::exp(cplx(0, -0.5 * dir * s(long(i2), long(i3)))) *
                         std::exp(cplx(0, -0.5 * dir * (s12 + s(long(i1), long(i3)))));
                }
                t.data[idx] *= ph;
            }
        }
}

/// Infinitesimal Lorentz action omega^mu_nu x^nu d_mu applied to every slot.
ThreeSlot coproduct_action(const ThreeSlot& t, const MatrixXd& omega) {
    const int d = int(t.axes.size());
    const std::size_t p = t.p;
    ThreeSlot out{t.axes, t.p, std::vector<cplx>(t.data.size(), cplx(0, 0))};

    std::vector<Eigen::VectorXd> xs(p), ks(p);
    for (std::size_t i = 0; i < p; ++i) {
        xs[i] = grid_point(t.axes, i, Domain::Position);
        ks[i] = grid_point(t.axes, i, Domain::Frequency);
    }

    for (int slot = 0; slot < 3; ++slot) {
        for (int mu = 0; mu < d; ++mu) {
            // spectral derivative along axis mu of this slot
            ThreeSlot der = t;
            slot3_transform(der, slot, true);
            const std::size_t strides[3] = {p * p, p, 1};
            std::size_t idx = 0;
            for (std::size_t i1 = 0; i1 < p; ++i1)
                for (std::size_t i2 = 0; i2 < p; ++i2)
                    for (std::size_t i3 = 0; i3 < p; ++i3, ++idx) {
                        const std::size_t islot = slot == 0 ? i1 : (slot == 1 ? i2 : i3);
                        der.data[idx] *= cplx(0, ks[islot](mu));
                    }
            (void)strides;
            slot3_transform(der, slot, false);
            // multiply by omega^mu_nu x^nu of the slot coordinate
            idx = 0;
            for (std::size_t i1 = 0; i1 < p; ++i1)
                for (std::size_t i2 = 0; i2 < p; ++i2)
                    for (std::size_t i3 = 0; i3 < p; ++i3, ++idx) {
                        const std::size_t islot = slot == 0 ? i1 : (slot == 1 ? i2 : i3);
                        double coeff = 0;
                        for (int nu = 0; nu < d; ++nu) coeff += omega(mu, nu) * xs[islot](nu);
                        out.data[idx] += coeff * der.data[idx];
                    }
        }
    }
    return out;
}

double norm3(const ThreeSlot& t) {
    double s = 0;
    for (const cplx& v : t.data) s += std::norm(v);
    return std::sqrt(s);
}

}  // namespace

CoassociativityReport coassociativity_probe(const MatrixXd& sigma, const GridSymbol& f,
                                            const GridSymbol& g, const GridSymbol& h,
                                            const MatrixXd& omega, int three_slot_points) {
    f.require_compatible(g, "coassociativity_probe");
    f.require_compatible(h, "coassociativity_probe");

    CoassociativityReport rep{};
    {
        GridSymbol lhs = star_product(star_product(f, g, sigma), h, sigma);
        GridSymbol rhs = star_product(f, star_product(g, h, sigma), sigma);
        rep.star_assoc_defect = (lhs - rhs).l2_norm() / lhs.l2_norm();
    }

    const int factor = f.axis(0).points / three_slot_points;
    GridSymbol fc = subsample(f, factor), gc = subsample(g, factor), hc = subsample(h, factor);
    const std::size_t p = fc.size();
    if (p * p * p > TwoSlotSymbol::max_entries)
        throw numeric_error("coassociativity_probe: three-slot tensor exceeds the size cap");

    ThreeSlot F{fc.axes(), p, std::vector<cplx>(p * p * p)};
    std::size_t idx = 0;
    for (std::size_t i1 = 0; i1 < p; ++i1)
        for (std::size_t i2 = 0; i2 < p; ++i2)
            for (std::size_t i3 = 0; i3 < p; ++i3, ++idx)
                F.data[idx] = fc[i1] * gc[i2] * hc[i3];

    auto twisted_coproduct = [&](Iteration it) {
        ThreeSlot t = F;
        fft3(t);
        apply_twist3(t, sigma, it, +1);
        ifft3(t);
        t = coproduct_action(t, omega);
        fft3(t);
        apply_twist3(t, sigma, it, -1);
        ifft3(t);
        return t;
    };
    ThreeSlot A = twisted_coproduct(Iteration::LeftFirst);
    ThreeSlot B = twisted_coproduct(Iteration::RightFirst);
    double diff = 0;
    for (std::size_t i = 0; i < A.data.size(); ++i) diff += std::norm(A.data[i] - B.data[i]);
    const double na = norm3(A);
    rep.coassoc_defect = na > 0 ? std::sqrt(diff) / na : std::sqrt(diff);
    return rep;
}

}  // namespace qst::star
