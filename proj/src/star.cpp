#include "qst/star.hpp"

#include <cmath>
#include <cstdint>

namespace qst::star {

namespace {

void require_antisym(const MatrixXd& theta, int d, const char* who) {
    if (theta.rows() != d || theta.cols() != d)
        throw validation_error(std::string(who) + ": theta dimension mismatch");
    if ((theta + theta.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * (1 + theta.cwiseAbs().maxCoeff()))
        throw validation_error(std::string(who) + ": theta must be antisymmetric");
}

/// Walks all flat indices while maintaining the multi-index.
struct IndexWalker {
    const std::vector<Axis>& axes;
    std::vector<int> idx;
    explicit IndexWalker(const std::vector<Axis>& a) : axes(a), idx(a.size(), 0) {}
    void advance() {
        for (int d = int(axes.size()) - 1; d >= 0; --d) {
            if (++idx[size_t(d)] < axes[size_t(d)].points) return;
            idx[size_t(d)] = 0;
        }
    }
};

}  // namespace

MatrixXd minkowski(int dim) {
    MatrixXd g = -MatrixXd::Identity(dim, dim);
    g(0, 0) = 1.0;
    return g;
}

MatrixXd boost2(double rapidity) {
    MatrixXd L(2, 2);
    L << std::cosh(rapidity), std::sinh(rapidity), std::sinh(rapidity), std::cosh(rapidity);
    return L;
}

double lorentz_defect(const MatrixXd& lambda) {
    const MatrixXd g = minkowski(int(lambda.rows()));
    return (lambda.transpose() * g * lambda - g).cwiseAbs().maxCoeff();
}

GridSymbol twisted_convolution(const GridSymbol& fk, const GridSymbol& gk, const MatrixXd& theta) {
    if (fk.domain() != Domain::Frequency || gk.domain() != Domain::Frequency)
        throw validation_error("twisted_convolution: expected frequency-domain symbols");
    fk.require_compatible(gk, "twisted_convolution");
    const int d = fk.dim();
    require_antisym(theta, d, "twisted_convolution");

    const std::size_t P = fk.size();
    const double cell = fk.cell_volume();
    std::vector<cplx> out(P, cplx(0, 0));

    // Precompute h, theta^T h and the significant h list.
    std::vector<Eigen::VectorXd> hs(P), th(P);
    for (std::size_t i = 0; i < P; ++i) {
        hs[i] = grid_point(fk.axes(), i, Domain::Frequency);
        th[i] = theta.transpose() * hs[i];
    }

    IndexWalker wk(fk.axes());
    for (std::size_t ik = 0; ik < P; ++ik, wk.advance()) {
        const Eigen::VectorXd k = grid_point(fk.axes(), ik, Domain::Frequency);
        cplx acc(0, 0);
        IndexWalker wh(fk.axes());
        for (std::size_t ih = 0; ih < P; ++ih, wh.advance()) {
            const cplx fv = fk[ih];
            if (fv == cplx(0, 0)) continue;
            // index of k - h on the same grid; out-of-band contributions dropped
            std::size_t ig = 0;
            bool in_band = true;
            for (int dd = 0; dd < d; ++dd) {
                const int n = fk.axis(dd).points;
                const int t = wk.idx[size_t(dd)] - wh.idx[size_t(dd)] + n / 2;
                if (t < 0 || t >= n) {
                    in_band = false;
                    break;
                }
                ig = ig * std::size_t(n) + std::size_t(t);
            }
            if (!in_band) continue;
            const cplx gv = gk[ig];
            if (gv == cplx(0, 0)) continue;
            acc += fv * gv * std::exp(cplx(0, -0.5 * th[ih].dot(k)));
        }
        out[ik] = acc * cell;
    }
    return GridSymbol(fk.axes(), Domain::Frequency, std::move(out));
}

GridSymbol star_product(const GridSymbol& f, const GridSymbol& g, const MatrixXd& theta) {
    if (f.domain() != Domain::Position || g.domain() != Domain::Position)
        throw validation_error("star_product: expected position-domain symbols");
    f.require_compatible(g, "star_product");
    const int d = f.dim();
    require_antisym(theta, d, "star_product");
    f.require_decay("star_product");
    g.require_decay("star_product");

    const std::vector<cplx>& fh = f.spectrum();
    const GridSymbol gk = fourier(g);
    const std::size_t P = f.size();
    const double cellk = 1.0;  // spectrum already carries (2 pi)^-d dx^d; sum needs dk^d
    double dk_vol = 1.0;
    for (const Axis& a : f.axes()) dk_vol *= a.dk();

    double fmax = 0;
    for (const cplx& v : fh) fmax = std::max(fmax, std::abs(v));
    const double cutoff = 1e-18 * fmax;

    std::vector<cplx> acc(P, cplx(0, 0));
    std::vector<cplx> shifted_k(P);

    IndexWalker wh(f.axes());
    for (std::size_t ih = 0; ih < P; ++ih, wh.advance()) {
        const cplx fv = fh[ih];
        if (std::abs(fv) <= cutoff) continue;
        const Eigen::VectorXd h = grid_point(f.axes(), ih, Domain::Frequency);
        const Eigen::VectorXd s = 0.5 * (theta.transpose() * h);

        // g(x - s) via phase twist of the spectrum; per-axis phase tables
        std::vector<std::vector<cplx>> ktab(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            ktab[size_t(a)].resize(size_t(f.axis(a).points));
            for (int t = 0; t < f.axis(a).points; ++t)
                ktab[size_t(a)][size_t(t)] = std::exp(cplx(0, -f.axis(a).k(t) * s(a)));
        }
        IndexWalker wk(f.axes());
        for (std::size_t ikk = 0; ikk < P; ++ikk, wk.advance()) {
            cplx phase(1, 0);
            for (int a = 0; a < d; ++a) phase *= ktab[size_t(a)][size_t(wk.idx[size_t(a)])];
            shifted_k[ikk] = gk[ikk] * phase;
        }
        GridSymbol gshift =
            inverse_fourier(GridSymbol(f.axes(), Domain::Frequency, shifted_k));

        // per-axis tables of e^{i h_a x_a}
        std::vector<std::vector<cplx>> table(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            table[size_t(a)].resize(size_t(f.axis(a).points));
            for (int j = 0; j < f.axis(a).points; ++j)
                table[size_t(a)][size_t(j)] = std::exp(cplx(0, h(a) * f.axis(a).x(j)));
        }

        const cplx w = fv * dk_vol * cellk;
        IndexWalker wj(f.axes());
        for (std::size_t j = 0; j < P; ++j, wj.advance()) {
            cplx phase = w;
            for (int a = 0; a < d; ++a) phase *= table[size_t(a)][size_t(wj.idx[size_t(a)])];
            acc[j] += phase * gshift[j];
        }
    }
    return GridSymbol(f.axes(), Domain::Position, std::move(acc));
}

GridSymbol moyal_product(const GridSymbol& f, const GridSymbol& g, const MatrixXd& theta,
                         int order) {
    if (order < 0) throw validation_error("moyal_product: order must be >= 0");
    f.require_compatible(g, "moyal_product");
    const int d = f.dim();
    require_antisym(theta, d, "moyal_product");

    struct Entry {
        cplx weight;
        GridSymbol df, dg;
    };
    std::vector<Entry> entries{{cplx(1, 0), f, g}};
    GridSymbol result = f.pointwise(g);

    cplx scale(1, 0);
    for (int j = 1; j <= order; ++j) {
        scale *= cplx(0, 0.5) / double(j);
        std::vector<Entry> next;
        for (const Entry& e : entries)
            for (int mu = 0; mu < d; ++mu)
                for (int nu = 0; nu < d; ++nu) {
                    if (theta(mu, nu) == 0.0) continue;
                    next.push_back({e.weight * theta(mu, nu), derivative(e.df, mu),
                                    derivative(e.dg, nu)});
                }
        if (next.size() > 4096) throw numeric_error("moyal_product: expansion too large");
        entries = std::move(next);
        for (const Entry& e : entries)
            result = result + e.df.pointwise(e.dg) * (e.weight * scale);
    }
    return result;
}

namespace {

struct Box {
    std::vector<int> lo, hi;  // inclusive index bounds per axis
};

Box support_box(const GridSymbol& f, double tol) {
    const double cut = tol * f.max_abs();
    Box b{std::vector<int>(size_t(f.dim()), INT32_MAX), std::vector<int>(size_t(f.dim()), -1)};
    IndexWalker w(f.axes());
    for (std::size_t i = 0; i < f.size(); ++i, w.advance()) {
        if (std::abs(f[i]) > cut) {
            for (int d = 0; d < f.dim(); ++d) {
                b.lo[size_t(d)] = std::min(b.lo[size_t(d)], w.idx[size_t(d)]);
                b.hi[size_t(d)] = std::max(b.hi[size_t(d)], w.idx[size_t(d)]);
            }
        }
    }
    return b;
}

bool boxes_overlap(const Box& a, const Box& b) {
    for (std::size_t d = 0; d < a.lo.size(); ++d)
        if (a.hi[d] < b.lo[d] || b.hi[d] < a.lo[d]) return false;
    return true;
}

}  // namespace

LocalityReport locality_probe(const GridSymbol& f, const GridSymbol& g, const MatrixXd& theta,
                              int order, double support_tol) {
    f.require_compatible(g, "locality_probe");
    if (f.max_abs() == 0 || g.max_abs() == 0)
        throw validation_error("locality_probe: zero input");
    if (boxes_overlap(support_box(f, support_tol), support_box(g, support_tol)))
        throw validation_error("locality_probe: numerical supports overlap");

    LocalityReport r;
    r.scale = f.max_abs() * g.max_abs();
    r.moyal_max = moyal_product(f, g, theta, order).max_abs();
    r.star_max = star_product(f, g, theta).max_abs();
    return r;
}

double pullback_aliasing_bound(const GridSymbol& f) {
    GridSymbol fk = fourier(f);
    return fk.boundary_ratio();
}

GridSymbol pullback(const GridSymbol& f, const MatrixXd& lambda, const VectorXd& a) {
    const int d = f.dim();
    if (lambda.rows() != d || lambda.cols() != d || a.size() != d)
        throw validation_error("pullback: dimension mismatch");
    if (lorentz_defect(lambda) > 1e-8)
        throw validation_error("pullback: matrix does not preserve the Minkowski metric");
    if (lambda.operatorNorm() > std::exp(1.0) + 1e-9)
        throw validation_error("pullback: grid path capped at rapidity 1");

    const MatrixXd Binv = lambda.inverse();
    const std::vector<cplx>& spec = f.spectrum();
    const std::size_t P = f.size();
    double dk_vol = 1.0;
    for (const Axis& ax : f.axes()) dk_vol *= ax.dk();

    std::vector<cplx> out(P, cplx(0, 0));
    std::vector<Eigen::VectorXd> ks(P);
    for (std::size_t m = 0; m < P; ++m) ks[m] = grid_point(f.axes(), m, Domain::Frequency);

    for (std::size_t j = 0; j < P; ++j) {
        const Eigen::VectorXd y = Binv * (grid_point(f.axes(), j, Domain::Position) - a);
        cplx acc(0, 0);
        for (std::size_t m = 0; m < P; ++m) {
            if (spec[m] == cplx(0, 0)) continue;
            acc += spec[m] * std::exp(cplx(0, ks[m].dot(y)));
        }
        out[j] = acc * dk_vol;
    }
    GridSymbol res(f.axes(), Domain::Position, std::move(out));
    res.require_decay("pullback");
    return res;
}

CovarianceDefectReport covariance_defect(const GaussianSymbol& f, const GaussianSymbol& g,
                                         const MatrixXd& sigma, const MatrixXd& lambda,
                                         const VectorXd& a, std::uint64_t probe_seed) {
    const MatrixXd sigma_p = lambda * sigma * lambda.transpose();
    const GaussianSymbol fp = pullback(f, lambda, a);
    const GaussianSymbol gp = pullback(g, lambda, a);
    const GaussianSymbol prod = star_product(f, g, sigma);
    const GaussianSymbol prod_p = pullback(prod, lambda, a);
    const GaussianSymbol lhs_transformed = star_product(fp, gp, sigma_p);
    const GaussianSymbol lhs_fixed = star_product(fp, gp, sigma);

    ProbeCloud cloud(prod_p, probe_seed);
    auto ev = [](const GaussianSymbol& s) {
        return [&s](const VectorXd& x) { return s.evaluate(x); };
    };
    CovarianceDefectReport rep;
    rep.transformed = cloud.rel_error(ev(prod_p), ev(lhs_transformed));
    rep.fixed = cloud.rel_error(ev(prod_p), ev(lhs_fixed));
    return rep;
}

}  // namespace qst::star
