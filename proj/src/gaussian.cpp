#include "qst/gaussian.hpp"

#include <cmath>

namespace qst::star {

namespace {

void require_symmetric(const MatrixXcd& A, const char* who) {
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff()))
        throw validation_error(std::string(who) + ": quadratic form must be symmetric");
}

double min_re_eigenvalue(const MatrixXcd& A) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (A.real() + A.real().transpose()));
    return es.eigenvalues().minCoeff();
}

void require_re_posdef(const MatrixXcd& A, const char* who) {
    const double mn = min_re_eigenvalue(A);
    if (!(mn > 0))
        throw numeric_error(std::string(who) + ": Re of quadratic form not positive definite (min eig " +
                            std::to_string(mn) + ")");
}

}  // namespace

cplx half_log_det(const MatrixXcd& a) {
    Eigen::ComplexEigenSolver<MatrixXcd> es(a, false);
    cplx acc = 0;
    for (int i = 0; i < a.rows(); ++i) acc += std::log(es.eigenvalues()(i));
    return 0.5 * acc;
}

GaussianSymbol::GaussianSymbol(cplx amplitude, MatrixXcd quadratic_form, VectorXcd linear_term)
    : c_(amplitude), A_(std::move(quadratic_form)), b_(std::move(linear_term)) {
    if (A_.rows() != A_.cols() || A_.rows() != b_.size())
        throw validation_error("GaussianSymbol: inconsistent dimensions");
    require_symmetric(A_, "GaussianSymbol");
    A_ = 0.5 * (A_ + A_.transpose().eval());
    require_re_posdef(A_, "GaussianSymbol");
}

GaussianSymbol GaussianSymbol::isotropic(int dim, double width, cplx amplitude) {
    return GaussianSymbol(amplitude, MatrixXcd::Identity(dim, dim) / (width * width),
                          VectorXcd::Zero(dim));
}

cplx GaussianSymbol::evaluate(const VectorXd& x) const {
    const VectorXcd xc = x.cast<cplx>();
    const cplx expo = -0.5 * (xc.transpose() * A_ * xc)(0) + (b_.transpose() * xc)(0);
    return c_ * std::exp(expo);
}

GaussianSymbol GaussianSymbol::conj() const {
    return GaussianSymbol(std::conj(c_), A_.conjugate(), b_.conjugate());
}

GaussianSymbol GaussianSymbol::scaled(cplx factor) const {
    return GaussianSymbol(c_ * factor, A_, b_);
}

GaussianSymbol GaussianSymbol::pointwise(const GaussianSymbol& o) const {
    return GaussianSymbol(c_ * o.c_, A_ + o.A_, b_ + o.b_);
}

GaussianSymbol GaussianSymbol::translated(const VectorXd& a) const {
    const VectorXcd ac = a.cast<cplx>();
    const cplx extra = -0.5 * (ac.transpose() * A_ * ac)(0) - (b_.transpose() * ac)(0);
    return GaussianSymbol(c_ * std::exp(extra), A_, b_ + A_ * ac);
}

VectorXd GaussianSymbol::centre() const {
    return A_.real().ldlt().solve(b_.real());
}

MatrixXd GaussianSymbol::abs_covariance() const {
    return A_.real().inverse();
}

GridSymbol GaussianSymbol::to_grid(std::vector<Axis> axes) const {
    if (int(axes.size()) != dim()) throw validation_error("GaussianSymbol::to_grid: dim mismatch");
    return GridSymbol::sample(std::move(axes), [this](const VectorXd& x) { return evaluate(x); });
}

GaussianSymbol fourier(const GaussianSymbol& f) {
    const int d = f.dim();
    const MatrixXcd Ai = f.quadratic_form().inverse();
    const VectorXcd b = f.linear_term();
    const cplx quad = (b.transpose() * Ai * b)(0);
    const cplx c = f.amplitude() * std::pow(2.0 * pi, -0.5 * d) *
                   std::exp(-half_log_det(f.quadratic_form()) + 0.5 * quad);
    return GaussianSymbol(c, Ai, cplx(0, -1) * (Ai * b));
}

GaussianSymbol inverse_fourier(const GaussianSymbol& fk) {
    const int d = fk.dim();
    const MatrixXcd Ai = fk.quadratic_form().inverse();
    const VectorXcd b = fk.linear_term();
    const cplx quad = (b.transpose() * Ai * b)(0);
    const cplx c = fk.amplitude() * std::pow(2.0 * pi, 0.5 * d) *
                   std::exp(-half_log_det(fk.quadratic_form()) + 0.5 * quad);
    return GaussianSymbol(c, Ai, cplx(0, 1) * (Ai * b));
}

cplx l2_inner(const GaussianSymbol& u, const GaussianSymbol& v) {
    const int d = u.dim();
    if (v.dim() != d) throw validation_error("l2_inner: dim mismatch");
    const MatrixXcd M = u.quadratic_form().conjugate() + v.quadratic_form();
    const VectorXcd w = u.linear_term().conjugate() + v.linear_term();
    const cplx quad = (w.transpose() * M.inverse() * w)(0);
    return std::conj(u.amplitude()) * v.amplitude() * std::pow(2.0 * pi, 0.5 * d) *
           std::exp(-half_log_det(M) + 0.5 * quad);
}

double l2_norm(const GaussianSymbol& u) {
    return std::sqrt(std::max(0.0, l2_inner(u, u).real()));
}

namespace {

void require_antisymmetric(const MatrixXd& theta, int d, const char* who) {
    if (theta.rows() != d || theta.cols() != d)
        throw validation_error(std::string(who) + ": theta dimension mismatch");
    if ((theta + theta.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1 + theta.cwiseAbs().maxCoeff()))
        throw validation_error(std::string(who) + ": theta must be antisymmetric");
}

/// All intermediates of the closed-form twisted product; the b-parameter
/// derivatives of the output are linear expressions in these.
struct StarCore {
    MatrixXcd Afinv;   // A_f^{-1}
    MatrixXcd Minv;    // (A_f^{-1} + Sh^T A_g Sh)^{-1}
    MatrixXcd V;       // i I + Sh^T A_g
    MatrixXcd Sh;      // (Sh h)^nu = 1/2 h_mu theta^{mu nu}
    VectorXcd v0;      // b_fcheck - Sh^T b_g
    cplx log_extra;    // log of everything in c_out except c_f c_g
    MatrixXcd A_out;
    VectorXcd b_out;
    cplx c_out;
};

StarCore star_core(const GaussianSymbol& f, const GaussianSymbol& g, const MatrixXd& theta) {
    const int d = f.dim();
    if (g.dim() != d) throw validation_error("star_product: dim mismatch");
    require_antisymmetric(theta, d, "star_product");

    StarCore sc;
    sc.Sh = (0.5 * theta.transpose()).cast<cplx>();
    sc.Afinv = f.quadratic_form().inverse();
    const VectorXcd b_fcheck = cplx(0, -1) * (sc.Afinv * f.linear_term());
    const MatrixXcd M = sc.Afinv + sc.Sh.transpose() * g.quadratic_form() * sc.Sh;
    require_re_posdef(M, "star_product (twisted-convolution form)");
    sc.Minv = M.inverse();
    sc.V = cplx(0, 1) * MatrixXcd::Identity(d, d) + sc.Sh.transpose() * g.quadratic_form();
    sc.v0 = b_fcheck - sc.Sh.transpose() * g.linear_term();

    sc.A_out = g.quadratic_form() - sc.V.transpose() * sc.Minv * sc.V;
    sc.b_out = g.linear_term() + sc.V.transpose() * sc.Minv * sc.v0;

    // c_fcheck = c_f (2 pi)^{-d/2} det(A_f)^{-1/2} exp(1/2 b_f^T A_f^{-1} b_f);
    // the (2 pi)^{+-d/2} factors cancel against the h-integral.
    const cplx bAb = (f.linear_term().transpose() * sc.Afinv * f.linear_term())(0);
    const cplx vMv = (sc.v0.transpose() * sc.Minv * sc.v0)(0);
    sc.log_extra = -half_log_det(f.quadratic_form()) + 0.5 * bAb - half_log_det(M) + 0.5 * vMv;
    sc.c_out = f.amplitude() * g.amplitude() * std::exp(sc.log_extra);
    return sc;
}

}  // namespace

GaussianSymbol star_product(const GaussianSymbol& f, const GaussianSymbol& g,
                            const MatrixXd& theta) {
    StarCore sc = star_core(f, g, theta);
    if (min_re_eigenvalue(sc.A_out) <= 0)
        throw numeric_error("star_product: result lost Re-positivity (theta too large for these bandwidths)");
    return GaussianSymbol(sc.c_out, sc.A_out, sc.b_out);
}

GaussianSymbol pullback(const GaussianSymbol& f, const MatrixXd& lambda, const VectorXd& a) {
    const int d = f.dim();
    if (lambda.rows() != d || lambda.cols() != d || a.size() != d)
        throw validation_error("pullback: dimension mismatch");
    Eigen::PartialPivLU<MatrixXd> lu(lambda);
    if (std::abs(lu.determinant()) < 1e-12) throw validation_error("pullback: singular matrix");
    const MatrixXcd B = lu.inverse().cast<cplx>();
    const MatrixXcd A2 = B.transpose() * f.quadratic_form() * B;
    const VectorXcd ac = a.cast<cplx>();
    const VectorXcd Bb = B.transpose() * f.linear_term();
    const VectorXcd b2 = Bb + A2 * ac;
    const cplx extra = -0.5 * (ac.transpose() * A2 * ac)(0) - (Bb.transpose() * ac)(0);
    return GaussianSymbol(f.amplitude() * std::exp(extra), A2, b2);
}

PolyGaussian::PolyGaussian(std::map<std::vector<unsigned>, cplx> poly, GaussianSymbol base)
    : poly_(std::move(poly)), base_(std::move(base)) {
    for (const auto& [alpha, c] : poly_)
        if (int(alpha.size()) != base_.dim())
            throw validation_error("PolyGaussian: exponent dimension mismatch");
}

PolyGaussian::PolyGaussian(const GaussianSymbol& base)
    : PolyGaussian({{std::vector<unsigned>(size_t(base.dim()), 0u), cplx(1, 0)}}, base) {}

cplx PolyGaussian::evaluate(const VectorXd& x) const {
    cplx p = 0;
    for (const auto& [alpha, c] : poly_) {
        cplx mono = c;
        for (int k = 0; k < dim(); ++k)
            for (unsigned e = 0; e < alpha[size_t(k)]; ++e) mono *= x(k);
        p += mono;
    }
    return p * base_.evaluate(x);
}

namespace {

void poly_add(std::map<std::vector<unsigned>, cplx>& p, const std::vector<unsigned>& alpha, cplx c) {
    if (c == cplx(0, 0)) return;
    auto it = p.find(alpha);
    if (it == p.end())
        p.emplace(alpha, c);
    else {
        it->second += c;
        if (it->second == cplx(0, 0)) p.erase(it);
    }
}

}  // namespace

PolyGaussian PolyGaussian::derivative(int mu) const {
    // d_mu (p G) = (d_mu p) G + p (b - A x)_mu G
    std::map<std::vector<unsigned>, cplx> out;
    const MatrixXcd& A = base_.quadratic_form();
    const VectorXcd& b = base_.linear_term();
    for (const auto& [alpha, c] : poly_) {
        if (alpha[size_t(mu)] > 0) {
            std::vector<unsigned> down = alpha;
            down[size_t(mu)] -= 1;
            poly_add(out, down, c * double(alpha[size_t(mu)]));
        }
        poly_add(out, alpha, c * b(mu));
        for (int nu = 0; nu < dim(); ++nu) {
            std::vector<unsigned> up = alpha;
            up[size_t(nu)] += 1;
            poly_add(out, up, -c * A(mu, nu));
        }
    }
    return PolyGaussian(std::move(out), base_);
}

PolyGaussian PolyGaussian::pointwise(const PolyGaussian& o) const {
    std::map<std::vector<unsigned>, cplx> out;
    for (const auto& [a, ca] : poly_)
        for (const auto& [b, cb] : o.poly_) {
            std::vector<unsigned> s(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) s[k] = a[k] + b[k];
            poly_add(out, s, ca * cb);
        }
    return PolyGaussian(std::move(out), base_.pointwise(o.base_));
}

PolyGaussian PolyGaussian::scaled(cplx factor) const {
    return PolyGaussian(poly_, base_.scaled(factor));
}

PolyGaussian derivative(const GaussianSymbol& f, int mu) {
    return PolyGaussian(f).derivative(mu);
}

namespace {

PolyGaussian affine_times_star(const StarCore& sc, const GaussianSymbol& result, cplx constant,
                               const VectorXcd& linear) {
    std::map<std::vector<unsigned>, cplx> poly;
    poly_add(poly, std::vector<unsigned>(size_t(result.dim()), 0u), constant);
    for (int k = 0; k < result.dim(); ++k) {
        std::vector<unsigned> e(size_t(result.dim()), 0u);
        e[size_t(k)] = 1;
        poly_add(poly, e, linear(k));
    }
    (void)sc;
    return PolyGaussian(std::move(poly), result);
}

}  // namespace

PolyGaussian star_product(const PolyGaussian& lin, const GaussianSymbol& g, const MatrixXd& theta) {
    // ((l0 + l.x) f) star g = l0 (f star g) + sum_a l_a  d/d(b_f)_a (f star g)
    const GaussianSymbol& f = lin.base();
    const int d = f.dim();
    cplx l0 = 0;
    VectorXcd l = VectorXcd::Zero(d);
    for (const auto& [alpha, c] : lin.poly()) {
        int deg = 0, which = -1;
        for (int k = 0; k < d; ++k) {
            deg += int(alpha[size_t(k)]);
            if (alpha[size_t(k)] == 1) which = k;
        }
        if (deg == 0)
            l0 = c;
        else if (deg == 1)
            l(which) += c;
        else
            throw validation_error("star_product: prefactor degree must be <= 1");
    }
    StarCore sc = star_core(f, g, theta);
    GaussianSymbol base(sc.c_out, sc.A_out, sc.b_out);

    cplx constant = l0;
    VectorXcd linear = VectorXcd::Zero(d);
    for (int a = 0; a < d; ++a) {
        if (l(a) == cplx(0, 0)) continue;
        const VectorXcd w = cplx(0, -1) * sc.Afinv.col(a);
        const cplx dlogc = (sc.Afinv * f.linear_term())(a) + (sc.v0.transpose() * sc.Minv * w)(0);
        const VectorXcd dbout = sc.V.transpose() * (sc.Minv * w);
        constant += l(a) * dlogc;
        linear += l(a) * dbout;
    }
    return affine_times_star(sc, base, constant, linear);
}

PolyGaussian star_product(const GaussianSymbol& f, const PolyGaussian& lin, const MatrixXd& theta) {
    const GaussianSymbol& g = lin.base();
    const int d = g.dim();
    cplx l0 = 0;
    VectorXcd l = VectorXcd::Zero(d);
    for (const auto& [alpha, c] : lin.poly()) {
        int deg = 0, which = -1;
        for (int k = 0; k < d; ++k) {
            deg += int(alpha[size_t(k)]);
            if (alpha[size_t(k)] == 1) which = k;
        }
        if (deg == 0)
            l0 = c;
        else if (deg == 1)
            l(which) += c;
        else
            throw validation_error("star_product: prefactor degree must be <= 1");
    }
    StarCore sc = star_core(f, g, theta);
    GaussianSymbol base(sc.c_out, sc.A_out, sc.b_out);

    cplx constant = l0;
    VectorXcd linear = VectorXcd::Zero(d);
    for (int a = 0; a < d; ++a) {
        if (l(a) == cplx(0, 0)) continue;
        const VectorXcd u = -sc.Sh.transpose().col(a);
        const cplx dlogc = (sc.v0.transpose() * sc.Minv * u)(0);
        VectorXcd dbout = sc.V.transpose() * (sc.Minv * u);
        dbout(a) += 1.0;
        constant += l(a) * dlogc;
        linear += l(a) * dbout;
    }
    return affine_times_star(sc, base, constant, linear);
}

std::vector<PolyGaussian> moyal_product(const GaussianSymbol& f, const GaussianSymbol& g,
                                        const MatrixXd& theta, int order) {
    if (order < 0) throw validation_error("moyal_product: order must be >= 0");
    const int d = f.dim();
    require_antisymmetric(theta, d, "moyal_product");

    std::vector<PolyGaussian> out;
    std::vector<std::pair<PolyGaussian, PolyGaussian>> pairs;
    pairs.emplace_back(PolyGaussian(f), PolyGaussian(g));
    out.push_back(pairs[0].first.pointwise(pairs[0].second));

    cplx scale = 1.0;
    for (int j = 1; j <= order; ++j) {
        scale *= cplx(0, 0.5) / double(j);
        std::vector<std::pair<PolyGaussian, PolyGaussian>> next;
        for (const auto& [pf, pg] : pairs) {
            for (int mu = 0; mu < d; ++mu)
                for (int nu = 0; nu < d; ++nu) {
                    if (theta(mu, nu) == 0.0) continue;
                    next.emplace_back(pf.derivative(mu).scaled(theta(mu, nu)), pg.derivative(nu));
                }
        }
        pairs = std::move(next);
        for (const auto& [pf, pg] : pairs) out.push_back(pf.pointwise(pg).scaled(scale));
    }
    return out;
}

cplx evaluate_sum(const std::vector<PolyGaussian>& terms, const VectorXd& x) {
    cplx acc = 0;
    for (const PolyGaussian& t : terms) acc += t.evaluate(x);
    return acc;
}

ProbeCloud::ProbeCloud(const GaussianSymbol& ref, std::uint64_t seed, int npoints) {
    Rng rng(seed);
    const VectorXd m = ref.centre();
    Eigen::LLT<MatrixXd> llt(1.5 * ref.abs_covariance());
    const MatrixXd L = llt.matrixL();
    points.reserve(size_t(npoints));
    for (int i = 0; i < npoints; ++i) {
        VectorXd z(ref.dim());
        for (int k = 0; k < ref.dim(); ++k) z(k) = rng.normal();
        points.push_back(m + L * z);
    }
}

GaussianSymbol random_gaussian(int dim, Rng& rng, double spread) {
    MatrixXd R = MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) R(i, j) = 0.35 * rng.normal();
    MatrixXd re = R * R.transpose() + 0.6 * MatrixXd::Identity(dim, dim);
    MatrixXd im = MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) im(i, j) = im(j, i) = 0.2 * rng.normal();
    MatrixXcd A = (re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>()) / (spread * spread);
    VectorXcd b(dim);
    for (int i = 0; i < dim; ++i) b(i) = 0.4 * rng.normal_complex() / spread;
    const cplx c = std::exp(cplx(0.3 * rng.normal(), rng.uniform(0, 2 * pi) * 0.15));
    return GaussianSymbol(c, A, b);
}

}  // namespace qst::star
