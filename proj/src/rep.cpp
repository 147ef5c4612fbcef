#include "qst/rep.hpp"

#include <cmath>

#include "qst/core.hpp"

namespace qst::rep {

std::pair<MatrixXcd, MatrixXcd> schrodinger_pair(int levels) {
    if (levels < 4) throw validation_error("schrodinger_pair: need at least 4 levels");
    return {momentum_op(levels), position_op(levels)};
}

BasicQuadruple build_X(int levels) {
    if (levels < 4) throw validation_error("build_X: need at least 4 levels");
    OscillatorSpace space(2, levels);
    BasicQuadruple out{space, {space.mode_p(0), space.mode_p(1), space.mode_q(0), space.mode_q(1)}};
    return out;
}

Matrix4d DFRCoordinates::theta() const {
    const Matrix4d S = core::sigma_standard().matrix();
    return length_scale * length_scale * lambda_matrix * S * lambda_matrix.transpose();
}

double DFRCoordinates::commutator_residual() const {
    const Matrix4d th = theta();
    const SpMat id = sparse_identity(space.dim());
    double worst = 0;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
            SpMat defect = commutator(q[size_t(mu)], q[size_t(nu)]) - cplx(0, th(mu, nu)) * id;
            worst = std::max(worst, space.safe_block_max(SpMat(defect)));
        }
    return worst;
}

DFRCoordinates build_coordinates(const Matrix4d& lambda, double length_scale, int levels) {
    if (!(length_scale > 0)) throw validation_error("build_coordinates: length scale must be positive");
    BasicQuadruple bx = build_X(levels);
    DFRCoordinates out{bx.space, {}, lambda, length_scale};
    for (int mu = 0; mu < 4; ++mu) {
        SpMat acc(bx.space.dim(), bx.space.dim());
        for (int nu = 0; nu < 4; ++nu) {
            if (lambda(mu, nu) == 0.0) continue;
            acc = SpMat(acc + cplx(length_scale * lambda(mu, nu), 0) * bx.x[size_t(nu)]);
        }
        out.q[size_t(mu)] = acc;
    }
    return out;
}

TranslationGenerators build_pi(int levels) {
    if (levels < 4) throw validation_error("build_pi: need at least 4 levels");
    if (levels > 12) throw numeric_error("build_pi: four-mode dimension cap (levels <= 12)");
    OscillatorSpace space(4, levels);
    TranslationGenerators out{space, {}, {}, {}};
    // X on modes 1, 2
    out.x = {space.mode_p(0), space.mode_p(1), space.mode_q(0), space.mode_q(1)};
    // Pairwise commuting generators with [Pi^mu, X^nu] = -i g^{mu nu} I.
    // The auxiliary-pair table is written for the [P_j, Q_k] = +i delta
    // convention; under our global [P,Q] = -i convention the signs of the
    // mode-1,2 terms flip.
    out.pi_lower[0] = SpMat(space.mode_q(2) - space.mode_q(0));
    out.pi_lower[1] = SpMat(space.mode_q(3) - space.mode_q(1));
    out.pi_lower[2] = SpMat(space.mode_p(0) + space.mode_p(2));
    out.pi_lower[3] = SpMat(space.mode_p(1) + space.mode_p(3));
    for (int mu = 0; mu < 4; ++mu)
        out.pi_upper[size_t(mu)] = mu == 0 ? out.pi_lower[0] : SpMat(-out.pi_lower[size_t(mu)]);
    return out;
}

UniversalXi universal_xi(int levels) {
    if (levels < 4) throw validation_error("universal_xi: need at least 4 levels");
    if (levels > 16) throw numeric_error("universal_xi: three-mode dimension cap (levels <= 16)");
    OscillatorSpace space(3, levels);
    UniversalXi out{space, {}, Matrix4d::Zero()};
    out.xi[0] = space.mode_q(1);
    out.xi[1] = space.mode_p(0);
    out.xi[2] = space.mode_q(0);
    out.xi[3] = SpMat(space.mode_p(0) + space.mode_q(0) + space.mode_q(2));
    // (a,b,c) = (1,1,-1)
    const double a = 1, b = 1, c = -1;
    out.theta(1, 2) = -a;
    out.theta(2, 1) = a;
    out.theta(1, 3) = -b;
    out.theta(3, 1) = b;
    out.theta(2, 3) = -c;
    out.theta(3, 2) = c;
    return out;
}

namespace {

/// Mode factors of exp(i k.q): k.q = lambda (Lambda^T k).X splits as
/// (u0 P + u2 Q) on mode 1 and (u1 P + u3 Q) on mode 2.
std::pair<MatrixXcd, MatrixXcd> weyl_mode_factors(const Vector4d& k,
                                                  const DFRCoordinates& coords) {
    const Vector4d u = coords.length_scale * (coords.lambda_matrix.transpose() * k);
    const int n = coords.space.levels;
    const MatrixXcd P = momentum_op(n), Q = position_op(n);
    return {exp_i_hermitian(u(0) * P + u(2) * Q), exp_i_hermitian(u(1) * P + u(3) * Q)};
}

MatrixXcd dense_kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

MatrixXcd weyl_operator(const Vector4d& k, const DFRCoordinates& coords) {
    auto [w1, w2] = weyl_mode_factors(k, coords);
    return dense_kron(w1, w2);
}

cplx weyl_composition_phase(const Vector4d& k, const Vector4d& h, const Matrix4d& theta) {
    return std::exp(cplx(0, -0.5 * k.dot(theta * h)));
}

MatrixXcd weyl_quantize(const std::function<cplx(const Vector4d&)>& fourier_coeff,
                        const DFRCoordinates& coords, const KGrid& kgrid) {
    Eigen::FullPivLU<Matrix4d> lu(coords.lambda_matrix);
    if (!lu.isInvertible())
        throw validation_error("weyl_quantize: needs an invertible coordinate matrix");
    const Matrix4d lam_inv_T = lu.inverse().transpose();

    const int n = coords.space.levels;
    const int m = kgrid.points;
    const double dk = kgrid.extent / m;
    const double cell = dk * dk * dk * dk;  // |det Lambda| = 1 not assumed; folded below
    const double jac = std::abs(lu.determinant());

    const MatrixXcd P = momentum_op(n), Q = position_op(n);
    auto uval = [&](int t) { return -0.5 * kgrid.extent + (t + 0.5) * dk; };

    // cache the mode-2 factors over the (u1, u3) plane
    std::vector<MatrixXcd> w2(std::size_t(m) * std::size_t(m));
    for (int t1 = 0; t1 < m; ++t1)
        for (int t3 = 0; t3 < m; ++t3)
            w2[std::size_t(t1) * m + t3] =
                exp_i_hermitian(coords.length_scale * (uval(t1) * P + uval(t3) * Q));

    MatrixXcd out = MatrixXcd::Zero(coords.space.dim(), coords.space.dim());
    MatrixXcd bsum(n, n);
    for (int t0 = 0; t0 < m; ++t0)
        for (int t2 = 0; t2 < m; ++t2) {
            bsum.setZero();
            Vector4d u;
            for (int t1 = 0; t1 < m; ++t1)
                for (int t3 = 0; t3 < m; ++t3) {
                    u << uval(t0), uval(t1), uval(t2), uval(t3);
                    const cplx coeff = fourier_coeff(lam_inv_T * u);
                    if (coeff == cplx(0, 0)) continue;
                    bsum += coeff * w2[std::size_t(t1) * m + t3];
                }
            const MatrixXcd w1 =
                exp_i_hermitian(coords.length_scale * (uval(t0) * P + uval(t2) * Q));
            out += dense_kron(w1, bsum);
        }
    return out * (cell / jac);
}

MatrixXcd weyl_quantize(const star::GaussianSymbol& f, const DFRCoordinates& coords,
                        const KGrid& kgrid) {
    if (f.dim() != 4) throw validation_error("weyl_quantize: symbol must have dimension 4");
    const star::GaussianSymbol fk = star::fourier(f);
    return weyl_quantize([&fk](const Vector4d& k) { return fk.evaluate(k); }, coords, kgrid);
}

namespace {

/// Permutations of the spatial labels bringing a nonzero parameter into the
/// leading slot; each maps (a,b,c) to the parameters seen after relabeling.
struct SpatialPerm {
    std::array<int, 3> images;  // x^{i} -> x^{images[i-1]}
    double a2, b2, c2;
};

SpatialPerm leading_permutation(double a, double b, double c) {
    if (a != 0) return {{1, 2, 3}, a, b, c};
    if (b != 0) return {{3, 1, 2}, -b, -c, a};  // x1'=x3, x2'=x1, x3'=x2
    return {{2, 3, 1}, c, -a, -b};              // x1'=x2, x2'=x3, x3'=x1
}

}  // namespace

ClassifyReport timespace_classify(double a, double b, double c, int levels) {
    ClassifyReport rep;
    rep.a = a;
    rep.b = b;
    rep.c = c;
    const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
    rep.tolerance = 1e-10 * scale;
    rep.paper_conditions = std::abs(c + a * b) <= 1e-12 && std::abs(c + b) <= 1e-12;

    Matrix4d theta = Matrix4d::Zero();
    theta(1, 2) = -a;
    theta(2, 1) = a;
    theta(1, 3) = -b;
    theta(3, 1) = b;
    theta(2, 3) = -c;
    theta(3, 2) = c;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) rep.target[size_t(mu)][size_t(nu)] = theta(mu, nu);

    OscillatorSpace space(1, levels);
    std::array<SpMat, 4> x;
    if (a == 0 && b == 0 && c == 0) {
        rep.abelian = true;
        // commuting diagonal coordinates
        MatrixXcd diag = MatrixXcd::Zero(levels, levels);
        for (int i = 0; i < levels; ++i) diag(i, i) = i;
        x[0] = to_sparse(MatrixXcd::Identity(levels, levels));
        for (int j = 1; j < 4; ++j) x[size_t(j)] = to_sparse(double(j) * diag);
        rep.note = "abelian branch: four commuting diagonal coordinates";
    } else {
        const SpatialPerm perm = leading_permutation(a, b, c);
        const double a2 = perm.a2, b2 = perm.b2, c2 = perm.c2;
        // Schur reduction in the permuted labels: x0 = q I, x1 = P, x2 = a Q;
        // the central combination c x1 - b x2 + a x3 pinned to a scalar gives
        // x3 = (t I - c x1 + b x2)/a  (scalars q, t taken 0).
        auto [P, Q] = schrodinger_pair(levels);
        std::array<SpMat, 4> xp;
        xp[0] = SpMat(long(levels), long(levels));  // q = 0
        xp[1] = to_sparse(P);
        xp[2] = to_sparse(a2 * Q);
        xp[3] = SpMat((-c2 / a2) * xp[1] + (b2 / a2) * xp[2]);
        // undo the relabeling
        x[0] = xp[0];
        for (int i = 1; i <= 3; ++i) x[size_t(perm.images[size_t(i - 1)])] = xp[size_t(i)];
        rep.note = "schur reduction with the central combination pinned to a scalar";
    }

    const SpMat id = sparse_identity(space.dim());
    double worst = 0;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            if (nu == mu) continue;
            SpMat comm = commutator(x[size_t(mu)], x[size_t(nu)]);
            // measured theta: Im of the safe-block commutator coefficient
            double meas = 0;
            {
                const Eigen::ArrayXd mask = space.safe_mask();
                for (int k = 0; k < comm.outerSize(); ++k)
                    for (SpMat::InnerIterator it(comm, k); it; ++it)
                        if (it.row() == it.col() && mask(it.row()) > 0)
                            meas = it.value().imag();
            }
            rep.measured[size_t(mu)][size_t(nu)] = meas;
            SpMat defect = SpMat(comm - cplx(0, theta(mu, nu)) * id);
            worst = std::max(worst, space.safe_block_max(defect));
        }
    rep.residual = worst;
    rep.verified = worst <= rep.tolerance;
    rep.discrepancy = rep.verified != rep.paper_conditions;
    if (rep.discrepancy) {
        rep.note += "; measured verdict differs from the printed consistency conditions "
                    "(c = -ab and c = -b): the central combination c x1 - b x2 + a x3 "
                    "commutes with everything for every (a,b,c), so the reduction "
                    "succeeds whenever some parameter is nonzero";
    }
    return rep;
}

SweepSummary classify_sweep(int span, int den, int levels) {
    if (span < 1 || den < 1) throw validation_error("classify_sweep: bad lattice parameters");
    SweepSummary s;
    for (int i = -span; i <= span; ++i)
        for (int j = -span; j <= span; ++j)
            for (int k = -span; k <= span; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                ClassifyReport r = timespace_classify(double(i) / den, double(j) / den,
                                                      double(k) / den, levels);
                ++s.total;
                if (r.verified) ++s.verified;
                if (r.paper_conditions) ++s.paper_condition_holds;
                if (r.discrepancy) ++s.discrepancies;
                s.worst_residual = std::max(s.worst_residual, r.residual);
            }
    return s;
}

}  // namespace qst::rep
