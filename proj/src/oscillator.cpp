#include "qst/oscillator.hpp"

#include <cmath>

namespace qst::rep {

MatrixXcd ladder(int levels) {
    if (levels < 2) throw validation_error("ladder: need at least 2 levels");
    MatrixXcd a = MatrixXcd::Zero(levels, levels);
    for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

MatrixXcd position_op(int levels) {
    const MatrixXcd a = ladder(levels);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

MatrixXcd momentum_op(int levels) {
    const MatrixXcd a = ladder(levels);
    return cplx(0, 1) * (a.adjoint() - a) / std::sqrt(2.0);
}

SpMat to_sparse(const MatrixXcd& m, double prune) {
    SpMat s = m.sparseView(1.0, prune);
    s.makeCompressed();
    return s;
}

SpMat sparse_identity(long n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

SpMat sparse_kron(const SpMat& a, const SpMat& b) {
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(std::size_t(a.nonZeros()) * std::size_t(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
                    trip.emplace_back(ia.row() * b.rows() + ib.row(),
                                      ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

OscillatorSpace::OscillatorSpace(int modes_, int levels_, int n_safe_)
    : modes(modes_), levels(levels_), n_safe(n_safe_ < 0 ? levels_ / 2 : n_safe_) {
    if (modes < 1) throw validation_error("OscillatorSpace: need at least one mode");
    if (levels < 2) throw validation_error("OscillatorSpace: need at least 2 levels");
}

long OscillatorSpace::dim() const {
    long d = 1;
    for (int m = 0; m < modes; ++m) d *= levels;
    return d;
}

std::vector<int> OscillatorSpace::occupations(long index) const {
    std::vector<int> occ(static_cast<std::size_t>(modes));
    for (int m = modes - 1; m >= 0; --m) {
        occ[size_t(m)] = int(index % levels);
        index /= levels;
    }
    return occ;
}

SpMat OscillatorSpace::embed(const MatrixXcd& op, int mode) const {
    if (mode < 0 || mode >= modes) throw validation_error("OscillatorSpace::embed: bad mode");
    SpMat out = mode == 0 ? to_sparse(op) : sparse_identity(levels);
    for (int m = 1; m < modes; ++m) {
        out = sparse_kron(out, m == mode ? to_sparse(op) : sparse_identity(levels));
    }
    return out;
}

Eigen::ArrayXd OscillatorSpace::safe_mask(int cutoff) const {
    const int cut = cutoff < 0 ? n_safe : cutoff;
    Eigen::ArrayXd mask(dim());
    for (long i = 0; i < dim(); ++i) {
        bool safe = true;
        for (int occ : occupations(i))
            if (occ >= cut) safe = false;
        mask(i) = safe ? 1.0 : 0.0;
    }
    return mask;
}

double OscillatorSpace::safe_block_max(const SpMat& a, int cutoff) const {
    const Eigen::ArrayXd mask = safe_mask(cutoff);
    double worst = 0;
    for (int k = 0; k < a.outerSize(); ++k)
        for (SpMat::InnerIterator it(a, k); it; ++it)
            if (mask(it.row()) > 0 && mask(it.col()) > 0)
                worst = std::max(worst, std::abs(it.value()));
    return worst;
}

double OscillatorSpace::safe_block_max(const MatrixXcd& a, int cutoff) const {
    const Eigen::ArrayXd mask = safe_mask(cutoff);
    double worst = 0;
    for (long i = 0; i < a.rows(); ++i) {
        if (mask(i) == 0) continue;
        for (long j = 0; j < a.cols(); ++j)
            if (mask(j) > 0) worst = std::max(worst, std::abs(a(i, j)));
    }
    return worst;
}

double max_abs(const SpMat& a) {
    double worst = 0;
    for (int k = 0; k < a.outerSize(); ++k)
        for (SpMat::InnerIterator it(a, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

double max_abs(const MatrixXcd& a) { return a.cwiseAbs().maxCoeff(); }

MatrixXcd exp_i_hermitian(const MatrixXcd& h) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * (1 + h.cwiseAbs().maxCoeff()))
        throw validation_error("exp_i_hermitian: input not Hermitian");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    VectorXcd phases(h.rows());
    for (long i = 0; i < h.rows(); ++i) phases(i) = std::exp(cplx(0, es.eigenvalues()(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qst::rep
