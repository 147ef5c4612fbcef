#include "qst/quantum_state.hpp"

#include <cmath>

namespace qst::loc {

QuantumState::QuantumState(OscillatorSpace space, VectorXcd psi, MatrixXcd rho)
    : space_(space), psi_(std::move(psi)), rho_(std::move(rho)) {}

QuantumState QuantumState::vector(OscillatorSpace space, VectorXcd psi) {
    if (psi.size() != space.dim()) throw validation_error("QuantumState: vector dim mismatch");
    const double n = psi.norm();
    if (n < 1e-14) throw validation_error("QuantumState: zero vector");
    return QuantumState(space, psi / n, MatrixXcd());
}

QuantumState QuantumState::density(OscillatorSpace space, MatrixXcd rho) {
    if (rho.rows() != space.dim() || rho.cols() != space.dim())
        throw validation_error("QuantumState: density dim mismatch");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw validation_error("QuantumState: density not Hermitian");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw validation_error("QuantumState: density not positive semidefinite");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) rho /= tr;
    return QuantumState(space, VectorXcd(), std::move(rho));
}

QuantumState QuantumState::vacuum(const OscillatorSpace& space) {
    VectorXcd psi = VectorXcd::Zero(space.dim());
    psi(0) = 1.0;
    return vector(space, std::move(psi));
}

QuantumState QuantumState::coherent(const OscillatorSpace& space, const std::vector<cplx>& alpha) {
    if (int(alpha.size()) != space.modes)
        throw validation_error("coherent: one amplitude per mode required");
    for (const cplx& a : alpha) {
        if (std::norm(a) > space.n_safe / 4.0)
            throw validation_error("coherent: |alpha|^2 exceeds n_safe/4 for this truncation");
    }
    VectorXcd psi = VectorXcd::Zero(space.dim());
    psi(0) = 1.0;
    const MatrixXcd a = rep::ladder(space.levels);
    for (int m = 0; m < space.modes; ++m) {
        // displacement: exp(alpha a^dag - conj(alpha) a) = exp(i H), H Hermitian
        const MatrixXcd gen = alpha[size_t(m)] * a.adjoint() - std::conj(alpha[size_t(m)]) * a;
        const MatrixXcd D = rep::exp_i_hermitian(cplx(0, -1) * gen);
        psi = MatrixXcd(space.embed(D, m)) * psi;
    }
    return vector(space, std::move(psi));
}

QuantumState QuantumState::squeezed(const OscillatorSpace& space, const std::vector<double>& r) {
    if (int(r.size()) != space.modes)
        throw validation_error("squeezed: one parameter per mode required");
    VectorXcd psi = VectorXcd::Zero(space.dim());
    psi(0) = 1.0;
    const MatrixXcd a = rep::ladder(space.levels);
    const MatrixXcd a2 = a * a;
    for (int m = 0; m < space.modes; ++m) {
        const MatrixXcd gen = 0.5 * r[size_t(m)] * (a2 - a2.adjoint());
        const MatrixXcd S = rep::exp_i_hermitian(cplx(0, -1) * gen);
        psi = MatrixXcd(space.embed(S, m)) * psi;
    }
    return vector(space, std::move(psi));
}

QuantumState QuantumState::random_safe(const OscillatorSpace& space, Rng& rng, int cutoff) {
    const Eigen::ArrayXd mask = space.safe_mask(cutoff);
    VectorXcd psi = VectorXcd::Zero(space.dim());
    for (long i = 0; i < space.dim(); ++i)
        if (mask(i) > 0) psi(i) = rng.normal_complex();
    return vector(space, std::move(psi));
}

cplx QuantumState::expectation(const MatrixXcd& a) const {
    if (is_vector()) return psi_.dot(a * psi_);
    return (rho_ * a).trace();
}

cplx QuantumState::expectation(const SpMat& a) const {
    if (is_vector()) return psi_.dot(a * psi_);
    return (rho_ * MatrixXcd(a)).trace();
}

QuantumState QuantumState::projected(int cutoff) const {
    const Eigen::ArrayXd mask = space_.safe_mask(cutoff);
    if (is_vector()) {
        VectorXcd psi = psi_;
        for (long i = 0; i < psi.size(); ++i)
            if (mask(i) == 0) psi(i) = 0;
        return vector(space_, std::move(psi));
    }
    MatrixXcd rho = rho_;
    for (long i = 0; i < rho.rows(); ++i)
        for (long j = 0; j < rho.cols(); ++j)
            if (mask(i) == 0 || mask(j) == 0) rho(i, j) = 0;
    return density(space_, std::move(rho));
}

double QuantumState::leakage(int cutoff) const {
    const Eigen::ArrayXd mask = space_.safe_mask(cutoff);
    double leak = 0;
    if (is_vector()) {
        for (long i = 0; i < psi_.size(); ++i)
            if (mask(i) == 0) leak += std::norm(psi_(i));
    } else {
        for (long i = 0; i < rho_.rows(); ++i)
            if (mask(i) == 0) leak += rho_(i, i).real();
    }
    return leak;
}

int QuantumState::max_occupation(double tol) const {
    int worst = 0;
    for (long i = 0; i < space_.dim(); ++i) {
        const double w = is_vector() ? std::norm(psi_(i)) : rho_(i, i).real();
        if (w > tol) {
            for (int occ : space_.occupations(i)) worst = std::max(worst, occ);
        }
    }
    return worst;
}

namespace {

void require_hermitian(const MatrixXcd& a, const char* who) {
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * (1 + a.cwiseAbs().maxCoeff()))
        throw validation_error(std::string(who) + ": operator must be Hermitian");
}

}  // namespace

double uncertainty(const QuantumState& omega, const MatrixXcd& a) {
    require_hermitian(a, "uncertainty");
    const double mean = omega.expectation(a).real();
    const double second = omega.expectation(MatrixXcd(a * a)).real();
    return std::sqrt(std::max(0.0, second - mean * mean));
}

double uncertainty(const QuantumState& omega, const SpMat& a) {
    const double mean = omega.expectation(a).real();
    const double second = omega.expectation(SpMat(a * a)).real();
    return std::sqrt(std::max(0.0, second - mean * mean));
}

HeisenbergReport heisenberg_check(const QuantumState& omega, const MatrixXcd& a,
                                  const MatrixXcd& b) {
    require_hermitian(a, "heisenberg_check");
    require_hermitian(b, "heisenberg_check");
    HeisenbergReport rep;
    rep.delta_a = uncertainty(omega, a);
    rep.delta_b = uncertainty(omega, b);
    rep.bound = 0.5 * std::abs(omega.expectation(MatrixXcd(a * b - b * a)));
    rep.slack = rep.delta_a * rep.delta_b - rep.bound;
    const double scale =
        std::max(1.0, a.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff());
    rep.pass = rep.slack >= -1e-10 * scale;
    return rep;
}

}  // namespace qst::loc
