#include "qst/events.hpp"

#include <cmath>
#include <functional>

#include "qst/core.hpp"

namespace qst::loc {

EventSystem::EventSystem(const Eigen::Matrix4d& lambda, double length_scale, int levels, int n)
    : n_(n), space_(2 * n, levels), lambda_(lambda), length_scale_(length_scale) {
    if (n < 1 || n > 5) throw validation_error("EventSystem: 1 <= n <= 5");
    if (space_.dim() > (1L << 22))
        throw numeric_error("EventSystem: tensor dimension exceeds the memory cap");
    q_.resize(size_t(n));
    for (int j = 0; j < n; ++j) {
        // X of event j on modes (2j, 2j+1)
        std::array<SpMat, 4> x{space_.mode_p(2 * j), space_.mode_p(2 * j + 1),
                               space_.mode_q(2 * j), space_.mode_q(2 * j + 1)};
        for (int mu = 0; mu < 4; ++mu) {
            SpMat acc(space_.dim(), space_.dim());
            for (int nu = 0; nu < 4; ++nu) {
                if (lambda_(mu, nu) == 0.0) continue;
                acc = SpMat(acc + cplx(length_scale_ * lambda_(mu, nu), 0) * x[size_t(nu)]);
            }
            q_[size_t(j)][size_t(mu)] = acc;
        }
    }
}

Eigen::Matrix4d EventSystem::theta() const {
    return length_scale_ * length_scale_ * lambda_ * core::sigma_standard().matrix() *
           lambda_.transpose();
}

const SpMat& EventSystem::q(int event, int mu) const {
    if (event < 1 || event > n_ || mu < 0 || mu > 3)
        throw validation_error("EventSystem::q: index out of range");
    return q_[size_t(event - 1)][size_t(mu)];
}

SpMat EventSystem::separation(int j, int k, int mu) const { return SpMat(q(j, mu) - q(k, mu)); }

SpMat EventSystem::barycentre(int mu) const {
    SpMat acc(space_.dim(), space_.dim());
    for (int j = 1; j <= n_; ++j) acc = SpMat(acc + q(j, mu));
    return SpMat(acc / double(n_));
}

SeparationReport separation_and_barycenter(const EventSystem& ev) {
    if (ev.events() < 2) throw validation_error("separation_and_barycenter: need n >= 2");
    SeparationReport rep;
    const Eigen::Matrix4d th = ev.theta();
    const SpMat id = rep::sparse_identity(ev.space().dim());

    // commutators of the first pair, kept for the pair-independence check
    std::array<std::array<SpMat, 4>, 4> first;
    for (int j = 1; j <= ev.events(); ++j)
        for (int k = j + 1; k <= ev.events(); ++k) {
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = mu + 1; nu < 4; ++nu) {
                    SpMat comm = rep::commutator(ev.separation(j, k, mu), ev.separation(j, k, nu));
                    SpMat defect = SpMat(comm - cplx(0, 2.0 * th(mu, nu)) * id);
                    rep.separation_residual =
                        std::max(rep.separation_residual, ev.space().safe_block_max(defect));
                    if (j == 1 && k == 2) {
                        first[size_t(mu)][size_t(nu)] = comm;
                    } else {
                        rep.pair_independence = std::max(
                            rep.pair_independence,
                            ev.space().safe_block_max(SpMat(comm - first[size_t(mu)][size_t(nu)])));
                    }
                }
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu) {
                    rep.cross_event_commutator =
                        std::max(rep.cross_event_commutator,
                                 rep::max_abs(rep::commutator(ev.q(j, mu), ev.q(k, nu))));
                }
        }
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            rep.barycentre_residual = std::max(
                rep.barycentre_residual,
                ev.space().safe_block_max(rep::commutator(ev.barycentre(mu), ev.separation(1, 2, nu))));
    return rep;
}

SeparationSpectrum separation_distance_spectrum(const EventSystem& ev, bool compute_full) {
    if (ev.events() != 2)
        throw validation_error("separation_distance_spectrum: defined for n = 2");
    SpMat acc(ev.space().dim(), ev.space().dim());
    for (int mu = 0; mu < 4; ++mu) {
        SpMat d = ev.separation(2, 1, mu);
        acc = SpMat(acc + SpMat(d * d));
    }

    // exact sector: occupation of each corresponding-mode pair <= levels - 2
    const int cap = ev.space().levels - 2;
    std::vector<long> keep;
    for (long i = 0; i < ev.space().dim(); ++i) {
        const std::vector<int> occ = ev.space().occupations(i);
        if (occ[0] + occ[2] <= cap && occ[1] + occ[3] <= cap) keep.push_back(i);
    }
    MatrixXcd dense = MatrixXcd(acc);
    MatrixXcd sub(long(keep.size()), long(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t c = 0; c < keep.size(); ++c) sub(long(r), long(c)) = dense(keep[r], keep[c]);

    SeparationSpectrum out;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sub, Eigen::EigenvaluesOnly);
    out.exact_sector = es.eigenvalues();
    if (compute_full) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> ef(dense, Eigen::EigenvaluesOnly);
        out.full = ef.eigenvalues();
        const double floor = out.exact_sector(0) - 1e-9;
        for (long i = 0; i < out.full.size(); ++i)
            if (out.full(i) < floor) ++out.artifacts_below_bound;
    }
    return out;
}

SpMat volume_operator(const EventSystem& ev) {
    if (ev.events() != 5) throw validation_error("volume_operator: needs n = 5");
    const long dim = ev.space().dim();
    std::array<std::array<SpMat, 4>, 4> d;  // d[i] = q_{i+2} - q_{i+1}
    for (int i = 0; i < 4; ++i)
        for (int mu = 0; mu < 4; ++mu) d[size_t(i)][size_t(mu)] = ev.separation(i + 2, i + 1, mu);

    SpMat v(dim, dim);
    int idx[4];
    for (idx[0] = 0; idx[0] < 4; ++idx[0])
        for (idx[1] = 0; idx[1] < 4; ++idx[1])
            for (idx[2] = 0; idx[2] < 4; ++idx[2])
                for (idx[3] = 0; idx[3] < 4; ++idx[3]) {
                    // sign of the permutation; zero on repeats
                    int perm[4] = {idx[0], idx[1], idx[2], idx[3]};
                    int sign = 1;
                    bool repeat = false;
                    for (int i = 0; i < 4 && !repeat; ++i)
                        for (int j = i + 1; j < 4; ++j) {
                            if (perm[i] == perm[j]) {
                                repeat = true;
                                break;
                            }
                            if (perm[i] > perm[j]) sign = -sign;
                        }
                    if (repeat) continue;
                    SpMat term = SpMat(d[0][size_t(idx[0])] * d[1][size_t(idx[1])]);
                    term = SpMat(term * d[2][size_t(idx[2])]);
                    term = SpMat(term * d[3][size_t(idx[3])]);
                    v = SpMat(v + double(sign) * term);
                }
    v = SpMat(v.pruned(cplx(1e-300, 0)));
    return v;
}

namespace {

/// Lanczos with full reorthogonalisation; returns Ritz values (ascending)
/// and the residual of the requested extreme Ritz pair.
struct LanczosResult {
    Eigen::VectorXd ritz;
    double residual_smallest = 0;
    double residual_largest = 0;
    int iterations = 0;
};

LanczosResult lanczos(const std::function<VectorXcd(const VectorXcd&)>& apply, long dim,
                      int iterations, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<VectorXcd> basis;
    VectorXcd v(dim);
    for (long i = 0; i < dim; ++i) v(i) = rng.normal_complex();
    v.normalize();
    basis.push_back(v);

    std::vector<double> alpha, beta;
    VectorXcd w;
    int k = 0;
    for (; k < iterations; ++k) {
        w = apply(basis.back());
        const double a = basis.back().dot(w).real();
        alpha.push_back(a);
        w -= a * basis.back();
        if (k > 0) w -= beta.back() * basis[size_t(k - 1)];
        // full reorthogonalisation
        for (const VectorXcd& b : basis) w -= b.dot(w) * b;
        const double nb = w.norm();
        if (nb < 1e-12) break;
        beta.push_back(nb);
        basis.push_back(w / nb);
    }
    const int m = int(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        tri(i, i) = alpha[size_t(i)];
        if (i + 1 < m && i < int(beta.size())) tri(i, i + 1) = tri(i + 1, i) = beta[size_t(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    LanczosResult out;
    out.ritz = es.eigenvalues();
    out.iterations = m;
    // residuals of the extreme Ritz pairs
    VectorXcd y = VectorXcd::Zero(dim), z = VectorXcd::Zero(dim);
    for (int i = 0; i < m && i < int(basis.size()); ++i) {
        y += es.eigenvectors()(i, 0) * basis[size_t(i)];
        z += es.eigenvectors()(i, m - 1) * basis[size_t(i)];
    }
    y.normalize();
    z.normalize();
    out.residual_smallest = (apply(y) - out.ritz(0) * y).norm();
    out.residual_largest = (apply(z) - out.ritz(m - 1) * z).norm();
    return out;
}

}  // namespace

VolumeProbe volume_gap_probe(const EventSystem& ev, int iterations, std::uint64_t seed) {
    SpMat v = volume_operator(ev);
    SpMat vh = SpMat(0.5 * (v + SpMat(v.adjoint())));
    VolumeProbe probe;
    probe.dim = ev.space().dim();
    probe.hermitian_part_defect = rep::max_abs(SpMat(vh - SpMat(vh.adjoint())));

    auto apply_vh = [&vh](const VectorXcd& x) { return VectorXcd(vh * x); };

    LanczosResult ext = lanczos(apply_vh, probe.dim, iterations, seed);
    probe.largest_magnitude =
        std::max(std::abs(ext.ritz(0)), std::abs(ext.ritz(ext.ritz.size() - 1)));

    // smallest |eig(V_H)| via the spectral end of c - V_H^2: Lanczos converges
    // at extremes, and c I - V_H^2 puts the wanted value there
    const double c = 1.02 * probe.largest_magnitude * probe.largest_magnitude + 1.0;
    auto apply_shift = [&vh, c](const VectorXcd& x) {
        return VectorXcd(c * x - vh * (vh * x));
    };
    LanczosResult sq = lanczos(apply_shift, probe.dim, iterations, seed + 1);
    const double top = sq.ritz(sq.ritz.size() - 1);
    probe.smallest_magnitude = std::sqrt(std::max(0.0, c - top));
    probe.solver_residual = sq.residual_largest;
    probe.lanczos_iterations = sq.iterations;
    return probe;
}

Eigen::VectorXcd classical_volume_diagonal(
    const std::vector<std::array<Eigen::Vector4d, 5>>& pts) {
    Eigen::VectorXcd out(long(pts.size()));
    for (std::size_t s = 0; s < pts.size(); ++s) {
        Eigen::Matrix4d m;
        for (int i = 0; i < 4; ++i) m.col(i) = pts[s][size_t(i + 1)] - pts[s][size_t(i)];
        // eps_{mu nu rho sig} a^mu b^nu c^rho e^sig = det[a b c d] with columns in order
        out(long(s)) = m.determinant();
    }
    return out;
}

}  // namespace qst::loc
