#include "qst/bundle.hpp"

#include <cmath>

namespace qst::bundle {

SigmaSample::SigmaSample(core::Orbit orbit, std::vector<SamplePoint> points, double tol)
    : orbit_(orbit), points_(std::move(points)) {
    if (points_.empty()) throw validation_error("SigmaSample: empty sample");
    for (const SamplePoint& p : points_) {
        if (p.weight < 0) throw validation_error("SigmaSample: negative weight");
        if (!core::is_in_orbit(p.sigma, orbit_, tol))
            throw validation_error("SigmaSample: point outside the declared orbit");
    }
}

SigmaSample SigmaSample::rotations(int count, std::uint64_t seed) {
    std::vector<SamplePoint> pts;
    const SigmaPoint S = core::sigma_standard();
    for (int i = 0; i < count; ++i) {
        core::PoincareTransform R = core::random_rotation(seed + std::uint64_t(i));
        pts.push_back({core::lorentz_act_sigma(R, S), 1.0, R.lambda()});
    }
    return SigmaSample(core::Orbit::Sigma1, std::move(pts));
}

SigmaSample SigmaSample::boosts(int count, std::uint64_t seed, double rapidity_max) {
    std::vector<SamplePoint> pts;
    const SigmaPoint S = core::sigma_standard();
    for (int i = 0; i < count; ++i) {
        core::PoincareTransform L = core::random_lorentz(seed + std::uint64_t(i), rapidity_max);
        pts.push_back({core::lorentz_act_sigma(L, S), 1.0, L.lambda()});
    }
    return SigmaSample(core::Orbit::Sigma, std::move(pts));
}

SigmaSample SigmaSample::single(const SigmaPoint& sigma, const Matrix4d& generator,
                                core::Orbit orbit) {
    return SigmaSample(orbit, {SamplePoint{sigma, 1.0, generator}});
}

std::vector<double> SigmaSample::normalized_weights() const {
    double total = 0;
    for (const SamplePoint& p : points_) total += p.weight;
    if (total <= 0) throw validation_error("SigmaSample: weights sum to zero");
    std::vector<double> w;
    w.reserve(points_.size());
    for (const SamplePoint& p : points_) w.push_back(p.weight / total);
    return w;
}

bool SigmaSample::compatible(const SigmaSample& other, double tol) const {
    if (size() != other.size()) return false;
    for (int i = 0; i < size(); ++i) {
        if ((point(i).sigma.matrix() - other.point(i).sigma.matrix()).cwiseAbs().maxCoeff() > tol)
            return false;
    }
    return true;
}

Fiber Fiber::constant(cplx value) {
    Fiber f;
    f.constant_ = value;
    return f;
}

Fiber Fiber::gaussian(star::GaussianSymbol g) { return sum({std::move(g)}); }

Fiber Fiber::sum(std::vector<star::GaussianSymbol> terms) {
    if (terms.empty()) throw validation_error("Fiber: empty sum");
    for (const auto& t : terms)
        if (t.dim() != 4) throw validation_error("Fiber: fibres live on R^4");
    Fiber f;
    f.terms_ = std::move(terms);
    return f;
}

cplx Fiber::constant_value() const {
    if (!is_constant()) throw validation_error("Fiber: not a constant fibre");
    return constant_;
}

const std::vector<star::GaussianSymbol>& Fiber::terms() const {
    if (is_constant()) throw validation_error("Fiber: constant fibre has no terms");
    return *terms_;
}

Fiber Fiber::conj() const {
    if (is_constant()) return constant(std::conj(constant_));
    std::vector<star::GaussianSymbol> out;
    out.reserve(terms_->size());
    for (const auto& t : *terms_) out.push_back(t.conj());
    return sum(std::move(out));
}

Fiber Fiber::scaled(cplx factor) const {
    if (is_constant()) return constant(constant_ * factor);
    std::vector<star::GaussianSymbol> out;
    out.reserve(terms_->size());
    for (const auto& t : *terms_) out.push_back(t.scaled(factor));
    return sum(std::move(out));
}

cplx Fiber::evaluate(const Vector4d& x) const {
    if (is_constant()) return constant_;
    cplx acc = 0;
    for (const auto& t : *terms_) acc += t.evaluate(x);
    return acc;
}

double Fiber::norm_sq() const {
    const auto& ts = terms();
    cplx acc = 0;
    for (const auto& u : ts)
        for (const auto& v : ts) acc += star::l2_inner(u, v);
    return std::max(0.0, acc.real());
}

GeneralizedSymbol::GeneralizedSymbol(SigmaSample sample, std::vector<Fiber> fibers)
    : sample_(std::move(sample)), fibers_(std::move(fibers)) {
    if (int(fibers_.size()) != sample_.size())
        throw validation_error("GeneralizedSymbol: one fibre per sample point required");
}

GeneralizedSymbol GeneralizedSymbol::uniform(const SigmaSample& sample, const Fiber& fiber) {
    return GeneralizedSymbol(sample, std::vector<Fiber>(size_t(sample.size()), fiber));
}

GeneralizedSymbol GeneralizedSymbol::conj() const {
    std::vector<Fiber> out;
    out.reserve(fibers_.size());
    for (const Fiber& f : fibers_) out.push_back(f.conj());
    return GeneralizedSymbol(sample_, std::move(out));
}

GeneralizedSymbol fiberwise_star(const GeneralizedSymbol& f, const GeneralizedSymbol& g,
                                 double length_scale) {
    if (!f.sample().compatible(g.sample()))
        throw validation_error("fiberwise_star: sample mismatch");
    std::vector<Fiber> out;
    const double l2 = length_scale * length_scale;
    for (int i = 0; i < f.sample().size(); ++i) {
        const Eigen::MatrixXd theta = l2 * f.sample().point(i).sigma.matrix();
        if (f.fiber(i).is_constant()) {
            out.push_back(g.fiber(i).scaled(f.fiber(i).constant_value()));
            continue;
        }
        if (g.fiber(i).is_constant()) {
            out.push_back(f.fiber(i).scaled(g.fiber(i).constant_value()));
            continue;
        }
        std::vector<star::GaussianSymbol> terms;
        for (const auto& u : f.fiber(i).terms())
            for (const auto& v : g.fiber(i).terms())
                terms.push_back(star::star_product(u, v, theta));
        out.push_back(Fiber::sum(std::move(terms)));
    }
    return GeneralizedSymbol(f.sample(), std::move(out));
}

GeneralizedSymbol poincare_action(const PoincareTransform& L, const GeneralizedSymbol& f) {
    std::vector<SamplePoint> pts;
    std::vector<Fiber> fibers;
    const double det = L.det();
    // a boost leaves the rotation sub-orbit; promote the declared orbit
    core::Orbit orbit = f.sample().orbit();
    const bool spatial_rotation =
        std::abs(L.lambda()(0, 0) - 1.0) <= 1e-12 &&
        L.lambda().row(0).tail(3).cwiseAbs().maxCoeff() <= 1e-12 && L.det() > 0;
    if (orbit == core::Orbit::Sigma1 && !spatial_rotation) orbit = core::Orbit::Sigma;
    for (int i = 0; i < f.sample().size(); ++i) {
        const SamplePoint& p = f.sample().point(i);
        pts.push_back({core::lorentz_act_sigma(L, p.sigma), p.weight, L.lambda() * p.generator});
        if (f.fiber(i).is_constant()) {
            fibers.push_back(Fiber::constant(det * f.fiber(i).constant_value()));
            continue;
        }
        std::vector<star::GaussianSymbol> terms;
        for (const auto& t : f.fiber(i).terms())
            terms.push_back(star::pullback(t, L.lambda(), L.translation()).scaled(det));
        fibers.push_back(Fiber::sum(std::move(terms)));
    }
    return GeneralizedSymbol(SigmaSample(orbit, std::move(pts)), std::move(fibers));
}

cplx gaussian_time_slice(const star::GaussianSymbol& g, double t) {
    using Eigen::MatrixXcd;
    using Eigen::VectorXcd;
    const MatrixXcd& A = g.quadratic_form();
    const VectorXcd& b = g.linear_term();
    const MatrixXcd Ass = A.block(1, 1, 3, 3);
    const VectorXcd a0s = A.row(0).segment(1, 3).transpose();
    const VectorXcd w = b.segment(1, 3) - t * a0s;
    const cplx quad = (w.transpose() * Ass.inverse() * w)(0);
    return g.amplitude() * std::exp(-0.5 * A(0, 0) * t * t + b(0) * t) *
           std::pow(2.0 * pi, 1.5) * std::exp(-star::half_log_det(Ass) + 0.5 * quad);
}

std::vector<cplx> conditional_expectation(const GeneralizedSymbol& f, double t) {
    std::vector<cplx> out;
    out.reserve(size_t(f.sample().size()));
    for (int i = 0; i < f.sample().size(); ++i) {
        if (f.fiber(i).is_constant())
            throw validation_error("conditional_expectation: constant fibres are not integrable");
        cplx acc = 0;
        for (const auto& term : f.fiber(i).terms()) acc += gaussian_time_slice(term, t);
        out.push_back(acc);
    }
    return out;
}

BundleState::BundleState(const SigmaSample& sample, int levels, double length_scale,
                         std::vector<loc::QuantumState> states)
    : sample_(sample), length_scale_(length_scale), states_(std::move(states)) {
    if (int(states_.size()) != sample_.size())
        throw validation_error("BundleState: one state per sample point required");
    coords_.reserve(size_t(sample_.size()));
    for (int i = 0; i < sample_.size(); ++i)
        coords_.push_back(rep::build_coordinates(sample_.point(i).generator, length_scale, levels));
}

BundleState BundleState::vacuum(const SigmaSample& sample, int levels, double length_scale) {
    rep::OscillatorSpace space(2, levels);
    std::vector<loc::QuantumState> states(size_t(sample.size()),
                                          loc::QuantumState::vacuum(space));
    return BundleState(sample, levels, length_scale, std::move(states));
}

cplx evaluate_state(const BundleState& omega, const GeneralizedSymbol& f,
                    const rep::KGrid& kgrid) {
    if (!omega.sample().compatible(f.sample()))
        throw validation_error("evaluate_state: sample mismatch");
    const std::vector<double> w = omega.sample().normalized_weights();
    cplx acc = 0;
    for (int i = 0; i < omega.sample().size(); ++i) {
        if (f.fiber(i).is_constant()) {
            acc += w[size_t(i)] * f.fiber(i).constant_value();
            continue;
        }
        std::vector<star::GaussianSymbol> transforms;
        for (const auto& term : f.fiber(i).terms()) transforms.push_back(star::fourier(term));
        auto coeff = [&transforms](const Eigen::Vector4d& k) {
            cplx s = 0;
            for (const auto& tr : transforms) s += tr.evaluate(k);
            return s;
        };
        const rep::MatrixXcd op = rep::weyl_quantize(coeff, omega.coords(i), kgrid);
        acc += w[size_t(i)] * omega.state(i).expectation(op);
    }
    return acc;
}

NegativityWitness sharp_point_negativity(const GeneralizedSymbol& f, double length_scale,
                                         double box, int points_per_axis) {
    GeneralizedSymbol ff = fiberwise_star(f.conj(), f, length_scale);
    NegativityWitness w;
    w.value = 0;
    const int m = points_per_axis;
    for (int i = 0; i < ff.sample().size(); ++i) {
        if (ff.fiber(i).is_constant()) continue;
        for (int a0 = 0; a0 < m; ++a0)
            for (int a1 = 0; a1 < m; ++a1)
                for (int a2 = 0; a2 < m; ++a2)
                    for (int a3 = 0; a3 < m; ++a3) {
                        Vector4d x;
                        x << -box + 2 * box * a0 / (m - 1), -box + 2 * box * a1 / (m - 1),
                            -box + 2 * box * a2 / (m - 1), -box + 2 * box * a3 / (m - 1);
                        const double re = ff.fiber(i).evaluate(x).real();
                        if (re < w.value) {
                            w.value = re;
                            w.sigma_index = i;
                            w.point = x;
                            w.found = true;
                        }
                    }
    }
    return w;
}

}  // namespace qst::bundle
