#include "qst/core.hpp"

#include <cmath>

namespace qst::core {

const Matrix4d& minkowski_metric() {
    static const Matrix4d g = [] {
        Matrix4d m = Matrix4d::Zero();
        m.diagonal() << 1.0, -1.0, -1.0, -1.0;
        return m;
    }();
    return g;
}

SigmaPoint::SigmaPoint(const Matrix4d& m, double asym_tol) {
    const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
    if (defect > asym_tol) {
        throw validation_error("SigmaPoint: antisymmetry defect " + std::to_string(defect));
    }
    m_ = 0.5 * (m - m.transpose());
}

Vector3d SigmaPoint::electric() const {
    return {m_(0, 1), m_(0, 2), m_(0, 3)};
}

Vector3d SigmaPoint::magnetic() const {
    return {m_(2, 3), m_(3, 1), m_(1, 2)};
}

SigmaPoint SigmaPoint::from_em(const Vector3d& e, const Vector3d& m) {
    Matrix4d s = Matrix4d::Zero();
    for (int j = 0; j < 3; ++j) {
        s(0, j + 1) = e(j);
        s(j + 1, 0) = -e(j);
    }
    s(2, 3) = m(0);
    s(3, 2) = -m(0);
    s(3, 1) = m(1);
    s(1, 3) = -m(1);
    s(1, 2) = m(2);
    s(2, 1) = -m(2);
    return SigmaPoint(s);
}

ThetaMatrix::ThetaMatrix(double lambda, const SigmaPoint& sigma) : lambda_(lambda), sigma_(sigma) {
    if (!(lambda > 0.0)) throw validation_error("ThetaMatrix: lambda must be positive");
}

SigmaPoint sigma_standard() {
    Matrix4d s = Matrix4d::Zero();
    s(0, 2) = -1.0;
    s(1, 3) = -1.0;
    s(2, 0) = 1.0;
    s(3, 1) = 1.0;
    return SigmaPoint(s);
}

SigmaPoint sigma_conf_standard() {
    return SigmaPoint::from_em(Vector3d(1, 0, 0), Vector3d(0, 1, 0));
}

namespace {

/// Totally antisymmetric symbol with epsilon_{0123} = +1, as a dense lookup.
int epsilon4(int a, int b, int c, int d) {
    int idx[4] = {a, b, c, d};
    int sign = 1;
    // sort with parity tracking
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) {
                std::swap(idx[i], idx[j]);
                sign = -sign;
            }
        }
    }
    return sign;
}

}  // namespace

CovariantSigma hodge_dual(const SigmaPoint& sigma) {
    Matrix4d out = Matrix4d::Zero();
    for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
            double acc = 0.0;
            for (int r = 0; r < 4; ++r) {
                for (int t = 0; t < 4; ++t) {
                    int eps = epsilon4(mu, nu, r, t);
                    if (eps != 0) acc += 0.5 * eps * sigma(r, t);
                }
            }
            out(mu, nu) = acc;
        }
    }
    return CovariantSigma{out};
}

SigmaPoint raise_indices(const CovariantSigma& low) {
    const Matrix4d& g = minkowski_metric();
    return SigmaPoint(g * low.m * g.transpose());
}

double invariant_1(const SigmaPoint& sigma) {
    const Matrix4d& g = minkowski_metric();
    const Matrix4d low = g * sigma.matrix() * g.transpose();  // sigma_{mu nu}
    return (low.cwiseProduct(sigma.matrix())).sum();
}

double invariant_2(const SigmaPoint& sigma) {
    const CovariantSigma dual = hodge_dual(sigma);
    return (sigma.matrix().cwiseProduct(dual.m)).sum();
}

PoincareTransform::PoincareTransform(const Matrix4d& lambda, const Vector4d& a)
    : lambda_(lambda), a_(a) {
    const Matrix4d& g = minkowski_metric();
    const double defect = (lambda.transpose() * g * lambda - g).cwiseAbs().maxCoeff();
    if (defect > metric_tol) {
        throw validation_error("PoincareTransform: metric preservation defect " +
                               std::to_string(defect));
    }
    det_ = lambda.determinant() >= 0.0 ? 1.0 : -1.0;
}

PoincareTransform PoincareTransform::identity() {
    return PoincareTransform(Matrix4d::Identity());
}

PoincareTransform PoincareTransform::inverse() const {
    // Lambda^{-1} = g Lambda^T g for metric-preserving Lambda.
    const Matrix4d& g = minkowski_metric();
    Matrix4d inv = g * lambda_.transpose() * g;
    return PoincareTransform(inv, -(inv * a_));
}

PoincareTransform PoincareTransform::operator*(const PoincareTransform& other) const {
    return PoincareTransform(lambda_ * other.lambda_, lambda_ * other.a_ + a_);
}

SigmaPoint lorentz_act_sigma(const PoincareTransform& L, const SigmaPoint& sigma) {
    return SigmaPoint(L.lambda() * sigma.matrix() * L.lambda().transpose());
}

Orbit orbit_from_string(const std::string& name) {
    if (name == "sigma" || name == "Sigma") return Orbit::Sigma;
    if (name == "sigma1" || name == "Sigma1") return Orbit::Sigma1;
    if (name == "conf" || name == "sigma_conf" || name == "SigmaConf") return Orbit::SigmaConf;
    throw validation_error("unknown orbit id: " + name);
}

bool is_in_orbit(const SigmaPoint& sigma, Orbit orbit, double tol) {
    const Vector3d e = sigma.electric();
    const Vector3d m = sigma.magnetic();
    switch (orbit) {
        case Orbit::Sigma:
            return std::abs(e.norm() - m.norm()) <= tol && std::abs(std::abs(e.dot(m)) - 1.0) <= tol;
        case Orbit::Sigma1:
            return (m + e).norm() <= tol && std::abs(e.norm() - 1.0) <= tol;
        case Orbit::SigmaConf:
            return std::abs(e.norm() - m.norm()) <= tol && std::abs(e.dot(m)) <= tol &&
                   e.norm() > tol;
    }
    return false;
}

PoincareTransform random_rotation(std::uint64_t seed) {
    Rng rng(seed);
    // Haar-uniform quaternion
    double q[4];
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& c : q) {
            c = rng.normal();
            n2 += c * c;
        }
    } while (n2 < 1e-12);
    const double n = std::sqrt(n2);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;

    Matrix4d L = Matrix4d::Identity();
    L(1, 1) = 1 - 2 * (y * y + z * z);
    L(1, 2) = 2 * (x * y - w * z);
    L(1, 3) = 2 * (x * z + w * y);
    L(2, 1) = 2 * (x * y + w * z);
    L(2, 2) = 1 - 2 * (x * x + z * z);
    L(2, 3) = 2 * (y * z - w * x);
    L(3, 1) = 2 * (x * z - w * y);
    L(3, 2) = 2 * (y * z + w * x);
    L(3, 3) = 1 - 2 * (x * x + y * y);
    return PoincareTransform(L);
}

Matrix4d boost_matrix(double rapidity, const Vector3d& direction) {
    Vector3d n = direction;
    if (n.norm() < 1e-14) throw validation_error("boost_matrix: zero direction");
    n.normalize();
    const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
    Matrix4d B = Matrix4d::Identity();
    B(0, 0) = ch;
    for (int j = 0; j < 3; ++j) {
        B(0, j + 1) = sh * n(j);
        B(j + 1, 0) = sh * n(j);
        for (int k = 0; k < 3; ++k) {
            B(j + 1, k + 1) = (j == k ? 1.0 : 0.0) + (ch - 1.0) * n(j) * n(k);
        }
    }
    return B;
}

PoincareTransform random_lorentz(std::uint64_t seed, double rapidity_max) {
    if (rapidity_max < 0.0) throw validation_error("random_lorentz: rapidity_max must be >= 0");
    Rng rng(seed);
    const double chi = rapidity_max * rng.uniform();
    PoincareTransform R = random_rotation(rng.next_u64());
    if (chi == 0.0) return R;
    Matrix4d B = boost_matrix(chi, Vector3d(0, 0, 1));
    return PoincareTransform(R.lambda() * B);
}

}  // namespace qst::core
