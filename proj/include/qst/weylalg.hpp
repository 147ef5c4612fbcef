#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "qst/common.hpp"

namespace qst::weylalg {

using Rational = boost::multiprecision::cpp_rational;

/// Element of Q(i): exact complex rational scalar.
struct RationalComplex {
    Rational re{0}, im{0};

    RationalComplex() = default;
    RationalComplex(Rational r) : re(std::move(r)) {}
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    RationalComplex(long r) : re(r) {}

    static RationalComplex i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    RationalComplex conj() const { return {re, -im}; }

    RationalComplex operator+(const RationalComplex& o) const { return {re + o.re, im + o.im}; }
    RationalComplex operator-(const RationalComplex& o) const { return {re - o.re, im - o.im}; }
    RationalComplex operator-() const { return {-re, -im}; }
    RationalComplex operator*(const RationalComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    RationalComplex operator/(const RationalComplex& o) const;
    RationalComplex& operator+=(const RationalComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    bool operator==(const RationalComplex& o) const { return re == o.re && im == o.im; }

    cplx to_double() const { return {static_cast<double>(re), static_cast<double>(im)}; }
    std::string str() const;
};

using MultiIndex = std::vector<unsigned>;

/// Exact antisymmetric rational commutator matrix theta^{mu nu}.
class RationalTheta {
public:
    explicit RationalTheta(int dim);
    RationalTheta(int dim, const std::vector<std::vector<Rational>>& entries);

    int dim() const { return dim_; }
    const Rational& operator()(int mu, int nu) const { return m_[mu][nu]; }
    void set(int mu, int nu, const Rational& v);

    /// The standard symplectic matrix S (dim 4), optionally scaled by lambda^2.
    static RationalTheta standard(const Rational& lambda_sq = 1);

private:
    int dim_;
    std::vector<std::vector<Rational>> m_;
};

/// Polynomial in the noncommuting coordinates, stored on the Weyl-ordered
/// monomial basis x^alpha with exact Q(i) coefficients. On this basis
/// (x^mu)^n = (x^mu)^{star n} holds by construction.
class NCPolynomial {
public:
    explicit NCPolynomial(int dim = 4) : dim_(dim) {}

    int dim() const { return dim_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// Max |alpha| over the support; -1 for the zero polynomial.
    int degree() const;

    const std::map<MultiIndex, RationalComplex>& coefficients() const { return coeffs_; }
    RationalComplex coefficient(const MultiIndex& alpha) const;
    void set_coefficient(const MultiIndex& alpha, const RationalComplex& c);

    static NCPolynomial one(int dim = 4);
    static NCPolynomial generator(int mu, int dim = 4);
    static NCPolynomial constant(const RationalComplex& c, int dim = 4);

    NCPolynomial operator+(const NCPolynomial& o) const;
    NCPolynomial operator-(const NCPolynomial& o) const;
    NCPolynomial operator*(const RationalComplex& c) const;
    /// Commutative product of the underlying polynomial ring.
    NCPolynomial commutative_product(const NCPolynomial& o) const;
    /// Coefficient conjugation (the algebra involution).
    NCPolynomial conj() const;

    bool operator==(const NCPolynomial& o) const;

    std::string str() const;

private:
    int dim_;
    std::map<MultiIndex, RationalComplex> coeffs_;
};

/// Exact twisted product: m after exp((i/2) theta^{mu nu} d_mu (x) d_nu);
/// the series has finitely many nonzero terms on polynomials.
NCPolynomial poly_star(const NCPolynomial& f, const NCPolynomial& g, const RationalTheta& theta);

/// f star g - g star f, exact.
NCPolynomial poly_commutator(const NCPolynomial& f, const NCPolynomial& g,
                             const RationalTheta& theta);

/// Antisymmetrised star sum over all permutations:
/// [A_1,...,A_n] = sum_pi sign(pi) A_{pi(1)} star ... star A_{pi(n)}.
/// n is capped (n! terms).
NCPolynomial antisym_determinant(const std::vector<NCPolynomial>& elements,
                                 const RationalTheta& theta, int max_n = 5);

struct DegreeReport {
    int deg_f = -1;
    int deg_g = -1;
    int deg_star = -1;
    int deg_defect = -1;  ///< degree of f star g - f g
    bool additive = false;
};

DegreeReport degree_report(const NCPolynomial& f, const NCPolynomial& g,
                           const RationalTheta& theta);

/// Searches for g with deg(g) <= degree_bound solving f star g = 1, by an
/// exact linear solve over Q(i) on the coefficients of g. Returns the
/// solution when the system is feasible.
std::pair<bool, NCPolynomial> solve_star_inverse(const NCPolynomial& f, int degree_bound,
                                                 const RationalTheta& theta);

/// Parses the expression grammar used by the CLI:
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := primary ('^' uint)?
///   primary:= 'x' digit | number | 'i' | '(' expr ')'
///   number := uint ('/' uint)? | decimal literal (parsed exactly)
/// '*' is the commutative product of the Weyl-ordered basis; star products
/// are applied by the caller.
NCPolynomial parse_polynomial(const std::string& text, int dim = 4);

}  // namespace qst::weylalg
