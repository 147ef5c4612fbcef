#include "qst/weylalg.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace qst::weylalg {

RationalComplex RationalComplex::operator/(const RationalComplex& o) const {
    if (o.is_zero()) throw numeric_error("RationalComplex: division by zero");
    const Rational n = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
}

std::string RationalComplex::str() const {
    auto rat = [](const Rational& r) {
        std::ostringstream os;
        os << r;
        return os.str();
    };
    if (im == 0) return rat(re);
    std::string imag = (im == 1) ? "i" : (im == -1 ? "-i" : rat(im) + "*i");
    if (re == 0) return imag;
    return rat(re) + (im > 0 ? "+" : "") + imag;
}

RationalTheta::RationalTheta(int dim) : dim_(dim), m_(dim, std::vector<Rational>(dim, Rational(0))) {
    if (dim < 1) throw validation_error("RationalTheta: dim must be positive");
}

RationalTheta::RationalTheta(int dim, const std::vector<std::vector<Rational>>& entries)
    : RationalTheta(dim) {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            if (entries[i][j] != -entries[j][i])
                throw validation_error("RationalTheta: entries must be antisymmetric");
            m_[i][j] = entries[i][j];
        }
}

void RationalTheta::set(int mu, int nu, const Rational& v) {
    m_[mu][nu] = v;
    m_[nu][mu] = -v;
}

RationalTheta RationalTheta::standard(const Rational& lambda_sq) {
    RationalTheta t(4);
    t.set(0, 2, -lambda_sq);
    t.set(1, 3, -lambda_sq);
    return t;
}

int NCPolynomial::degree() const {
    int d = -1;
    for (const auto& [alpha, c] : coeffs_) {
        int total = 0;
        for (unsigned a : alpha) total += int(a);
        d = std::max(d, total);
    }
    return d;
}

RationalComplex NCPolynomial::coefficient(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? RationalComplex() : it->second;
}

void NCPolynomial::set_coefficient(const MultiIndex& alpha, const RationalComplex& c) {
    if (int(alpha.size()) != dim_) throw validation_error("NCPolynomial: multi-index dim mismatch");
    if (c.is_zero())
        coeffs_.erase(alpha);
    else
        coeffs_[alpha] = c;
}

NCPolynomial NCPolynomial::one(int dim) {
    NCPolynomial p(dim);
    p.set_coefficient(MultiIndex(dim, 0), RationalComplex(1));
    return p;
}

NCPolynomial NCPolynomial::generator(int mu, int dim) {
    if (mu < 0 || mu >= dim) throw validation_error("NCPolynomial: generator index out of range");
    NCPolynomial p(dim);
    MultiIndex alpha(dim, 0);
    alpha[mu] = 1;
    p.set_coefficient(alpha, RationalComplex(1));
    return p;
}

NCPolynomial NCPolynomial::constant(const RationalComplex& c, int dim) {
    NCPolynomial p(dim);
    p.set_coefficient(MultiIndex(dim, 0), c);
    return p;
}

NCPolynomial NCPolynomial::operator+(const NCPolynomial& o) const {
    NCPolynomial out = *this;
    for (const auto& [alpha, c] : o.coeffs_) out.set_coefficient(alpha, out.coefficient(alpha) + c);
    return out;
}

NCPolynomial NCPolynomial::operator-(const NCPolynomial& o) const {
    NCPolynomial out = *this;
    for (const auto& [alpha, c] : o.coeffs_) out.set_coefficient(alpha, out.coefficient(alpha) - c);
    return out;
}

NCPolynomial NCPolynomial::operator*(const RationalComplex& c) const {
    NCPolynomial out(dim_);
    if (c.is_zero()) return out;
    for (const auto& [alpha, v] : coeffs_) out.set_coefficient(alpha, v * c);
    return out;
}

NCPolynomial NCPolynomial::commutative_product(const NCPolynomial& o) const {
    NCPolynomial out(dim_);
    for (const auto& [a, ca] : coeffs_)
        for (const auto& [b, cb] : o.coeffs_) {
            MultiIndex s(dim_);
            for (int k = 0; k < dim_; ++k) s[k] = a[k] + b[k];
            out.set_coefficient(s, out.coefficient(s) + ca * cb);
        }
    return out;
}

NCPolynomial NCPolynomial::conj() const {
    NCPolynomial out(dim_);
    for (const auto& [alpha, c] : coeffs_) out.set_coefficient(alpha, c.conj());
    return out;
}

bool NCPolynomial::operator==(const NCPolynomial& o) const {
    return dim_ == o.dim_ && coeffs_ == o.coeffs_;
}

std::string NCPolynomial::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [alpha, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (int k = 0; k < dim_; ++k) {
            if (alpha[k] == 0) continue;
            os << "*x" << k;
            if (alpha[k] > 1) os << "^" << alpha[k];
        }
    }
    return os.str();
}

namespace {

using Tensor = std::map<std::pair<MultiIndex, MultiIndex>, RationalComplex>;

void tensor_add(Tensor& t, const MultiIndex& a, const MultiIndex& b, const RationalComplex& c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(a, b);
    auto it = t.find(key);
    if (it == t.end()) {
        t.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second.is_zero()) t.erase(it);
    }
}

/// One application of theta^{mu nu} d_mu (x) d_nu to a two-slot tensor.
Tensor apply_bidifferential(const Tensor& t, const RationalTheta& theta) {
    const int d = theta.dim();
    Tensor out;
    for (const auto& [key, c] : t) {
        const auto& [a, b] = key;
        for (int mu = 0; mu < d; ++mu) {
            if (a[mu] == 0) continue;
            for (int nu = 0; nu < d; ++nu) {
                if (b[nu] == 0 || theta(mu, nu) == 0) continue;
                MultiIndex a2 = a, b2 = b;
                a2[mu] -= 1;
                b2[nu] -= 1;
                RationalComplex factor(theta(mu, nu) * Rational(a[mu]) * Rational(b[nu]));
                tensor_add(out, a2, b2, c * factor);
            }
        }
    }
    return out;
}

void accumulate_multiplied(NCPolynomial& acc, const Tensor& t, int dim) {
    for (const auto& [key, c] : t) {
        const auto& [a, b] = key;
        MultiIndex s(dim);
        for (int k = 0; k < dim; ++k) s[k] = a[k] + b[k];
        acc.set_coefficient(s, acc.coefficient(s) + c);
    }
}

}  // namespace

NCPolynomial poly_star(const NCPolynomial& f, const NCPolynomial& g, const RationalTheta& theta) {
    const int d = f.dim();
    if (g.dim() != d || theta.dim() != d) throw validation_error("poly_star: dimension mismatch");

    Tensor t;
    for (const auto& [a, ca] : f.coefficients())
        for (const auto& [b, cb] : g.coefficients()) tensor_add(t, a, b, ca * cb);

    NCPolynomial out(d);
    accumulate_multiplied(out, t, d);

    const RationalComplex half_i(Rational(0), Rational(1, 2));
    RationalComplex scale(1);
    for (long j = 1; !t.empty(); ++j) {
        t = apply_bidifferential(t, theta);
        scale = scale * half_i / RationalComplex(Rational(j));
        Tensor scaled;
        for (const auto& [key, c] : t) scaled.emplace(key, c * scale);
        // accumulate m((i/2)^j/j! D^j f (x) g)
        accumulate_multiplied(out, scaled, d);
    }
    return out;
}

NCPolynomial poly_commutator(const NCPolynomial& f, const NCPolynomial& g,
                             const RationalTheta& theta) {
    return poly_star(f, g, theta) - poly_star(g, f, theta);
}

namespace {

void permutations_signed(int n, const std::function<void(const std::vector<int>&, int)>& visit) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    // iterate in lexicographic order, recomputing parity per permutation
    do {
        int sign = 1;
        std::vector<int> p = perm;
        for (int i = 0; i < n; ++i) {
            while (p[i] != i) {
                std::swap(p[i], p[p[i]]);
                sign = -sign;
            }
        }
        visit(perm, sign);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

NCPolynomial antisym_determinant(const std::vector<NCPolynomial>& elements,
                                 const RationalTheta& theta, int max_n) {
    const int n = int(elements.size());
    if (n < 1) throw validation_error("antisym_determinant: need at least one element");
    if (n > max_n)
        throw validation_error("antisym_determinant: n=" + std::to_string(n) +
                               " exceeds the permutation-sum cap " + std::to_string(max_n));
    const int d = elements[0].dim();
    NCPolynomial out(d);
    permutations_signed(n, [&](const std::vector<int>& perm, int sign) {
        NCPolynomial chain = elements[perm[0]];
        for (int i = 1; i < n; ++i) chain = poly_star(chain, elements[perm[i]], theta);
        if (sign > 0)
            out = out + chain;
        else
            out = out - chain;
    });
    return out;
}

DegreeReport degree_report(const NCPolynomial& f, const NCPolynomial& g,
                           const RationalTheta& theta) {
    if (f.is_zero() || g.is_zero()) throw validation_error("degree_report: inputs must be nonzero");
    DegreeReport r;
    r.deg_f = f.degree();
    r.deg_g = g.degree();
    NCPolynomial star = poly_star(f, g, theta);
    r.deg_star = star.degree();
    r.deg_defect = (star - f.commutative_product(g)).degree();
    r.additive = (r.deg_star == r.deg_f + r.deg_g);
    return r;
}

namespace {

std::vector<MultiIndex> monomials_up_to_degree(int dim, int max_deg) {
    std::vector<MultiIndex> out;
    MultiIndex cur(dim, 0);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == dim) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            cur[pos] = unsigned(k);
            rec(pos + 1, remaining - k);
        }
        cur[pos] = 0;
    };
    rec(0, max_deg);
    return out;
}

}  // namespace

std::pair<bool, NCPolynomial> solve_star_inverse(const NCPolynomial& f, int degree_bound,
                                                 const RationalTheta& theta) {
    const int d = f.dim();
    const std::vector<MultiIndex> unknowns = monomials_up_to_degree(d, degree_bound);
    const std::vector<MultiIndex> rows = monomials_up_to_degree(d, f.degree() + degree_bound);
    std::map<MultiIndex, int> row_of;
    for (int r = 0; r < int(rows.size()); ++r) row_of[rows[r]] = r;

    const int nrows = int(rows.size()), ncols = int(unknowns.size());
    // Dense exact system A x = rhs over Q(i); column j = coefficients of f star x^alpha_j.
    std::vector<std::vector<RationalComplex>> A(nrows, std::vector<RationalComplex>(ncols));
    std::vector<RationalComplex> rhs(nrows);
    rhs[row_of.at(MultiIndex(d, 0))] = RationalComplex(1);

    for (int j = 0; j < ncols; ++j) {
        NCPolynomial basis(d);
        basis.set_coefficient(unknowns[j], RationalComplex(1));
        NCPolynomial col = poly_star(f, basis, theta);
        for (const auto& [alpha, c] : col.coefficients()) A[row_of.at(alpha)][j] = c;
    }

    // Exact Gauss elimination.
    std::vector<int> pivot_col_of_row;
    int row = 0;
    for (int col = 0; col < ncols && row < nrows; ++col) {
        int p = -1;
        for (int r = row; r < nrows; ++r)
            if (!A[r][col].is_zero()) {
                p = r;
                break;
            }
        if (p < 0) continue;
        std::swap(A[p], A[row]);
        std::swap(rhs[p], rhs[row]);
        const RationalComplex inv = RationalComplex(1) / A[row][col];
        for (int c2 = col; c2 < ncols; ++c2) A[row][c2] = A[row][c2] * inv;
        rhs[row] = rhs[row] * inv;
        for (int r = 0; r < nrows; ++r) {
            if (r == row || A[r][col].is_zero()) continue;
            const RationalComplex factor = A[r][col];
            for (int c2 = col; c2 < ncols; ++c2) A[r][c2] = A[r][c2] - factor * A[row][c2];
            rhs[r] = rhs[r] - factor * rhs[row];
        }
        pivot_col_of_row.push_back(col);
        ++row;
    }
    // Inconsistent iff some zero row has nonzero rhs.
    for (int r = row; r < nrows; ++r)
        if (!rhs[r].is_zero()) return {false, NCPolynomial(d)};

    NCPolynomial g(d);
    for (int r = 0; r < row; ++r) g.set_coefficient(unknowns[pivot_col_of_row[r]], rhs[r]);
    return {true, g};
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    int dim;

    explicit Parser(const std::string& text, int d) : s(text), dim(d) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool consume(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw validation_error("parse error at position " + std::to_string(pos) + ": " + msg);
    }

    NCPolynomial parse_expr() {
        NCPolynomial acc = consume('-') ? NCPolynomial(dim) - parse_term() : parse_term();
        for (;;) {
            if (consume('+'))
                acc = acc + parse_term();
            else if (consume('-'))
                acc = acc - parse_term();
            else
                break;
        }
        return acc;
    }

    NCPolynomial parse_term() {
        NCPolynomial acc = parse_factor();
        for (;;) {
            skip_ws();
            if (consume('*')) {
                acc = acc.commutative_product(parse_factor());
            } else if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'i' || s[pos] == '(')) {
                // implicit product, e.g. "2x0" or "(1+i)x2"
                acc = acc.commutative_product(parse_factor());
            } else {
                break;
            }
        }
        return acc;
    }

    NCPolynomial parse_factor() {
        NCPolynomial base = parse_primary();
        skip_ws();
        if (consume('^')) {
            unsigned e = parse_uint();
            NCPolynomial out = NCPolynomial::one(dim);
            for (unsigned k = 0; k < e; ++k) out = out.commutative_product(base);
            return out;
        }
        return base;
    }

    NCPolynomial parse_primary() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        if (consume('(')) {
            NCPolynomial inner = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        const char c = s[pos];
        if (c == 'x') {
            ++pos;
            unsigned mu = parse_uint();
            if (int(mu) >= dim) fail("generator index out of range");
            return NCPolynomial::generator(int(mu), dim);
        }
        if (c == 'i' && (pos + 1 >= s.size() || !std::isalnum(static_cast<unsigned char>(s[pos + 1])))) {
            ++pos;
            return NCPolynomial::constant(RationalComplex::i(), dim);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return NCPolynomial::constant(RationalComplex(parse_rational()), dim);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    unsigned parse_uint() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        return unsigned(std::stoul(s.substr(start, pos - start)));
    }

    Rational parse_rational() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        std::string int_part = s.substr(start, pos - start);
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            size_t fs = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            std::string frac = s.substr(fs, pos - fs);
            if (int_part.empty() && frac.empty()) fail("malformed number");
            Rational num(int_part.empty() ? "0" : int_part);
            Rational den(1);
            for (char fc : frac) {
                num = num * 10 + Rational(fc - '0');
                den *= 10;
            }
            return num / den;
        }
        if (int_part.empty()) fail("malformed number");
        Rational value(int_part);
        skip_ws();
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            Rational den(std::to_string(parse_uint()));
            if (den == 0) fail("division by zero");
            return value / den;
        }
        return value;
    }
};

}  // namespace

NCPolynomial parse_polynomial(const std::string& text, int dim) {
    Parser p(text, dim);
    NCPolynomial out = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return out;
}

}  // namespace qst::weylalg
