#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "heightforge/errors.hpp"

namespace heightforge {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw argument_error("zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

inline BigRational parse_rational(const std::string& s) {
    BigRational q;
    if (q.set_str(s, 10) != 0) throw argument_error("not a rational: " + s);
    if (q.get_den() == 0) throw argument_error("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const BigInt& n) { return n.get_str(); }
inline std::string to_string(const BigRational& q) { return q.get_str(); }

inline bool is_integer(const BigRational& q) { return q.get_den() == 1; }

inline BigInt floor_of(const BigRational& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline bool is_prime(const BigInt& p) {
    return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 30) > 0;
}

inline BigInt next_prime(const BigInt& n) {
    BigInt r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const BigInt& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t());
}

inline BigInt isqrt(const BigInt& n) {
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline std::optional<BigRational> rational_sqrt(const BigRational& q) {
    if (q < 0) return std::nullopt;
    BigInt n = q.get_num(), d = q.get_den();
    if (!is_perfect_square(n) || !is_perfect_square(d)) return std::nullopt;
    return BigRational(isqrt(n), isqrt(d));
}

// Exponent of p in n, n != 0.
inline long ord_p(const BigInt& n, const BigInt& p) {
    if (n == 0) throw argument_error("ord_p of zero");
    BigInt t = n;
    return static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t()));
}

struct ValuationValue {
    bool infinite = false;
    long value = 0;

    static ValuationValue infinity() { return {true, 0}; }
    static ValuationValue finite(long v) { return {false, v}; }

    bool operator==(const ValuationValue&) const = default;
    std::strong_ordering operator<=>(const ValuationValue& o) const {
        if (infinite || o.infinite) return infinite <=> o.infinite;
        return value <=> o.value;
    }
    ValuationValue operator+(const ValuationValue& o) const {
        if (infinite || o.infinite) return infinity();
        return finite(value + o.value);
    }
    std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

inline ValuationValue valuation_p(const BigRational& r, const BigInt& p) {
    if (!is_prime(p)) throw argument_error("valuation at non-prime " + p.get_str());
    if (r == 0) return ValuationValue::infinity();
    return ValuationValue::finite(ord_p(r.get_num(), p) - ord_p(r.get_den(), p));
}

// Dense univariate polynomial, lowest degree first, no trailing zeros.
template <class R>
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }

    static Polynomial constant(const R& a) { return Polynomial(std::vector<R>{a}); }
    static Polynomial monomial(const R& a, int k) {
        std::vector<R> v(static_cast<std::size_t>(k) + 1, R(0));
        v.back() = a;
        return Polynomial(std::move(v));
    }
    static Polynomial x() { return monomial(R(1), 1); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<R>& coeffs() const { return c_; }
    R coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : R(0);
    }
    const R& leading() const { return c_.back(); }

    template <class T>
    T eval(const T& t) const {
        T acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + T(c_[i]);
        return acc;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<R> v(std::max(a.c_.size(), b.c_.size()), R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
        return Polynomial(std::move(v));
    }
    friend Polynomial operator-(const Polynomial& a) {
        std::vector<R> v = a.c_;
        for (auto& t : v) t = -t;
        return Polynomial(std::move(v));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<R> v(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(v));
    }
    friend Polynomial operator*(const R& s, const Polynomial& a) {
        std::vector<R> v = a.c_;
        for (auto& t : v) t *= s;
        return Polynomial(std::move(v));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    Polynomial pow(unsigned k) const {
        Polynomial r = constant(R(1)), b = *this;
        while (k) {
            if (k & 1u) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    std::string str(const std::string& var = "X") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int k = degree(); k >= 0; --k) {
            R a = coeff(k);
            if (a == 0) continue;
            bool neg = a < 0;
            R m = neg ? R(-a) : a;
            if (first) os << (neg ? "-" : "");
            else os << (neg ? " - " : " + ");
            first = false;
            if (k == 0 || m != 1) os << m;
            if (k > 0) {
                if (m != 1) os << "*";
                os << var;
                if (k > 1) os << "^" << k;
            }
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<R> c_;
};

using IntPolynomial = Polynomial<BigInt>;
using RatPolynomial = Polynomial<BigRational>;

template <class R>
std::ostream& operator<<(std::ostream& os, const Polynomial<R>& p) {
    return os << p.str();
}

inline BigInt content(const IntPolynomial& f) {
    BigInt g = 0;
    for (const auto& a : f.coeffs()) g = gcd(g, a);
    return g;
}

inline IntPolynomial exact_div(const IntPolynomial& f, const BigInt& d) {
    std::vector<BigInt> v = f.coeffs();
    for (auto& a : v) {
        mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    }
    return IntPolynomial(std::move(v));
}

inline RatPolynomial to_rational(const IntPolynomial& f) {
    std::vector<BigRational> v;
    for (const auto& a : f.coeffs()) v.emplace_back(a);
    return RatPolynomial(std::move(v));
}

// lc(B)^(degA-degB+1) * A mod B, over the integers.
inline IntPolynomial pseudo_remainder(IntPolynomial A, const IntPolynomial& B) {
    if (B.is_zero()) throw argument_error("pseudo-division by zero");
    int db = B.degree();
    int e = A.degree() - db + 1;
    if (e <= 0) return A;
    const BigInt& lb = B.leading();
    while (!A.is_zero() && A.degree() >= db) {
        IntPolynomial S = IntPolynomial::monomial(A.leading(), A.degree() - db);
        A = lb * A - S * B;
        --e;
    }
    BigInt q;
    mpz_pow_ui(q.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
    return q * A;
}

// Quotient and remainder over Q.
inline std::pair<RatPolynomial, RatPolynomial> divmod(RatPolynomial A, const RatPolynomial& B) {
    if (B.is_zero()) throw argument_error("division by zero polynomial");
    RatPolynomial Q;
    while (!A.is_zero() && A.degree() >= B.degree()) {
        RatPolynomial S = RatPolynomial::monomial(A.leading() / B.leading(), A.degree() - B.degree());
        Q = Q + S;
        A = A - S * B;
    }
    return {Q, A};
}

inline BigInt ipow(const BigInt& b, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// Subresultant algorithm (Cohen, Algorithm 3.3.7). Sign agrees with the
// Sylvester determinant having the rows of f first.
inline BigInt resultant(const IntPolynomial& f, const IntPolynomial& g) {
    if (f.is_zero() || g.is_zero()) throw argument_error("resultant of zero polynomial");
    IntPolynomial A = f, B = g;
    int s = 1;
    if (A.degree() < B.degree()) {
        std::swap(A, B);
        if ((A.degree() % 2) && (B.degree() % 2)) s = -s;
    }
    if (B.degree() == 0) return s * ipow(B.leading(), static_cast<unsigned long>(A.degree()));

    BigInt a = content(A), b = content(B);
    A = exact_div(A, a);
    B = exact_div(B, b);
    BigInt t = ipow(a, static_cast<unsigned long>(B.degree())) *
               ipow(b, static_cast<unsigned long>(A.degree()));
    BigInt gg = 1, h = 1;
    while (true) {
        int delta = A.degree() - B.degree();
        if ((A.degree() % 2) && (B.degree() % 2)) s = -s;
        IntPolynomial R = pseudo_remainder(A, B);
        A = B;
        if (R.is_zero()) return 0;
        BigInt den = gg * ipow(h, static_cast<unsigned long>(delta));
        B = exact_div(R, den);
        gg = A.leading();
        if (delta == 0) {
        } else if (delta == 1) {
            h = gg;
        } else {
            BigInt num = ipow(gg, static_cast<unsigned long>(delta));
            BigInt dd = ipow(h, static_cast<unsigned long>(delta - 1));
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), dd.get_mpz_t());
        }
        if (B.degree() == 0) break;
    }
    int da = A.degree();
    BigInt num = ipow(B.leading(), static_cast<unsigned long>(da));
    BigInt dd = ipow(h, static_cast<unsigned long>(da - 1));
    BigInt last;
    mpz_divexact(last.get_mpz_t(), num.get_mpz_t(), dd.get_mpz_t());
    return s * t * last;
}

struct BezoutTriple {
    IntPolynomial a;
    IntPolynomial b;
    BigInt r;
};

// a*f + b*g = r with r a nonzero integer. Extended Euclid over Q, then
// denominators are cleared and the common content removed.
inline BezoutTriple bezout_integer(const IntPolynomial& f, const IntPolynomial& g) {
    if (f.is_zero() || g.is_zero()) throw argument_error("bezout of zero polynomial");
    if (resultant(f, g) == 0) throw degenerate_input_error("polynomials share a root");
    RatPolynomial r0 = to_rational(f), r1 = to_rational(g);
    RatPolynomial s0 = RatPolynomial::constant(1), s1;
    RatPolynomial t0, t1 = RatPolynomial::constant(1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        RatPolynomial s = s0 - q * s1, t = t0 - q * t1;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if (r0.degree() != 0) throw invariant_violation("gcd of coprime polynomials is not constant");
    // s0*f + t0*g = r0 (a nonzero constant); scale so every coefficient is integral.
    BigInt L = 1;
    auto absorb = [&L](const RatPolynomial& p) {
        for (const auto& c : p.coeffs()) L = lcm(L, BigInt(c.get_den()));
    };
    absorb(s0);
    absorb(t0);
    absorb(r0);
    auto to_int = [&L](const RatPolynomial& p) {
        std::vector<BigInt> v;
        for (const auto& c : p.coeffs()) {
            BigRational x = c * BigRational(L);
            v.push_back(x.get_num());
        }
        return IntPolynomial(std::move(v));
    };
    IntPolynomial a = to_int(s0), b = to_int(t0);
    BigInt r = BigRational(r0.leading() * BigRational(L)).get_num();
    BigInt c = gcd(gcd(content(a), content(b)), r);
    if (c != 0 && c != 1) {
        a = exact_div(a, c);
        b = exact_div(b, c);
        mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t());
    }
    if (r < 0) {
        a = -a;
        b = -b;
        r = -r;
    }
    if (a * f + b * g != IntPolynomial::constant(r))
        throw invariant_violation("bezout identity failed re-verification");
    return {a, b, r};
}

inline BigRational fractional_part(const BigRational& t) { return t - BigRational(floor_of(t)); }

// B2({t}) with B2(t) = t^2 - t + 1/6.
inline BigRational bernoulli2_periodic(const BigRational& t) {
    BigRational f = fractional_part(t);
    return f * f - f + BigRational(1, 6);
}

}  // namespace heightforge
