#pragma once

#include <string>
#include <vector>

#include "heightforge/exact_arith.hpp"
#include "heightforge/finite_field.hpp"
#include "heightforge/quadratic_field.hpp"

namespace heightforge {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a field F.
template <class F>
struct WeierstrassModel {
    F a1, a2, a3, a4, a6;
    F b2, b4, b6, b8, c4, c6, disc;

    WeierstrassModel() = default;
    WeierstrassModel(F a1_, F a2_, F a3_, F a4_, F a6_)
        : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)), a4(std::move(a4_)), a6(std::move(a6_)) {
        F two = field_const(a1, 2), four = field_const(a1, 4);
        b2 = a1 * a1 + four * a2;
        b4 = two * a4 + a1 * a3;
        b6 = a3 * a3 + four * a6;
        b8 = a1 * a1 * a6 + four * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        c4 = b2 * b2 - field_const(a1, 24) * b4;
        c6 = -(b2 * b2 * b2) + field_const(a1, 36) * b2 * b4 - field_const(a1, 216) * b6;
        disc = -(b2 * b2 * b8) - field_const(a1, 8) * b4 * b4 * b4 - field_const(a1, 27) * b6 * b6 +
               field_const(a1, 9) * b2 * b4 * b6;
    }

    bool is_singular() const { return disc == field_const(a1, 0); }

    friend bool operator==(const WeierstrassModel& e, const WeierstrassModel& f) {
        return e.a1 == f.a1 && e.a2 == f.a2 && e.a3 == f.a3 && e.a4 == f.a4 && e.a6 == f.a6;
    }
};

using WeierstrassCurve = WeierstrassModel<BigRational>;

inline WeierstrassCurve make_curve(const BigRational& a1, const BigRational& a2, const BigRational& a3,
                                   const BigRational& a4, const BigRational& a6) {
    WeierstrassCurve E(a1, a2, a3, a4, a6);
    if (E.disc == 0) throw degenerate_input_error("singular Weierstrass equation (discriminant 0)");
    return E;
}

inline BigRational j_invariant(const WeierstrassCurve& E) { return E.c4 * E.c4 * E.c4 / E.disc; }

inline bool is_integral_model(const WeierstrassCurve& E) {
    for (const BigRational* a : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6})
        if (!is_integer(*a)) return false;
    return true;
}

inline std::string curve_label(const WeierstrassCurve& E) {
    return "[" + E.a1.get_str() + "," + E.a2.get_str() + "," + E.a3.get_str() + "," + E.a4.get_str() + "," +
           E.a6.get_str() + "]";
}

// Base change of a rational curve to Q(sqrt d).
inline WeierstrassModel<QuadraticElement> base_change(const WeierstrassCurve& E, const BigInt& d) {
    auto L = [&d](const BigRational& a) { return QuadraticElement(a, 0, d); };
    return {L(E.a1), L(E.a2), L(E.a3), L(E.a4), L(E.a6)};
}

template <class F>
struct CurvePoint {
    bool infinity = true;
    F x, y;

    CurvePoint() = default;
    CurvePoint(F x_, F y_) : infinity(false), x(std::move(x_)), y(std::move(y_)) {}
    static CurvePoint at_infinity() { return {}; }

    friend bool operator==(const CurvePoint& P, const CurvePoint& Q) {
        if (P.infinity || Q.infinity) return P.infinity == Q.infinity;
        return P.x == Q.x && P.y == Q.y;
    }
};

using RationalPoint = CurvePoint<BigRational>;
using QuadraticPoint = CurvePoint<QuadraticElement>;

template <class F>
bool on_curve(const WeierstrassModel<F>& E, const CurvePoint<F>& P) {
    if (P.infinity) return true;
    const F &x = P.x, &y = P.y;
    return y * y + E.a1 * x * y + E.a3 * y == x * x * x + E.a2 * x * x + E.a4 * x + E.a6;
}

inline std::string to_string(const RationalPoint& P) {
    if (P.infinity) return "O";
    return "(" + P.x.get_str() + ", " + P.y.get_str() + ")";
}
inline std::string to_string(const QuadraticPoint& P) {
    if (P.infinity) return "O";
    return "(" + P.x.str() + ", " + P.y.str() + ")";
}
inline std::string to_string(const CurvePoint<FqElement>& P) {
    if (P.infinity) return "O";
    return "(" + P.x.str() + ", " + P.y.str() + ")";
}

template <class F>
void require_on_curve(const WeierstrassModel<F>& E, const CurvePoint<F>& P) {
    if (!on_curve(E, P)) throw argument_error("point is not on the curve: " + to_string(P));
}

template <class F>
CurvePoint<F> negate(const WeierstrassModel<F>& E, const CurvePoint<F>& P) {
    if (P.infinity) return P;
    return {P.x, -P.y - E.a1 * P.x - E.a3};
}

// Chord-tangent law without the on-curve check; used internally by scalar_mul.
template <class F>
CurvePoint<F> add_unchecked(const WeierstrassModel<F>& E, const CurvePoint<F>& P, const CurvePoint<F>& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const F &x1 = P.x, &y1 = P.y, &x2 = Q.x, &y2 = Q.y;
    F lambda, nu;
    if (x1 == x2) {
        F s = y1 + y2 + E.a1 * x2 + E.a3;
        if (s == field_const(x1, 0)) return CurvePoint<F>::at_infinity();
        F den = field_const(x1, 2) * y1 + E.a1 * x1 + E.a3;
        lambda = (field_const(x1, 3) * x1 * x1 + field_const(x1, 2) * E.a2 * x1 + E.a4 - E.a1 * y1) / den;
        nu = (-(x1 * x1 * x1) + E.a4 * x1 + field_const(x1, 2) * E.a6 - E.a3 * y1) / den;
    } else {
        F den = x2 - x1;
        lambda = (y2 - y1) / den;
        nu = (y1 * x2 - y2 * x1) / den;
    }
    F x3 = lambda * lambda + E.a1 * lambda - E.a2 - x1 - x2;
    F y3 = -(lambda + E.a1) * x3 - nu - E.a3;
    return {x3, y3};
}

template <class F>
CurvePoint<F> group_op(const WeierstrassModel<F>& E, const CurvePoint<F>& P, const CurvePoint<F>& Q) {
    require_on_curve(E, P);
    require_on_curve(E, Q);
    return add_unchecked(E, P, Q);
}

// Signed binary ladder over the non-adjacent form of n.
template <class F>
CurvePoint<F> scalar_mul(const WeierstrassModel<F>& E, const BigInt& n, const CurvePoint<F>& P) {
    require_on_curve(E, P);
    if (n == 0 || P.infinity) return CurvePoint<F>::at_infinity();
    BigInt k = abs(n);
    std::vector<int> naf;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) {
            int r = static_cast<int>(mpz_fdiv_ui(k.get_mpz_t(), 4));
            int digit = (r == 1) ? 1 : -1;
            naf.push_back(digit);
            k -= digit;
        } else {
            naf.push_back(0);
        }
        k /= 2;
    }
    CurvePoint<F> base = n < 0 ? negate(E, P) : P;
    CurvePoint<F> minus = negate(E, base);
    CurvePoint<F> acc = CurvePoint<F>::at_infinity();
    for (std::size_t i = naf.size(); i-- > 0;) {
        acc = add_unchecked(E, acc, acc);
        if (naf[i] == 1) acc = add_unchecked(E, acc, base);
        else if (naf[i] == -1) acc = add_unchecked(E, acc, minus);
    }
    return acc;
}

template <class F>
CurvePoint<F> scalar_mul(const WeierstrassModel<F>& E, long n, const CurvePoint<F>& P) {
    return scalar_mul(E, BigInt(n), P);
}

inline QuadraticPoint lift_point(const RationalPoint& P, const BigInt& d) {
    if (P.infinity) return QuadraticPoint::at_infinity();
    return {QuadraticElement(P.x, 0, d), QuadraticElement(P.y, 0, d)};
}

inline QuadraticPoint conjugate(const QuadraticPoint& P) {
    if (P.infinity) return P;
    return {P.x.conjugate(), P.y.conjugate()};
}

inline bool is_rational_point(const QuadraticPoint& P) {
    return P.infinity || (P.x.is_rational() && P.y.is_rational());
}

inline RationalPoint to_rational_point(const QuadraticPoint& P) {
    if (P.infinity) return {};
    if (!is_rational_point(P)) throw argument_error("point is not rational");
    return {P.x.a(), P.y.a()};
}

// Digit count of the largest integer in the coordinates.
inline std::size_t point_digits(const RationalPoint& P) {
    if (P.infinity) return 0;
    std::size_t m = 0;
    for (const BigRational* q : {&P.x, &P.y}) {
        m = std::max(m, mpz_sizeinbase(q->get_num_mpz_t(), 10));
        m = std::max(m, mpz_sizeinbase(q->get_den_mpz_t(), 10));
    }
    return m;
}
inline std::size_t point_digits(const QuadraticPoint& P) {
    return P.infinity ? 0 : std::max(P.x.digits(), P.y.digits());
}

}  // namespace heightforge
