#pragma once

#include <vector>

#include "heightforge/real.hpp"
#include "heightforge/weierstrass.hpp"

namespace heightforge {

// b-invariants of a rational model as Reals, plus log|disc|.
struct ArchimedeanData {
    Real b2, b4, b6, b8;
    Real log_abs_disc;

    static ArchimedeanData of(const WeierstrassCurve& E) {
        return {to_real(E.b2), to_real(E.b4), to_real(E.b6), to_real(E.b8), log_abs(E.disc)};
    }
};

struct ArchimedeanResult {
    Real value;
    Real error_bound;
    int iterations = 0;
};

namespace detail {

inline Real magnitude(const Real& t) { return abs(t); }
inline Real magnitude(const Complex& t) { return abs(t); }

}  // namespace detail

// Local height at an archimedean place from the x-coordinate alone, by the
// switching duplication series of Silverman (Math. Comp. 1988): each step either
// doubles in the variable t = 1/x or in t = 1/(x+1), picking whichever keeps the
// denominator away from zero. T is Real or Complex.
template <class T>
ArchimedeanResult archimedean_lambda(const ArchimedeanData& A, const T& x, const Real& tolerance,
                                     int max_iterations = 400) {
    using detail::magnitude;
    const T one(1);
    T t;
    bool beta;
    if (magnitude(x) < Real(0.5)) {
        t = one / (x + one);
        beta = false;
    } else {
        t = one / x;
        beta = true;
    }
    Real mu = -log(magnitude(t));
    Real f = 1;
    const Real B2 = A.b2 - 12, B4 = A.b4 - A.b2 + 6, B6 = A.b6 - 2 * A.b4 + A.b2 - 4,
               B8 = A.b8 - 3 * A.b6 + 3 * A.b4 - A.b2 + 3;
    // |log|z|| and |log|z +- w|| stay below this for the switching choice; used for the tail bound
    const Real step_bound = log(Real(2) + 4 * (abs(A.b2) + abs(A.b4) + abs(A.b6) + abs(A.b8) + 32));
    int n = 0;
    for (; n < max_iterations; ++n) {
        f /= 4;
        T w, z, zw;
        T t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        if (beta) {
            w = T(A.b6) * t4 + T(2 * A.b4) * t3 + T(A.b2) * t2 + T(4) * t;
            z = one - T(A.b4) * t2 - T(2 * A.b6) * t3 - T(A.b8) * t4;
            zw = z + w;
        } else {
            w = T(B6) * t4 + T(2 * B4) * t3 + T(B2) * t2 + T(4) * t;
            z = one - T(B4) * t2 - T(2 * B6) * t3 - T(B8) * t4;
            zw = z - w;
        }
        if (magnitude(w) <= 2 * magnitude(z)) {
            mu += f * log(magnitude(z));
            t = w / z;
        } else {
            mu += f * log(magnitude(zw));
            t = w / zw;
            beta = !beta;
        }
        if (f * step_bound / 3 < tolerance) break;
    }
    if (n == max_iterations) throw numeric_error("archimedean series did not converge");
    return {mu / 2 - A.log_abs_disc / 12, f * step_bound / 6, n + 1};
}

}  // namespace heightforge
