#pragma once

#include <complex>
#include <optional>

#include "heightforge/exact_arith.hpp"
#include "heightforge/real.hpp"

namespace heightforge {

// Tate parameters. Archimedean: complex u, q (the formula needs |1 - u|, so
// magnitudes alone do not determine it; from_magnitudes takes u, q positive real).
// Nonarchimedean: valuations in uniformizer units, plus v(1 - u) for the unit branch.
struct TateParameters {
    enum class Kind { archimedean, nonarchimedean };
    Kind kind = Kind::archimedean;
    Complex u, q;
    BigRational v_u = 0, v_q = 1, v_one_minus_u = 0;

    static TateParameters archimedean(const Complex& u, const Complex& q) {
        TateParameters t;
        t.u = u;
        t.q = q;
        return t;
    }
    static TateParameters from_magnitudes(const Real& abs_u, const Real& abs_q) {
        return archimedean(Complex(abs_u), Complex(abs_q));
    }
    static TateParameters nonarchimedean(const BigRational& v_u, const BigRational& v_q,
                                         const BigRational& v_one_minus_u = 0) {
        TateParameters t;
        t.kind = Kind::nonarchimedean;
        t.v_u = v_u;
        t.v_q = v_q;
        t.v_one_minus_u = v_one_minus_u;
        return t;
    }
};

struct QSeriesValue {
    Real value;
    // Nonarchimedean only: value = log_coefficient * log p, exactly.
    std::optional<BigRational> log_coefficient;
    int terms = 0;
};

// (1/2) B2(log|u|/log|q|) log|q^-1| - log|1-u| - sum_n log|(1 - q^n u)(1 - q^n/u)|
inline QSeriesValue qseries_evaluate(const TateParameters& t, const BigInt& p = 0, int e = 1,
                                     const Real& term_tolerance = Real("1e-15")) {
    if (t.kind == TateParameters::Kind::nonarchimedean) {
        if (!(t.v_q > 0) || t.v_u < 0 || !(t.v_u < t.v_q))
            throw argument_error("nonarchimedean Tate parameters need 0 <= v(u) < v(q)");
        if (!is_prime(p) || e < 1) throw argument_error("nonarchimedean evaluation needs a prime and e >= 1");
        // |q^n u|, |q^n / u| < 1 for n >= 1, so the product terms are units
        BigRational c = bernoulli2_periodic(t.v_u / t.v_q) * t.v_q / 2;
        if (t.v_u == 0) {
            if (t.v_one_minus_u < 0) throw argument_error("v(1-u) < 0 impossible for a unit u");
            c += t.v_one_minus_u;
        }
        c /= e;
        return {to_real(c) * log(to_real(p)), c, 0};
    }
    Real aq = abs(t.q), au = abs(t.u);
    if (!(aq > 0) || !(aq < exp(-real_pi())))
        throw argument_error("archimedean Tate parameters need 0 < |q| < e^-pi");
    if (!(au > aq) || au > 1) throw argument_error("archimedean u outside the fundamental domain |q| < |u| <= 1");
    const Complex one(1);
    if (abs(one - t.u) == 0) throw argument_error("u = 1 is the identity");
    Real L = -log(aq);
    Real s = log(au) / log(aq);
    Real b2 = s * s - s + Real(1) / 6;
    Real value = b2 * L / 2 - log(abs(one - t.u));
    Complex qn = t.q;
    int n = 1;
    for (; n < 100000; ++n) {
        Complex a = qn * t.u, b = qn / t.u;
        Real term = log(abs(one - a)) + log(abs(one - b));
        value -= term;
        if (abs(a) < term_tolerance && abs(b) < term_tolerance) break;
        qn *= t.q;
    }
    return {value, std::nullopt, n};
}

// c2 for the fundamental domain |q|^(1/2) <= |u| <= 1:
//   -log|1-u| >= -log 2,  -sum log|1-q^n u| >= -|q|/(1-|q|),
//   -sum log|1-q^n/u| >= -|q|^(1/2)/(1-|q|).
inline Real c2_tail_bound(const Real& abs_q) {
    return real_log2() + (abs_q + sqrt(abs_q)) / (1 - abs_q);
}

inline Real archimedean_lower_bound(const Real& abs_q) {
    if (!(abs_q > 0) || !(abs_q < exp(-real_pi()))) throw argument_error("need 0 < |q| < e^-pi");
    return log(abs_q) / 24 - c2_tail_bound(abs_q);
}

namespace detail {

using cd = std::complex<double>;

inline cd j_of_q(cd q) {
    cd e4 = 1, delta = q, qn = 1;
    for (int n = 1; n < 200; ++n) {
        qn *= q;
        if (std::abs(qn) < 1e-18) break;
        double s3 = 0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) s3 += double(d) * d * d;
        e4 += 240.0 * s3 * qn;
        cd f = 1.0 - qn, f24 = 1;
        for (int k = 0; k < 24; ++k) f24 *= f;
        delta *= f24;
    }
    return e4 * e4 * e4 / delta;
}

}  // namespace detail

// |q| = |e^(2 pi i tau)| for tau in the standard fundamental domain with j(tau) = j.
// Real j only; bisection along the boundary arc that carries real j-values.
inline double abs_q_from_j(double j) {
    using detail::cd;
    const double pi = 3.14159265358979323846;
    auto real_j = [](cd q) { return detail::j_of_q(q).real(); };
    if (j >= 1728) {
        double lo = 1, hi = 1;  // tau = i t
        while (real_j(cd(std::exp(-2 * pi * hi), 0)) < j) hi *= 2;
        for (int k = 0; k < 200; ++k) {
            double mid = (lo + hi) / 2;
            (real_j(cd(std::exp(-2 * pi * mid), 0)) < j ? lo : hi) = mid;
        }
        return std::exp(-2 * pi * lo);
    }
    if (j <= 0) {
        double lo = std::sqrt(3.0) / 2, hi = 1;  // tau = 1/2 + i t, q = -e^(-2 pi t)
        while (real_j(cd(-std::exp(-2 * pi * hi), 0)) > j) hi *= 2;
        for (int k = 0; k < 200; ++k) {
            double mid = (lo + hi) / 2;
            (real_j(cd(-std::exp(-2 * pi * mid), 0)) > j ? lo : hi) = mid;
        }
        return std::exp(-2 * pi * lo);
    }
    double lo = pi / 3, hi = pi / 2;  // tau = e^(i theta)
    auto q_of = [pi](double th) { return std::exp(cd(0, 2 * pi) * cd(std::cos(th), std::sin(th))); };
    for (int k = 0; k < 200; ++k) {
        double mid = (lo + hi) / 2;
        (real_j(q_of(mid)) < j ? lo : hi) = mid;
    }
    return std::exp(-2 * pi * std::sin(lo));
}

}  // namespace heightforge
