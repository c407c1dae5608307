#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cstdint>
#include <sstream>
#include <string>

#ifndef HEIGHTFORGE_REAL_DIGITS
#define HEIGHTFORGE_REAL_DIGITS 60
#endif

namespace heightforge {

using Real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<HEIGHTFORGE_REAL_DIGITS>,
    boost::multiprecision::et_off>;

using Complex = boost::multiprecision::number<
    boost::multiprecision::complex_adaptor<
        boost::multiprecision::cpp_bin_float<HEIGHTFORGE_REAL_DIGITS>>,
    boost::multiprecision::et_off>;

inline constexpr int real_digits = HEIGHTFORGE_REAL_DIGITS;

inline const Real& real_pi() {
    static const Real v = boost::multiprecision::default_ops::get_constant_pi<
        typename Real::backend_type>();
    return v;
}

inline const Real& real_log2() {
    static const Real v = log(Real(2));
    return v;
}

// Top bits of |n| as a Real, scaled back by the dropped exponent.
// Works for integers with millions of digits without going through strings.
inline Real to_real(const mpz_class& n) {
    if (n == 0) return Real(0);
    constexpr std::size_t keep = 256;
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    mpz_class top = abs(n);
    long shift = 0;
    if (bits > keep) {
        shift = static_cast<long>(bits - keep);
        mpz_fdiv_q_2exp(top.get_mpz_t(), top.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    }
    Real r = 0;
    std::size_t words = (mpz_sizeinbase(top.get_mpz_t(), 2) + 63) / 64;
    for (std::size_t i = words; i-- > 0;) {
        mpz_class chunk;
        mpz_fdiv_q_2exp(chunk.get_mpz_t(), top.get_mpz_t(), static_cast<mp_bitcnt_t>(64 * i));
        mpz_fdiv_r_2exp(chunk.get_mpz_t(), chunk.get_mpz_t(), 64);
        std::uint64_t w = 0;
        mpz_export(&w, nullptr, -1, sizeof(w), 0, 0, chunk.get_mpz_t());
        r = ldexp(r, 64) + Real(w);
    }
    if (shift) r = ldexp(r, static_cast<int>(shift));
    return n < 0 ? -r : r;
}

inline Real to_real(const mpq_class& q) {
    return to_real(mpz_class(q.get_num())) / to_real(mpz_class(q.get_den()));
}

// log|n| for n != 0, safe far beyond the double exponent range.
inline Real log_abs(const mpz_class& n) {
    return log(to_real(mpz_class(abs(n))));
}

inline Real log_abs(const mpq_class& q) {
    return log_abs(mpz_class(q.get_num())) - log_abs(mpz_class(q.get_den()));
}

inline std::string to_decimal(const Real& x, int digits = 20) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

}  // namespace heightforge
