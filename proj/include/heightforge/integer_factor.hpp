#pragma once

#include <map>
#include <vector>

#include "heightforge/exact_arith.hpp"

namespace heightforge {

struct Factorization {
    std::map<BigInt, long> primes;
    BigInt cofactor = 1;  // unfactored part (> 1 only when the effort budget ran out)

    bool complete() const { return cofactor == 1; }
};

namespace detail {

inline BigInt pollard_brent(const BigInt& n, unsigned long seed, unsigned long budget) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    BigInt y = seed % n, c = (seed * 7 + 3) % n, g = 1, r = 1, q = 1, x, ys;
    const unsigned long m = 64;
    unsigned long steps = 0;
    auto f = [&](const BigInt& v) {
        BigInt t = v * v + c;
        mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
        return t;
    };
    while (g == 1) {
        x = y;
        for (BigInt i = 0; i < r; ++i) y = f(y);
        BigInt k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < m && k + i < r; ++i) {
                y = f(y);
                q = q * abs(x - y) % n;
            }
            g = gcd(q, n);
            k += m;
            steps += m;
            if (steps > budget) return 0;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd(abs(x - ys), n);
        } while (g == 1);
    }
    return g == n ? BigInt(0) : g;
}

inline void split(const BigInt& n, Factorization& out, unsigned long budget, std::size_t digit_limit) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.primes[n] += 1;
        return;
    }
    if (is_perfect_square(n)) {
        Factorization half;
        split(isqrt(n), half, budget, digit_limit);
        for (const auto& [p, e] : half.primes) out.primes[p] += 2 * e;
        out.cofactor *= half.cofactor * half.cofactor;
        return;
    }
    if (mpz_sizeinbase(n.get_mpz_t(), 10) <= digit_limit) {
        for (unsigned long seed = 2; seed < 5; ++seed) {
            BigInt d = pollard_brent(n, seed, budget);
            if (d != 0 && d != 1 && d != n) {
                split(d, out, budget, digit_limit);
                split(BigInt(n / d), out, budget, digit_limit);
                return;
            }
        }
    }
    out.cofactor *= n;
}

}  // namespace detail

// Trial division to trial_bound, then Pollard-Brent with a bounded number of steps
// on composite parts of at most rho_digit_limit digits.
inline Factorization factor_integer(const BigInt& n, unsigned long trial_bound = 100000,
                                    unsigned long rho_budget = 200000, std::size_t rho_digit_limit = 60) {
    if (n == 0) throw argument_error("factor of zero");
    Factorization out;
    BigInt m = abs(n);
    const bool small = m.fits_ulong_p();
    for (unsigned long p = 2; p <= trial_bound && m > 1; p += (p == 2 ? 1 : 2)) {
        if (small && p * p > m.get_ui()) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            long e = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            }
            out.primes[BigInt(p)] = e;
        }
    }
    detail::split(m, out, rho_budget, rho_digit_limit);
    return out;
}

inline std::vector<BigInt> prime_divisors(const BigInt& n) {
    Factorization f = factor_integer(n);
    if (!f.complete()) throw resource_error("could not fully factor " + n.get_str());
    std::vector<BigInt> v;
    for (const auto& [p, e] : f.primes) v.push_back(p);
    return v;
}

// n = core * s^2 with core squarefree (sign carried by core).
inline std::pair<BigInt, BigInt> squarefree_decomposition(const BigInt& n) {
    if (n == 0) throw argument_error("squarefree part of zero");
    Factorization f = factor_integer(n);
    if (!f.complete()) throw resource_error("could not fully factor " + n.get_str());
    BigInt core = n < 0 ? -1 : 1, s = 1;
    for (const auto& [p, e] : f.primes) {
        if (e % 2) core *= p;
        s *= ipow(p, static_cast<unsigned long>(e / 2));
    }
    return {core, s};
}

}  // namespace heightforge
