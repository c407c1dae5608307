#pragma once

#include <cstdint>
#include <string>

#include "heightforge/errors.hpp"

namespace heightforge {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

// Legendre symbol for odd prime p: 0, 1 or -1.
inline int legendre(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

inline u64 smallest_nonresidue(u64 p) {
    for (u64 n = 2; n < p; ++n)
        if (legendre(n, p) == -1) return n;
    throw argument_error("no quadratic nonresidue mod " + std::to_string(p));
}

// Smallest nonnegative square root of a mod odd p, or p when none exists.
inline u64 sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (legendre(a, p) != 1) return p;
    // Tonelli-Shanks
    u64 q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    u64 z = smallest_nonresidue(p);
    u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r <= p - r ? r : p - r;
}

// F_p, or F_{p^2} = F_p[t]/(t^2 - m1*t - m0).
struct ResidueField {
    u64 p = 2;
    int degree = 1;
    u64 m0 = 0, m1 = 0;

    static ResidueField prime(u64 p) { return {p, 1, 0, 0}; }

    // Deterministic modulus: t^2 = n with n the smallest nonresidue; t^2 = t + 1 for p = 2.
    static ResidueField quadratic(u64 p) {
        if (p == 2) return {2, 2, 1, 1};
        return {p, 2, smallest_nonresidue(p), 0};
    }

    u64 order() const { return degree == 1 ? p : p * p; }
    bool operator==(const ResidueField&) const = default;
};

struct FqElement {
    ResidueField F;
    u64 c0 = 0, c1 = 0;

    FqElement() = default;
    FqElement(const ResidueField& field, long n) : F(field) {
        long r = n % static_cast<long>(F.p);
        c0 = static_cast<u64>(r < 0 ? r + static_cast<long>(F.p) : r);
    }
    FqElement(const ResidueField& field, u64 a, u64 b) : F(field), c0(a % field.p), c1(b % field.p) {
        if (F.degree == 1 && c1 != 0) throw argument_error("F_p element with t-component");
    }

    bool is_zero() const { return c0 == 0 && c1 == 0; }

    friend bool operator==(const FqElement& a, const FqElement& b) {
        return a.c0 == b.c0 && a.c1 == b.c1 && a.F == b.F;
    }
    friend FqElement operator+(const FqElement& a, const FqElement& b) {
        u64 p = a.F.p;
        return FqElement(a.F, (a.c0 + b.c0) % p, (a.c1 + b.c1) % p);
    }
    friend FqElement operator-(const FqElement& a) {
        u64 p = a.F.p;
        return FqElement(a.F, (p - a.c0) % p, (p - a.c1) % p);
    }
    friend FqElement operator-(const FqElement& a, const FqElement& b) { return a + (-b); }
    friend FqElement operator*(const FqElement& a, const FqElement& b) {
        u64 p = a.F.p;
        if (a.F.degree == 1) return FqElement(a.F, mulmod(a.c0, b.c0, p), 0);
        // (a0 + a1 t)(b0 + b1 t) with t^2 = m1 t + m0
        u64 hi = mulmod(a.c1, b.c1, p);
        u64 r0 = (mulmod(a.c0, b.c0, p) + mulmod(hi, a.F.m0, p)) % p;
        u64 r1 = (mulmod(a.c0, b.c1, p) + mulmod(a.c1, b.c0, p) + mulmod(hi, a.F.m1, p)) % p;
        return FqElement(a.F, r0, r1);
    }
    FqElement inverse() const {
        u64 p = F.p;
        if (is_zero()) throw argument_error("inverse of zero in residue field");
        if (F.degree == 1) return FqElement(F, powmod(c0, p - 2, p), 0);
        // norm c0^2 + m1 c0 c1 - m0 c1^2; inverse ((c0 + m1 c1) - c1 t) / norm
        u64 n = (mulmod(c0, c0, p) + mulmod(F.m1, mulmod(c0, c1, p), p) + p -
                 mulmod(F.m0, mulmod(c1, c1, p), p)) % p;
        u64 ni = powmod(n, p - 2, p);
        return FqElement(F, mulmod((c0 + mulmod(F.m1, c1, p)) % p, ni, p), mulmod((p - c1) % p, ni, p));
    }
    friend FqElement operator/(const FqElement& a, const FqElement& b) { return a * b.inverse(); }

    std::string str() const {
        if (F.degree == 1) return std::to_string(c0);
        return std::to_string(c0) + "+" + std::to_string(c1) + "*t";
    }
};

inline FqElement field_const(const FqElement& like, long n) { return FqElement(like.F, n); }

}  // namespace heightforge
