#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "heightforge/cyclotomic.hpp"
#include "heightforge/torsion.hpp"

namespace heightforge {

struct FrobeniusData {
    BigInt p;
    BigInt a;
    IntPolynomial phi;  // X^2 - aX + p
    BigInt N_p;          // p + 1 - a = phi(1)
};

inline FrobeniusData char_poly_frobenius(const WeierstrassCurve& E, const BigInt& p) {
    if (!is_prime(p)) throw argument_error("Frobenius at non-prime " + p.get_str());
    if (!reduction_type(E, p).good()) throw unsupported_case_error("Frobenius needs good reduction at " + p.get_str());
    FrobeniusData f;
    f.p = p;
    f.N_p = count_points_mod_p(E, p);
    f.a = p + 1 - f.N_p;
    f.phi = IntPolynomial{p, -f.a, 1};
    if (f.phi.eval(BigInt(1)) != f.N_p) throw invariant_violation("phi(1) != N_p");
    return f;
}

// Element of Z[G] for the cyclic group generated by one automorphism.
struct GroupRingAction {
    IntPolynomial polynomial;
    GaloisAutomorphism automorphism;
};

inline QuadraticPoint apply_automorphism(const QuadraticPoint& P, const GaloisAutomorphism& g) {
    if (P.infinity) return P;
    return {apply_automorphism(P.x, g), apply_automorphism(P.y, g)};
}

// sum c_i sigma^i(P). With sigma of order 1 or 2 the powers collapse to P and sigma P,
// so only two scalar multiplications are needed.
inline QuadraticPoint apply_group_ring(const WeierstrassCurve& E, const GroupRingAction& action,
                                       const QuadraticPoint& P) {
    const auto& g = action.automorphism;
    if (g.kind == GaloisAutomorphism::Kind::cyclotomic_power)
        throw argument_error("cyclotomic automorphism cannot act on a point over a quadratic field");
    auto EL = base_change(E, point_field(P));
    require_on_curve(EL, P);
    const auto& c = action.polynomial.coeffs();
    BigInt even = 0, odd = 0;
    for (std::size_t i = 0; i < c.size(); ++i) (i % 2 == 0 ? even : odd) += c[i];
    if (g.kind == GaloisAutomorphism::Kind::identity) return scalar_mul(EL, BigInt(even + odd), P);
    QuadraticPoint sP = apply_automorphism(P, g);
    return add_unchecked(EL, scalar_mul(EL, even, P), scalar_mul(EL, odd, sP));
}

inline RationalPoint apply_group_ring(const WeierstrassCurve& E, const GroupRingAction& action,
                                      const RationalPoint& P) {
    if (action.automorphism.kind == GaloisAutomorphism::Kind::cyclotomic_power)
        throw argument_error("cyclotomic automorphism cannot act on a rational point");
    return to_rational_point(apply_group_ring(E, action, lift_point(P, 0)));
}

// Frobenius at p on the field of definition of P: trivial over Q and at split
// primes, conjugation at inert primes. Ramified primes are not covered.
inline GaloisAutomorphism frobenius_automorphism(const QuadraticPoint& P, const BigInt& p) {
    BigInt d = point_field(P);
    if (d == 0 || P.x.is_rational() && P.y.is_rational()) {
        if (d != 0 && splitting_type(QuadraticField(d), p).splitting == Splitting::ramified)
            throw argument_error(p.get_str() + " ramifies in Q(sqrt " + d.get_str() + ")");
        return GaloisAutomorphism::identity();
    }
    switch (splitting_type(QuadraticField(d), p).splitting) {
        case Splitting::split: return GaloisAutomorphism::identity();
        case Splitting::inert: return GaloisAutomorphism::conjugation();
        default: throw argument_error(p.get_str() + " ramifies in Q(sqrt " + d.get_str() + ")");
    }
}

struct AnnihilationReport {
    FrobeniusData frobenius;
    GaloisAutomorphism sigma;
    QuadraticPoint image;  // Phi_p(sigma) P
    bool torsion = false;  // image is O
    bool in_kernel = false;
    std::optional<Real> local_value;  // min over primes above p; empty when image = O
    std::vector<BigRational> v_z;     // one per prime above p
    Real bound;                        // log p (e = 1)
    bool bound_met = false;
};

inline AnnihilationReport verify_annihilation(const WeierstrassCurve& E, const QuadraticPoint& P, const BigInt& p) {
    if (P.infinity) throw argument_error("annihilation test at the identity");
    AnnihilationReport r;
    r.frobenius = char_poly_frobenius(E, p);
    r.sigma = frobenius_automorphism(P, p);
    r.image = apply_group_ring(E, {r.frobenius.phi, r.sigma}, P);
    r.bound = log(to_real(p));
    if (r.image.infinity) {
        r.torsion = true;
        r.in_kernel = true;
        r.bound_met = true;
        return r;
    }
    BigInt d = point_field(P);
    std::vector<std::optional<QuadraticPrime>> above;
    if (d == 0) above.emplace_back(std::nullopt);
    else
        for (const auto& Pr : primes_above(QuadraticField(d), p)) above.emplace_back(Pr);
    r.in_kernel = true;
    for (const auto& Pr : above) {
        KernelWitness w = Pr ? in_kernel_of_reduction(E, r.image, *Pr)
                             : in_kernel_of_reduction(E, to_rational_point(r.image), p);
        if (!w.in_kernel) {
            r.in_kernel = false;
            continue;
        }
        r.v_z.push_back(*w.v_z);
        Real lam = local_height_finite(E, r.image, p, Pr).value;
        if (!r.local_value || lam < *r.local_value) r.local_value = lam;
    }
    if (!r.in_kernel) throw invariant_violation("Phi_p(sigma)P not in the kernel of reduction at " + p.get_str());
    // exact comparison: lambda = c log p with rational c >= 1
    r.bound_met = true;
    for (const auto& Pr : above) {
        auto c = *local_height_finite(E, r.image, p, Pr).log_coefficient;
        if (c < 1) r.bound_met = false;
    }
    return r;
}

inline AnnihilationReport verify_annihilation(const WeierstrassCurve& E, const RationalPoint& P, const BigInt& p) {
    return verify_annihilation(E, lift_point(P, 0), p);
}

struct NontorsionCertificate {
    BigInt r;            // |resultant(Phi_p, X^m - 1)|
    BigInt minimal_r;    // smallest positive integer in the ideal (Phi_p, X^m - 1), divides r
    IntPolynomial a, b;  // a Phi_p + b (X^m - 1) = r
    GaloisAutomorphism sigma;
    long m = 1;
    QuadraticPoint rP;
    bool identity_holds = false;
};

inline IntPolynomial x_power_minus_one(long m) {
    std::vector<BigInt> c(m + 1, BigInt(0));
    c[0] = -1;
    c[m] = 1;
    return IntPolynomial(c);
}

// Checks rP = a(sigma) Phi_p(sigma) P + b(sigma) (sigma^m - 1) P by direct group-law evaluation.
inline NontorsionCertificate nontorsion_certificate(const WeierstrassCurve& E, const QuadraticPoint& P,
                                                    const BigInt& p, long m,
                                                    std::optional<GaloisAutomorphism> sigma = std::nullopt) {
    if (m < 1) throw argument_error("m must be positive");
    NontorsionCertificate c;
    c.m = m;
    c.sigma = sigma ? *sigma : frobenius_automorphism(P, p);
    if (m % c.sigma.order() != 0) throw argument_error("sigma has order not dividing m");
    FrobeniusData f = char_poly_frobenius(E, p);
    IntPolynomial xm = x_power_minus_one(m);
    BigInt res = resultant(f.phi, xm);
    if (res == 0) throw invariant_violation("resultant(Phi_p, X^m - 1) vanished");
    BezoutTriple bz = bezout_integer(f.phi, xm);
    c.r = abs(res);
    c.minimal_r = bz.r;
    if (c.r % bz.r != 0) throw invariant_violation("Bezout constant does not divide the resultant");
    BigInt scale = c.r / bz.r;
    c.a = bz.a * IntPolynomial::constant(scale);
    c.b = bz.b * IntPolynomial::constant(scale);
    if (c.a * f.phi + c.b * xm != IntPolynomial::constant(c.r))
        throw invariant_violation("Bezout identity failed after scaling");
    auto EL = base_change(E, point_field(P));
    require_on_curve(EL, P);
    QuadraticPoint phiP = apply_group_ring(E, {f.phi, c.sigma}, P);
    QuadraticPoint mP = apply_group_ring(E, {xm, c.sigma}, P);
    QuadraticPoint lhs = scalar_mul(EL, c.r, P);
    QuadraticPoint rhs = add_unchecked(EL, apply_group_ring(E, {c.a, c.sigma}, phiP),
                                       apply_group_ring(E, {c.b, c.sigma}, mP));
    c.rP = lhs;
    c.identity_holds = lhs == rhs;
    return c;
}

inline NontorsionCertificate nontorsion_certificate(const WeierstrassCurve& E, const RationalPoint& P,
                                                    const BigInt& p, long m) {
    return nontorsion_certificate(E, lift_point(P, 0), p, m, GaloisAutomorphism::identity());
}

}  // namespace heightforge
