#pragma once

#include <cmath>
#include <optional>

#include "heightforge/weierstrass.hpp"

namespace heightforge {

enum class ReductionType { good, split_multiplicative, nonsplit_multiplicative, additive };

inline const char* to_string(ReductionType t) {
    switch (t) {
        case ReductionType::good: return "good";
        case ReductionType::split_multiplicative: return "split-multiplicative";
        case ReductionType::nonsplit_multiplicative: return "nonsplit-multiplicative";
        default: return "additive";
    }
}

struct ReductionInfo {
    BigInt p;
    ReductionType type = ReductionType::good;
    ValuationValue v_disc, v_c4, v_j;

    bool good() const { return type == ReductionType::good; }
    bool multiplicative() const {
        return type == ReductionType::split_multiplicative || type == ReductionType::nonsplit_multiplicative;
    }
};

inline WeierstrassModel<FqElement> reduce_curve(const WeierstrassCurve& E, const ResidueField& F) {
    auto r = [&F](const BigRational& a) { return FqElement(F, reduce_rational(a, F.p), 0); };
    return {r(E.a1), r(E.a2), r(E.a3), r(E.a4), r(E.a6)};
}

inline void require_p_integral(const WeierstrassCurve& E, const BigInt& p) {
    for (const BigRational* a : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6})
        if (*a != 0 && valuation_p(*a, p).value < 0)
            throw non_minimal_model_error("model is not integral at " + p.get_str() +
                                          "; supply a minimal model");
}

// Singular point of the reduction mod small p, by search.
inline std::optional<CurvePoint<FqElement>> singular_point(const WeierstrassModel<FqElement>& Ebar) {
    const ResidueField& F = Ebar.a1.F;
    for (u64 i = 0; i < F.p; ++i)
        for (u64 j = 0; j < F.p; ++j) {
            FqElement x(F, i, 0), y(F, j, 0);
            CurvePoint<FqElement> P(x, y);
            if (!on_curve(Ebar, P)) continue;
            FqElement fy = field_const(x, 2) * y + Ebar.a1 * x + Ebar.a3;
            FqElement fx = Ebar.a1 * y - field_const(x, 3) * x * x - field_const(x, 2) * Ebar.a2 * x - Ebar.a4;
            if (fx.is_zero() && fy.is_zero()) return P;
        }
    return std::nullopt;
}

inline ReductionInfo reduction_type(const WeierstrassCurve& E, const BigInt& p) {
    if (!is_prime(p)) throw argument_error("reduction type at non-prime " + p.get_str());
    require_p_integral(E, p);
    ReductionInfo info;
    info.p = p;
    info.v_disc = valuation_p(E.disc, p);
    info.v_c4 = valuation_p(E.c4, p);
    info.v_j = valuation_p(j_invariant(E), p);
    if (!(info.v_disc.value < 12 || info.v_c4 < ValuationValue::finite(4)))
        throw non_minimal_model_error("minimality certificate fails at " + p.get_str() +
                                      " (v(disc) >= 12 and v(c4) >= 4); supply a minimal model");
    if (info.v_disc.value == 0) {
        info.type = ReductionType::good;
    } else if (info.v_c4 == ValuationValue::finite(0)) {
        bool split;
        if (p >= 5) {
            split = legendre(reduce_rational(-E.c6, p.get_ui()), p.get_ui()) == 1;
        } else {
            // tangent cone at the node: T^2 + a1 T - (3 x0 + a2) splits over F_p
            auto Ebar = reduce_curve(E, ResidueField::prime(p.get_ui()));
            auto S = singular_point(Ebar);
            if (!S) throw invariant_violation("multiplicative reduction without a singular point");
            FqElement c = -(field_const(S->x, 3) * S->x + Ebar.a2);
            split = false;
            for (u64 t = 0; t < p.get_ui(); ++t) {
                FqElement T(Ebar.a1.F, t, 0);
                if ((T * T + Ebar.a1 * T + c).is_zero()) split = true;
            }
        }
        info.type = split ? ReductionType::split_multiplicative : ReductionType::nonsplit_multiplicative;
    } else {
        info.type = ReductionType::additive;
    }
    return info;
}

struct ReducedPoint {
    CurvePoint<FqElement> point;  // infinity when P reduces to O
    bool singular = false;
};

inline bool is_singular_point(const WeierstrassModel<FqElement>& Ebar, const CurvePoint<FqElement>& P) {
    if (P.infinity) return false;
    FqElement fy = field_const(P.x, 2) * P.y + Ebar.a1 * P.x + Ebar.a3;
    FqElement fx = Ebar.a1 * P.y - field_const(P.x, 3) * P.x * P.x - field_const(P.x, 2) * Ebar.a2 * P.x - Ebar.a4;
    return fx.is_zero() && fy.is_zero();
}

// True when P is integral at the prime and lands on the singular point of the
// reduction; no restriction on the reduction type.
inline bool reduces_to_singular_point(const WeierstrassCurve& E, const QuadraticPoint& P, const BigInt& p,
                                      const std::optional<QuadraticPrime>& Pr) {
    if (P.infinity) return false;
    require_p_integral(E, p);
    ResidueField F = Pr ? residue_field(*Pr) : ResidueField::prime(p.get_ui());
    auto Ebar = reduce_curve(E, F);
    auto v = [&](const QuadraticElement& t) {
        if (t.is_zero()) return BigRational(1);
        return Pr ? quad_valuation(t, *Pr) : BigRational(valuation_p(t.a(), p).value);
    };
    if (v(P.x) < 0) return false;
    auto r = [&](const QuadraticElement& t) {
        return Pr ? residue(t, *Pr) : FqElement(F, reduce_rational(t.a(), F.p), 0);
    };
    return is_singular_point(Ebar, CurvePoint<FqElement>(r(P.x), r(P.y)));
}

inline ReducedPoint reduce_point(const WeierstrassCurve& E, const RationalPoint& P, const BigInt& p) {
    require_on_curve(E, P);
    ReductionInfo info = reduction_type(E, p);
    if (info.type == ReductionType::additive)
        throw unsupported_case_error("reduction map at an additive prime is not supported");
    ResidueField F = ResidueField::prime(p.get_ui());
    auto Ebar = reduce_curve(E, F);
    ReducedPoint out;
    if (P.infinity || (P.x != 0 && valuation_p(P.x, p).value < 0)) return out;
    out.point = CurvePoint<FqElement>(FqElement(F, reduce_rational(P.x, F.p), 0),
                                      FqElement(F, reduce_rational(P.y, F.p), 0));
    out.singular = is_singular_point(Ebar, out.point);
    return out;
}

inline ReducedPoint reduce_point(const WeierstrassCurve& E, const QuadraticPoint& P, const QuadraticPrime& Pr) {
    require_on_curve(base_change(E, Pr.d), P);
    ReductionInfo info = reduction_type(E, Pr.p);
    if (info.type == ReductionType::additive)
        throw unsupported_case_error("reduction map at an additive prime is not supported");
    ResidueField F = residue_field(Pr);
    auto Ebar = reduce_curve(E, F);
    ReducedPoint out;
    if (P.infinity || (!P.x.is_zero() && quad_valuation(P.x, Pr) < 0)) return out;
    out.point = CurvePoint<FqElement>(residue(P.x, Pr), residue(P.y, Pr));
    out.singular = is_singular_point(Ebar, out.point);
    return out;
}

struct KernelWitness {
    bool in_kernel = false;
    // v(z) with z = -x/y, in units where w(p) = 1 (so 1/e is the smallest positive value).
    std::optional<BigRational> v_z;  // empty means +infinity (P = O)
};

inline KernelWitness in_kernel_of_reduction(const WeierstrassCurve& E, const RationalPoint& P, const BigInt& p) {
    require_on_curve(E, P);
    if (!reduction_type(E, p).good()) throw unsupported_case_error("kernel test needs good reduction at " + p.get_str());
    if (P.infinity) return {true, std::nullopt};
    BigRational vx = P.x == 0 ? BigRational(1) : BigRational(valuation_p(P.x, p).value);
    if (vx < 0) {
        BigRational vy = valuation_p(P.y, p).value;
        return {true, vx - vy};
    }
    // integral point: z is a unit or lies in the maximal ideal only through y; report v(z) <= 0 side
    return {false, std::nullopt};
}

inline KernelWitness in_kernel_of_reduction(const WeierstrassCurve& E, const QuadraticPoint& P,
                                            const QuadraticPrime& Pr) {
    require_on_curve(base_change(E, Pr.d), P);
    if (!reduction_type(E, Pr.p).good())
        throw unsupported_case_error("kernel test needs good reduction at " + Pr.p.get_str());
    if (P.infinity) return {true, std::nullopt};
    if (P.x.is_zero()) return {false, std::nullopt};
    BigRational vx = quad_valuation(P.x, Pr);
    if (vx < 0) return {true, vx - quad_valuation(P.y, Pr)};
    return {false, std::nullopt};
}

// N_p = 1 + #affine solutions; Legendre sums for odd p, enumeration for p = 2.
inline long count_points_mod_p(const WeierstrassCurve& E, const BigInt& p) {
    ReductionInfo info = reduction_type(E, p);
    if (!info.good()) throw unsupported_case_error("point count needs good reduction at " + p.get_str());
    if (!p.fits_ulong_p() || p > 100000000) throw unsupported_case_error("prime too large for naive counting");
    u64 q = p.get_ui();
    u64 a1 = reduce_rational(E.a1, q), a2 = reduce_rational(E.a2, q), a3 = reduce_rational(E.a3, q),
        a4 = reduce_rational(E.a4, q), a6 = reduce_rational(E.a6, q);
    long N = 1;
    if (q == 2) {
        for (u64 x = 0; x < 2; ++x)
            for (u64 y = 0; y < 2; ++y)
                if ((y * y + a1 * x * y + a3 * y) % 2 == (x * x * x + a2 * x * x + a4 * x + a6) % 2) ++N;
    } else {
        for (u64 x = 0; x < q; ++x) {
            u64 fx = (mulmod(mulmod(x, x, q), x, q) + mulmod(a2, mulmod(x, x, q), q) + mulmod(a4, x, q) + a6) % q;
            u64 l = (mulmod(a1, x, q) + a3) % q;
            u64 D = (mulmod(l, l, q) + mulmod(4, fx, q)) % q;
            N += 1 + legendre(D, q);
        }
    }
    long a = static_cast<long>(q) + 1 - N;
    if (static_cast<double>(a) * a > 4.0 * static_cast<double>(q))
        throw invariant_violation("Hasse bound violated at p = " + p.get_str());
    return N;
}

}  // namespace heightforge
