#pragma once

#include "heightforge/heights.hpp"

namespace heightforge {

enum class TorsionStatus { torsion, nontorsion, inconclusive };

inline const char* to_string(TorsionStatus s) {
    switch (s) {
        case TorsionStatus::torsion: return "torsion";
        case TorsionStatus::nontorsion: return "nontorsion";
        default: return "inconclusive";
    }
}

struct TorsionResult {
    TorsionStatus status = TorsionStatus::inconclusive;
    int order = 0;  // set for torsion
    std::optional<Real> height;
    Real height_error = 0;
};

inline Real default_torsion_threshold() { return Real("1e-3"); }

// Field of definition of a point: 0 for Q, else the squarefree d of Q(sqrt d).
inline BigInt point_field(const QuadraticPoint& P) {
    if (P.infinity) return 0;
    return P.x.d() != 0 ? P.x.d() : P.y.d();
}

// Torsion when [n]P = O for some n <= bound. Torsion orders over quadratic
// fields never exceed 18, so the default 24 is a safe cutoff there.
inline TorsionResult torsion_test(const WeierstrassCurve& E, const QuadraticPoint& P, int bound = 24,
                                  const Real& threshold = default_torsion_threshold()) {
    TorsionResult out;
    if (bound < 1) throw argument_error("torsion bound must be positive");
    if (P.infinity) {
        out.status = TorsionStatus::torsion;
        out.order = 1;
        return out;
    }
    auto EL = base_change(E, point_field(P));
    require_on_curve(EL, P);
    // a height clearly above the threshold already rules out torsion
    CanonicalHeight h = canonical_height(E, P);
    out.height = h.value;
    out.height_error = h.error_bound;
    if (h.value - h.error_bound > threshold) {
        out.status = TorsionStatus::nontorsion;
        return out;
    }
    QuadraticPoint Q = P;
    for (int n = 1; n <= bound; ++n) {
        if (Q.infinity) {
            out.status = TorsionStatus::torsion;
            out.order = n;
            return out;
        }
        if (n < bound) Q = add_unchecked(EL, Q, P);
    }
    out.status = TorsionStatus::inconclusive;
    return out;
}

inline TorsionResult torsion_test(const WeierstrassCurve& E, const RationalPoint& P, int bound = 24,
                                  const Real& threshold = default_torsion_threshold()) {
    return torsion_test(E, lift_point(P, 0), bound, threshold);
}

}  // namespace heightforge
