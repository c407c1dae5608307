#pragma once

#include <string>

#include "heightforge/power_series.hpp"
#include "heightforge/reduction.hpp"

namespace heightforge {

struct FormalGroupLaw {
    std::string name;
    TruncSeries2 F;
    TruncSeries1 inv;
    int N = 0;
    bool integral = true;
};

inline int default_series_cap() { return 16; }

inline FormalGroupLaw additive_formal_group(int N) {
    FormalGroupLaw G;
    G.name = "additive";
    G.N = N;
    G.F = TruncSeries2::variable(0, N) + TruncSeries2::variable(1, N);
    G.inv = -TruncSeries1::variable(0, N);
    return G;
}

// F = x + y + xy, i.e. (1 + x)(1 + y) - 1.
inline FormalGroupLaw multiplicative_formal_group(int N) {
    FormalGroupLaw G;
    G.name = "multiplicative";
    G.N = N;
    auto x = TruncSeries2::variable(0, N), y = TruncSeries2::variable(1, N);
    G.F = x + y + x * y;
    auto t = TruncSeries1::variable(0, N);
    G.inv = (TruncSeries1::constant(1, N) + t).reciprocal() - TruncSeries1::constant(1, N);
    return G;
}

// w(z) = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3 by fixed-point
// iteration; each pass fixes at least one more coefficient.
inline TruncSeries1 formal_w(const WeierstrassCurve& E, int N) {
    auto z = TruncSeries1::variable(0, N);
    auto c = [N](const BigRational& a) { return TruncSeries1::constant(a, N); };
    TruncSeries1 w = z * z * z;
    for (int pass = 0; pass <= N; ++pass) {
        TruncSeries1 next = z * z * z + c(E.a1) * z * w + c(E.a2) * z * z * w + c(E.a3) * w * w +
                            c(E.a4) * z * w * w + c(E.a6) * w * w * w;
        if (next == w) break;
        w = next;
    }
    return w;
}

// Group law in z = -x/y: third intersection z3 of the line through the two
// points, then F = i(z3) with i(z) = -z / (1 - a1 z - a3 w(z)).
inline FormalGroupLaw elliptic_formal_group(const WeierstrassCurve& E, int N, int cap = default_series_cap()) {
    if (!is_integral_model(E)) throw argument_error("formal group needs integral a-invariants");
    if (N < 1 || N > cap)
        throw argument_error("series degree must lie in [1, " + std::to_string(cap) + "]");
    const int M = N + 3;
    TruncSeries1 w = formal_w(E, M);
    auto wc = coefficients(w);

    auto z1 = TruncSeries2::variable(0, N), z2 = TruncSeries2::variable(1, N);
    auto c = [N](const BigRational& a) { return TruncSeries2::constant(a, N); };
    // lambda = (w(z2) - w(z1)) / (z2 - z1) = sum_n w_n sum_{i+j=n-1} z1^i z2^j
    TruncSeries2 lambda(N);
    for (int n = 1; n <= N + 1 && n < static_cast<int>(wc.size()); ++n) {
        if (wc[n] == 0) continue;
        for (int i = 0; i < n; ++i) lambda.set({i, n - 1 - i}, lambda.coeff({i, n - 1 - i}) + wc[n]);
    }
    TruncSeries2 w1 = compose<1, 2>(w.truncated(N), {z1});
    TruncSeries2 nu = w1 - lambda * z1;
    // w = lambda z + nu in the w-equation; z1 + z2 + z3 = -(z^2 coefficient)/(z^3 coefficient)
    TruncSeries2 num = c(E.a1) * lambda + c(E.a3) * lambda * lambda + c(E.a2) * nu +
                       c(2 * E.a4) * lambda * nu + c(3 * E.a6) * lambda * lambda * nu;
    TruncSeries2 den = c(1) + c(E.a2) * lambda + c(E.a4) * lambda * lambda + c(E.a6) * lambda * lambda * lambda;
    TruncSeries2 z3 = -z1 - z2 - num * den.reciprocal();
    TruncSeries2 w3 = lambda * z3 + nu;
    TruncSeries2 F = -z3 * (c(1) - c(E.a1) * z3 - c(E.a3) * w3).reciprocal();

    FormalGroupLaw G;
    G.name = "elliptic " + curve_label(E);
    G.N = N;
    G.F = F;
    auto t = TruncSeries1::variable(0, N);
    auto c1 = [N](const BigRational& a) { return TruncSeries1::constant(a, N); };
    G.inv = -t * (c1(1) - c1(E.a1) * t - c1(E.a3) * w.truncated(N)).reciprocal();
    G.integral = G.F.is_integral() && G.inv.is_integral();
    if (!G.integral) throw invariant_violation("non-integral formal group coefficients from an integral model");
    return G;
}

// M_1 = t, M_m = F(t, M_{m-1}).
inline TruncSeries1 mult_by_m(const FormalGroupLaw& G, long m) {
    if (m < 1) throw argument_error("mult_by_m needs m >= 1");
    auto t = TruncSeries1::variable(0, G.N);
    TruncSeries1 M = t;
    for (long k = 2; k <= m; ++k) M = compose<2, 1>(G.F, {t, M});
    return M;
}

// M_p(t) = a(t^p) + p b(t) up to the precision iff p divides every coefficient
// at exponents prime to p.
inline bool verify_structure_ap_pb(const FormalGroupLaw& G, long p) {
    if (!is_prime(BigInt(p))) throw argument_error("verify_structure_ap_pb needs a prime");
    TruncSeries1 M = mult_by_m(G, p);
    if (!M.is_integral()) return false;
    for (const auto& [m, a] : M.terms())
        if (m[0] % p != 0 && BigInt(a.get_num()) % p != 0) return false;
    return true;
}

// Homogeneous part of degree n of a two-variable series as coefficients of
// x^i y^(n-i), i = 0..n, reduced mod p.
inline std::vector<long> homogeneous_mod_p(const TruncSeries2& G, int n, long p) {
    std::vector<long> h(n + 1, 0);
    for (const auto& [m, a] : G.terms()) {
        if (m[0] + m[1] != n) continue;
        if (a.get_den() != 1) throw argument_error("series is not p-integral");
        BigInt r = BigInt(a.get_num()) % p;
        if (r < 0) r += p;
        h[m[0]] = r.get_si();
    }
    return h;
}

// Divides a homogeneous form sum h_i x^i y^(n-i) by (x - y) over F_p, if possible.
inline bool divide_by_x_minus_y(std::vector<long>& h, long p) {
    int n = static_cast<int>(h.size()) - 1;
    long s = 0;
    for (long c : h) s = (s + c) % p;
    if (s != 0) return false;  // the form does not vanish on x = y
    if (n == 0) {
        h.clear();
        return true;
    }
    // h = (x - y) q with q of degree n-1: top-down synthetic division in x
    std::vector<long> q(n, 0);
    long carry = 0;
    for (int i = n; i >= 1; --i) {
        q[i - 1] = ((h[i] + carry) % p + p) % p;
        carry = q[i - 1];
    }
    h = q;
    return true;
}

// G = M_p(F(x, inv(y))) mod p lies in (x^p - y^p, p): every homogeneous part of
// G mod p is divisible by (x - y)^p, which is x^p - y^p mod p.
inline bool verify_ideal_membership(const FormalGroupLaw& G, long p) {
    if (!is_prime(BigInt(p))) throw argument_error("verify_ideal_membership needs a prime");
    if (G.N < p + 2) throw argument_error("precision must be at least p + 2");
    auto x = TruncSeries2::variable(0, G.N), y = TruncSeries2::variable(1, G.N);
    TruncSeries2 diff = compose<2, 2>(G.F, {x, compose<1, 2>(G.inv, {y})});
    TruncSeries2 Gp = compose<1, 2>(mult_by_m(G, p), {diff});
    for (int n = 0; n <= G.N; ++n) {
        std::vector<long> h = homogeneous_mod_p(Gp, n, p);
        bool zero = std::all_of(h.begin(), h.end(), [](long c) { return c == 0; });
        if (zero) continue;
        for (long k = 0; k < p; ++k)
            if (h.empty() || !divide_by_x_minus_y(h, p)) return false;
    }
    return true;
}

// z = -x/y. When y = 0 and x = 0 the curve relation y (y + a1 x + a3) = x (x^2 + a2 x + a4)
// gives z = -(y + a1 x + a3) / (x^2 + a2 x + a4) instead.
template <class F>
F z_coordinate_generic(const WeierstrassModel<F>& E, const CurvePoint<F>& P) {
    if (P.infinity) throw argument_error("z-coordinate of the identity");
    const F zero = field_const(E.a1, 0);
    if (!(P.y == zero)) return -P.x / P.y;
    if (P.x == zero && E.a6 == zero) {
        F den = P.x * P.x + E.a2 * P.x + E.a4;
        if (!(den == zero)) return -(P.y + E.a1 * P.x + E.a3) / den;
    }
    throw argument_error("z = -x/y has a pole at " + to_string(P));
}

inline BigRational z_coordinate(const WeierstrassCurve& E, const RationalPoint& P) {
    require_on_curve(E, P);
    return z_coordinate_generic(E, P);
}

inline QuadraticElement z_coordinate(const WeierstrassCurve& E, const QuadraticPoint& P) {
    BigInt d = P.infinity ? BigInt(0) : (P.x.d() != 0 ? P.x.d() : P.y.d());
    auto EL = base_change(E, d);
    require_on_curve(EL, P);
    return z_coordinate_generic(EL, P);
}

// v(z(P)) in units with v(p) = 1, for P in the kernel of reduction.
inline BigRational kernel_valuation(const WeierstrassCurve& E, const RationalPoint& P, const BigInt& p) {
    if (P.infinity) throw argument_error("kernel valuation of the identity");
    BigRational z = z_coordinate(E, P);
    if (z == 0) throw argument_error("z vanishes identically");
    BigRational v = valuation_p(z, p).value;
    if (!(v > 0)) throw argument_error("point is not in the kernel of reduction at " + p.get_str());
    return v;
}

inline BigRational kernel_valuation(const WeierstrassCurve& E, const QuadraticPoint& P, const QuadraticPrime& Pr) {
    if (P.infinity) throw argument_error("kernel valuation of the identity");
    QuadraticElement z = z_coordinate(E, P);
    if (z.is_zero()) throw argument_error("z vanishes identically");
    BigRational v = quad_valuation(z, Pr);
    if (!(v > 0)) throw argument_error("point is not in the kernel of reduction at " + Pr.label());
    return v;
}

}  // namespace heightforge
