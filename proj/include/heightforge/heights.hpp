#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "heightforge/archimedean.hpp"
#include "heightforge/integer_factor.hpp"
#include "heightforge/qseries.hpp"
#include "heightforge/reduction.hpp"

namespace heightforge {

// ---------------------------------------------------------------- naive heights

inline Real naive_height(const BigRational& x) {
    if (x == 0) return 0;
    return log_abs(std::max(BigInt(abs(BigInt(x.get_num()))), BigInt(x.get_den())));
}

// Absolute values of the two embeddings of a + b sqrt(d), d > 0; the smaller one
// through the norm so cancellation never loses relative precision.
inline std::pair<Real, Real> real_embedding_magnitudes(const QuadraticElement& x) {
    Real big = abs(to_real(x.a())) + abs(to_real(x.b())) * sqrt(to_real(x.d()));
    BigRational n = x.norm();
    Real small = big == 0 ? Real(0) : abs(to_real(n)) / big;
    return {big, small};
}

// (1/2)(log a0 + sum over embeddings of log+|sigma x|) for the primitive
// integral polynomial a0 X^2 + ... of x.
inline Real naive_height(const QuadraticElement& x) {
    if (x.is_rational()) return naive_height(x.a());
    BigRational T = x.trace(), N = x.norm();
    BigInt a0 = lcm(BigInt(T.get_den()), BigInt(N.get_den()));
    Real s = log_abs(a0);
    if (x.d() < 0) {
        Real ln = log_abs(N);  // |sigma x|^2 = N for both embeddings
        if (ln > 0) s += ln;
    } else {
        auto [big, small] = real_embedding_magnitudes(x);
        if (big > 1) s += log(big);
        if (small > 1) s += log(small);
    }
    return s / 2;
}

// ---------------------------------------------------------------- places

enum class HeightMethod { good_formula, bad_nonsingular, duplication_series, qseries, residual };

inline const char* to_string(HeightMethod m) {
    switch (m) {
        case HeightMethod::good_formula: return "good-formula";
        case HeightMethod::bad_nonsingular: return "bad-nonsingular";
        case HeightMethod::duplication_series: return "duplication-series";
        case HeightMethod::qseries: return "qseries";
        default: return "residual";
    }
}

struct Place {
    bool archimedean = false;
    BigInt p = 0;       // rational prime below (0 for archimedean)
    int index = 0;      // which embedding / which prime above p
    int e = 1;          // ramification index (1 at archimedean places)
    int local_degree = 1;
    int field_degree = 1;
    bool aggregate = false;  // stands for all primes dividing an unfactored cofactor
    std::string label;

    Real weight() const { return Real(local_degree) / field_degree; }
};

struct LocalHeightValue {
    Place place;
    Real value;
    HeightMethod method = HeightMethod::good_formula;
    std::optional<BigRational> log_coefficient;  // value = coefficient * log p when exact
};

struct HeightDecomposition {
    std::vector<LocalHeightValue> entries;
    Real global;
    Real residual;
    bool has_residual = false;

    Real weighted_sum() const {
        Real s = 0;
        for (const auto& v : entries)
            if (v.method != HeightMethod::residual) s += v.place.weight() * v.value;
        return s;
    }
};

// ---------------------------------------------------------------- doubling limit

struct DoublingOptions {
    int iterations = -1;             // -1: adaptive
    double target_error = 1e-8;      // adaptive stop when the bound drops below this
    std::size_t digit_budget = 1000000;
};

struct DoublingResult {
    Real value;
    Real error_bound;
    int iterations = 0;
    bool budget_limited = false;
    bool torsion = false;  // some [2^k]P = O or the doubling orbit cycled
};

// Silverman-type bound on |h_hat - (1/2) h(x)|, used for the 4^-n error estimate.
inline Real height_difference_bound(const WeierstrassCurve& E) {
    Real hb2 = abs(to_real(E.b2)) / 12;
    return naive_height(j_invariant(E)) / 8 + naive_height(E.disc) / 12 + (hb2 > 1 ? log(hb2) : Real(0)) / 2 +
           real_log2() / 2 + Real("1.07");
}

namespace detail {

struct DoublingForms {
    BigInt b2, b4, b6, b8;
    BigInt R;  // gcd(F(X,Z), G(X,Z)) divides R for coprime X, Z

    explicit DoublingForms(const WeierstrassCurve& E) {
        if (!is_integral_model(E)) throw argument_error("doubling limit needs an integral model");
        b2 = E.b2.get_num();
        b4 = E.b4.get_num();
        b6 = E.b6.get_num();
        b8 = E.b8.get_num();
        IntPolynomial f{-b8, -2 * b6, -b4, 0, 1};
        IntPolynomial g{b6, 2 * b4, b2, 4};
        R = abs(resultant(f, g));
        if (R == 0) throw degenerate_input_error("singular curve in doubling");
    }
};

inline std::size_t digits_of(const BigInt& n) { return mpz_sizeinbase(n.get_mpz_t(), 10); }

// x-only doubling on X/Z in lowest terms; the gcd of the two forms divides R,
// so it is found from residues mod R instead of full-size gcds.
inline DoublingResult doubling_limit_rational_x(const WeierstrassCurve& E, const BigRational& x0,
                                                const DoublingOptions& opt) {
    DoublingResult out;
    Real B = height_difference_bound(E);
    DoublingForms D(E);
    BigInt X = x0.get_num(), Z = x0.get_den();
    std::set<std::string> seen;
    int n = 0;
    const Real target(opt.target_error);
    while (true) {
        bool done = opt.iterations >= 0 ? n >= opt.iterations : ldexp(B, -2 * n) < target;
        if (done) break;
        std::size_t size = std::max(digits_of(X), digits_of(Z));
        if (4 * size + 16 > opt.digit_budget) {
            if (opt.iterations >= 0)
                throw resource_error("doubling limit: " + std::to_string(opt.iterations) +
                                     " iterations exceed the digit budget of " + std::to_string(opt.digit_budget));
            out.budget_limited = true;
            break;
        }
        if (size < 200 && !seen.insert(X.get_str() + "/" + Z.get_str()).second) {
            out.torsion = true;
            out.iterations = n;
            return out;
        }
        BigInt X2 = X * X, Z2 = Z * Z;
        BigInt F = X2 * X2 - D.b4 * X2 * Z2 - 2 * D.b6 * X * Z2 * Z - D.b8 * Z2 * Z2;
        BigInt G = Z * (4 * X2 * X + D.b2 * X2 * Z + 2 * D.b4 * X * Z2 + D.b6 * Z2 * Z);
        if (G == 0) {
            out.torsion = true;
            out.iterations = n + 1;
            return out;
        }
        BigInt g = gcd(D.R, gcd(BigInt(F % D.R), BigInt(G % D.R)));
        if (g != 1) {
            mpz_divexact(F.get_mpz_t(), F.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(G.get_mpz_t(), G.get_mpz_t(), g.get_mpz_t());
        }
        if (G < 0) {
            F = -F;
            G = -G;
        }
        X = std::move(F);
        Z = std::move(G);
        ++n;
    }
    out.value = ldexp(log_abs(std::max(BigInt(abs(X)), Z)), -2 * n) / 2;
    out.error_bound = ldexp(B, -2 * n);
    out.iterations = n;
    return out;
}

}  // namespace detail

// h_hat(P) = (1/2) lim 4^-n h(x([2^n]P)), with error at most 4^-n times the difference bound.
inline DoublingResult canonical_height_doubling(const WeierstrassCurve& E, const RationalPoint& P,
                                                const DoublingOptions& opt = {}) {
    require_on_curve(E, P);
    if (P.infinity) {
        DoublingResult out;
        out.torsion = true;
        return out;
    }
    return detail::doubling_limit_rational_x(E, P.x, opt);
}

inline DoublingResult canonical_height_doubling(const WeierstrassCurve& E, const QuadraticPoint& P,
                                                const DoublingOptions& opt = {}) {
    if (P.infinity) {
        DoublingResult out;
        out.torsion = true;
        return out;
    }
    require_on_curve(base_change(E, P.x.d() == 0 ? P.y.d() : P.x.d()), P);
    if (P.x.is_rational()) return detail::doubling_limit_rational_x(E, P.x.a(), opt);
    DoublingResult out;
    Real B = height_difference_bound(E);
    QuadraticElement x = P.x;
    const BigInt d = P.x.d();
    QuadraticElement b2(E.b2, 0, d), b4(E.b4, 0, d), b6(E.b6, 0, d), b8(E.b8, 0, d);
    std::set<std::string> seen;
    int n = 0;
    Real target(opt.target_error);
    while (true) {
        bool done = opt.iterations >= 0 ? n >= opt.iterations : ldexp(B, -2 * n) < target;
        if (done) break;
        if (4 * x.digits() + 16 > opt.digit_budget) {
            if (opt.iterations >= 0) throw resource_error("doubling limit exceeds the digit budget");
            out.budget_limited = true;
            break;
        }
        if (x.digits() < 200 && !seen.insert(x.str()).second) {
            out.torsion = true;
            out.iterations = n;
            return out;
        }
        QuadraticElement x2 = x * x;
        QuadraticElement G = QuadraticElement(4) * x2 * x + b2 * x2 + QuadraticElement(2) * b4 * x + b6;
        if (G.is_zero()) {
            out.torsion = true;
            out.iterations = n + 1;
            return out;
        }
        QuadraticElement F = x2 * x2 - b4 * x2 - QuadraticElement(2) * b6 * x - b8;
        x = F / G;
        ++n;
    }
    out.value = ldexp(naive_height(x), -2 * n) / 2;
    out.error_bound = ldexp(B, -2 * n);
    out.iterations = n;
    return out;
}

// ---------------------------------------------------------------- local heights

struct FinitePlaceInput {
    BigInt p;
    std::optional<QuadraticPrime> prime;  // empty over Q
};

inline Place finite_place(const BigInt& p, const std::optional<QuadraticPrime>& Pr, int field_degree) {
    Place pl;
    pl.p = p;
    pl.field_degree = field_degree;
    if (Pr) {
        pl.e = Pr->e;
        pl.local_degree = Pr->local_degree();
        pl.index = Pr->index;
        pl.label = Pr->label();
    } else {
        pl.label = p.get_str();
    }
    return pl;
}

namespace detail {

inline BigRational val(const QuadraticElement& x, const BigInt& p, const std::optional<QuadraticPrime>& Pr) {
    if (Pr) return quad_valuation(x, *Pr);
    return BigRational(valuation_p(x.a(), p).value);
}

}  // namespace detail

// Local height at a finite place, in units of log p. Good places:
// (1/2) max(0, -w(x)); bad places with nonsingular image add (1/12) w(disc);
// multiplicative places with singular image use the Tate-curve value
// (1/2) B2(i/N) N (log p)/e with N = v(disc), i = min(v(2y + a1 x + a3), N/2).
inline LocalHeightValue local_height_finite(const WeierstrassCurve& E, const QuadraticPoint& P, const BigInt& p,
                                            const std::optional<QuadraticPrime>& Pr = std::nullopt) {
    if (P.infinity) throw argument_error("local height at the identity");
    int field_degree = (Pr ? 2 : 1);
    LocalHeightValue out;
    out.place = finite_place(p, Pr, field_degree);
    ReductionInfo info = reduction_type(E, p);
    BigRational vx = P.x.is_zero() ? BigRational(0) : detail::val(P.x, p, Pr);
    BigRational pole = vx < 0 ? BigRational(-vx / 2) : BigRational(0);
    BigRational coeff;
    if (info.good()) {
        coeff = pole;
        out.method = HeightMethod::good_formula;
    } else {
        BigRational vdisc = info.v_disc.value;
        bool singular = false;
        if (vx >= 0 || P.x.is_zero()) {
            singular = reduces_to_singular_point(E, P, p, Pr);
        }
        if (!singular) {
            coeff = pole + vdisc / 12;
            out.method = HeightMethod::bad_nonsingular;
        } else if (info.multiplicative()) {
            int e = Pr ? Pr->e : 1;
            QuadraticElement psi2 = field_const(P.x, 2) * P.y + QuadraticElement(E.a1) * P.x + QuadraticElement(E.a3);
            BigRational N = vdisc * e;
            BigRational i = psi2.is_zero() ? N / 2 : std::min(BigRational(detail::val(psi2, p, Pr) * e), BigRational(N / 2));
            QSeriesValue q = qseries_evaluate(TateParameters::nonarchimedean(i, N), p, e);
            coeff = *q.log_coefficient;
            out.method = HeightMethod::qseries;
        } else {
            throw residual_required_error("point reduces to the singular point at additive prime " + p.get_str());
        }
    }
    out.log_coefficient = coeff;
    out.value = to_real(coeff) * log(to_real(p));
    return out;
}

inline LocalHeightValue local_height_finite(const WeierstrassCurve& E, const RationalPoint& P, const BigInt& p) {
    return local_height_finite(E, lift_point(P, 0), p, std::nullopt);
}

inline Real default_arch_tolerance() { return Real("1e-40"); }

// One value per archimedean place: one for Q, two real places for d > 0,
// one complex place (local degree 2) for d < 0.
inline std::vector<LocalHeightValue> local_height_archimedean(const WeierstrassCurve& E, const QuadraticPoint& P,
                                                              const Real& tolerance = default_arch_tolerance()) {
    if (P.infinity) throw argument_error("local height at the identity");
    ArchimedeanData A = ArchimedeanData::of(E);
    const BigInt& d = P.x.d() != 0 ? P.x.d() : P.y.d();
    std::vector<LocalHeightValue> out;
    auto make = [&](const std::string& label, int index, int local_degree, int field_degree, const Real& v) {
        LocalHeightValue lv;
        lv.place.archimedean = true;
        lv.place.index = index;
        lv.place.local_degree = local_degree;
        lv.place.field_degree = field_degree;
        lv.place.label = label;
        lv.value = v;
        lv.method = HeightMethod::duplication_series;
        out.push_back(lv);
    };
    if (d == 0) {
        make("inf", 0, 1, 1, archimedean_lambda(A, to_real(P.x.a()), tolerance).value);
    } else if (d > 0) {
        Real a = to_real(P.x.a()), bs = to_real(P.x.b()) * sqrt(to_real(d));
        Real x1 = a + bs, x2 = a - bs;
        // recompute the cancelling embedding through the norm
        if (!P.x.is_rational()) {
            Real n = to_real(P.x.norm());
            if (abs(x1) < abs(x2)) x1 = n / x2;
            else x2 = n / x1;
        }
        make("inf1", 0, 1, 2, archimedean_lambda(A, x1, tolerance).value);
        make("inf2", 1, 1, 2, archimedean_lambda(A, x2, tolerance).value);
    } else {
        Complex x(to_real(P.x.a()), to_real(P.x.b()) * sqrt(to_real(BigInt(-d))));
        make("inf", 0, 2, 2, archimedean_lambda(A, x, tolerance).value);
    }
    return out;
}

inline LocalHeightValue local_height_archimedean(const WeierstrassCurve& E, const RationalPoint& P,
                                                 const Real& tolerance = default_arch_tolerance()) {
    return local_height_archimedean(E, lift_point(P, 0), tolerance).front();
}

// ---------------------------------------------------------------- decomposition

struct DecompositionOptions {
    DoublingOptions doubling;
    unsigned long trial_bound = 100000;
    unsigned long rho_budget = 20000;
};

// Weighted sum over all places. Finite places are those above primes of bad
// reduction and above primes where x has a pole; when the pole part does not
// factor within the budget, its good-prime contribution is a single aggregate entry.
inline HeightDecomposition height_decomposition(const WeierstrassCurve& E, const QuadraticPoint& P,
                                                const DecompositionOptions& opt = {}) {
    if (P.infinity) throw argument_error("decomposition at the identity");
    if (!is_integral_model(E)) throw argument_error("decomposition needs an integral model");
    const BigInt d = P.x.d() != 0 ? P.x.d() : P.y.d();
    require_on_curve(base_change(E, d), P);
    int field_degree = d == 0 ? 1 : 2;
    std::optional<QuadraticField> K;
    if (d != 0) K.emplace(d);

    HeightDecomposition out;
    for (auto& v : local_height_archimedean(E, P)) out.entries.push_back(v);

    // a0: leading coefficient of the primitive integral polynomial of x
    BigInt a0 = 1;
    if (d == 0) {
        a0 = P.x.a().get_den();
    } else {
        BigRational T = P.x.trace(), N = P.x.norm();
        a0 = lcm(BigInt(T.get_den()), BigInt(N.get_den()));
    }
    std::vector<BigInt> bad = prime_divisors(BigInt(E.disc.get_num()));
    Factorization fa = factor_integer(a0, opt.trial_bound, opt.rho_budget);
    std::set<BigInt> primes(bad.begin(), bad.end());
    for (const auto& [p, e] : fa.primes) primes.insert(p);

    bool needs_residual = false;
    for (const BigInt& p : primes) {
        std::vector<std::optional<QuadraticPrime>> above;
        if (K) {
            for (const auto& Pr : primes_above(*K, p)) above.emplace_back(Pr);
        } else {
            above.emplace_back(std::nullopt);
        }
        for (const auto& Pr : above) {
            try {
                out.entries.push_back(local_height_finite(E, P, p, Pr));
            } catch (const residual_required_error&) {
                needs_residual = true;
                LocalHeightValue r;
                r.place = finite_place(p, Pr, field_degree);
                r.method = HeightMethod::residual;
                out.entries.push_back(r);
            }
        }
    }
    if (!fa.complete()) {
        // cofactor has no bad primes (they were divided out above); its weighted share is
        // (1/2) log(cofactor) / [L:Q] by the Gauss lemma on the minimal polynomial of x
        LocalHeightValue agg;
        agg.place.p = fa.cofactor;
        agg.place.aggregate = true;
        agg.place.local_degree = 1;
        agg.place.field_degree = 1;
        agg.place.label = "cofactor";
        agg.method = HeightMethod::good_formula;
        agg.value = log_abs(fa.cofactor) / (2 * field_degree);
        out.entries.push_back(agg);
    }
    Real sum = out.weighted_sum();
    if (needs_residual) {
        DoublingResult dr = canonical_height_doubling(E, P, opt.doubling);
        out.global = dr.torsion ? Real(0) : dr.value;
        out.residual = out.global - sum;
        out.has_residual = true;
        for (auto& v : out.entries)
            if (v.method == HeightMethod::residual) {
                v.value = out.residual / v.place.weight();
                break;  // one residual entry carries the whole discrepancy
            }
        // remaining residual-tagged places (if several) carry zero
        bool first = true;
        for (auto& v : out.entries)
            if (v.method == HeightMethod::residual) {
                if (!first) v.value = 0;
                first = false;
            }
    } else {
        out.global = sum;
        out.residual = 0;
    }
    return out;
}

inline HeightDecomposition height_decomposition(const WeierstrassCurve& E, const RationalPoint& P,
                                                const DecompositionOptions& opt = {}) {
    return height_decomposition(E, lift_point(P, 0), opt);
}

struct CanonicalHeight {
    Real value;
    Real error_bound;
    bool exact_decomposition = true;  // false when a residual place forced the doubling limit
};

inline CanonicalHeight canonical_height(const WeierstrassCurve& E, const QuadraticPoint& P,
                                        const DecompositionOptions& opt = {}) {
    if (P.infinity) return {Real(0), Real(0), true};
    HeightDecomposition h = height_decomposition(E, P, opt);
    if (!h.has_residual) return {h.global, Real("1e-30"), true};
    DoublingResult dr = canonical_height_doubling(E, P, opt.doubling);
    return {dr.torsion ? Real(0) : dr.value, dr.torsion ? Real(0) : dr.error_bound, false};
}

inline CanonicalHeight canonical_height(const WeierstrassCurve& E, const RationalPoint& P,
                                        const DecompositionOptions& opt = {}) {
    return canonical_height(E, lift_point(P, 0), opt);
}

}  // namespace heightforge
