#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "heightforge/cyclotomic.hpp"
#include "heightforge/formal_group.hpp"
#include "heightforge/torsion.hpp"

namespace heightforge {

// Smallest k > 1 with gcd(k, m) = 1, k = 1 mod m/p and k != 1 mod m: then
// tau(zeta_m) = zeta_m^k = omega zeta_m with omega a primitive p-th root of unity,
// and tau fixes zeta_(m/p).
inline GaloisAutomorphism ad_tau_construct(long m, long p) {
    if (p < 2 || !is_prime(BigInt(p))) throw argument_error("p must be prime");
    if (m % p != 0) throw argument_error("p does not divide m");
    if (m <= p) throw argument_error("need m > p");
    long q = m / p;
    for (long k = 2; k < m; ++k)
        if (std::gcd(k, m) == 1 && k % q == 1 % q && k % m != 1) return GaloisAutomorphism::cyclotomic_power(k, m);
    throw argument_error("Q(zeta_" + std::to_string(m) + ") = Q(zeta_" + std::to_string(q) +
                         "): no automorphism moves zeta_m while fixing zeta_m/p");
}

struct ADWitness {
    long m = 0, p = 0;
    GaloisAutomorphism tau;
    std::vector<CyclotomicElement> samples;   // the seeded random elements
    std::size_t exhaustive_checked = 0;
    std::size_t checked = 0;
    std::vector<CyclotomicElement> failures;
    bool all_pass = false;
};

// (tau a)^p - a^p is divisible by p in Z[zeta_m].
inline bool ad_congruence_holds(const CyclotomicElement& a, const GaloisAutomorphism& tau, long p) {
    auto diff = apply_automorphism(a, tau).pow(static_cast<unsigned long>(p)) - a.pow(static_cast<unsigned long>(p));
    return divides_in_cyclotomic(diff, BigInt(p));
}

inline ADWitness verify_ad_congruence(long m, long p, std::size_t sample_count, std::uint64_t seed) {
    ADWitness W;
    W.m = m;
    W.p = p;
    W.tau = ad_tau_construct(m, p);
    const long n = euler_phi(m);
    auto check = [&](const CyclotomicElement& a) {
        ++W.checked;
        if (!ad_congruence_holds(a, W.tau, p)) W.failures.push_back(a);
    };
    // exhaustive part: all of {-1, 0, 1}^n when that is small, else every element
    // with at most two nonzero coefficients, each +-1
    if (n <= 6) {
        std::vector<BigInt> c(static_cast<std::size_t>(n), BigInt(0));
        long total = 1;
        for (long i = 0; i < n; ++i) total *= 3;
        for (long idx = 0; idx < total; ++idx) {
            long r = idx;
            for (long i = 0; i < n; ++i, r /= 3) c[static_cast<std::size_t>(i)] = r % 3 - 1;
            check(CyclotomicElement(m, c));
            ++W.exhaustive_checked;
        }
    } else {
        for (long i = -1; i < n; ++i)
            for (long j = i + 1; j < n; ++j)
                for (long si : {-1L, 1L})
                    for (long sj : {-1L, 1L}) {
                        if (i < 0 && si == 1) continue;  // i = -1 means a single term
                        std::vector<BigInt> c(static_cast<std::size_t>(n), BigInt(0));
                        if (i >= 0) c[static_cast<std::size_t>(i)] = si;
                        c[static_cast<std::size_t>(j)] = sj;
                        check(CyclotomicElement(m, c));
                        ++W.exhaustive_checked;
                    }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coef(-50, 50);
    for (std::size_t s = 0; s < sample_count; ++s) {
        std::vector<BigInt> c;
        for (long i = 0; i < n; ++i) c.emplace_back(coef(rng));
        W.samples.emplace_back(m, c);
        check(W.samples.back());
    }
    W.all_pass = W.failures.empty();
    return W;
}

enum class RamifiedOutcome { checked, descent, torsion };

inline const char* to_string(RamifiedOutcome o) {
    switch (o) {
        case RamifiedOutcome::checked: return "checked";
        case RamifiedOutcome::descent: return "descent";
        default: return "torsion";
    }
}

struct RamifiedCheckReport {
    WeierstrassCurve curve;
    BigInt d, p;
    QuadraticPrime prime;
    QuadraticPoint P;
    QuadraticPoint Q;       // (1 - tau) P
    std::optional<BigRational> kernel_witness;  // v(z(Q)), v(p) = 1 units; empty when Q = O
    QuadraticPoint Pprime;  // [p] (1 - tau)^2 P
    RamifiedOutcome outcome = RamifiedOutcome::checked;
    std::optional<BigRational> valuation;  // uniformizer units, e * v(z(P'))
    std::optional<Real> local_height;      // lambda at the ramified prime
    bool bound_met = false;
    int torsion_order = 0;
};

// tau is conjugation, the whole inertia group at the ramified prime.
inline RamifiedCheckReport ramified_point_check(const WeierstrassCurve& E, const BigInt& d, const QuadraticPoint& P,
                                                const BigInt& p, int torsion_bound = 24) {
    QuadraticField K(d);
    if (!is_prime(p)) throw argument_error("p must be prime");
    QuadraticPrime Pr = splitting_type(K, p);
    if (Pr.splitting != Splitting::ramified)
        throw argument_error(p.get_str() + " is not ramified in Q(sqrt " + d.get_str() + ")");
    if (!reduction_type(E, p).good()) throw argument_error("ramified check needs good reduction at " + p.get_str());
    auto EL = base_change(E, d);
    require_on_curve(EL, P);

    RamifiedCheckReport r;
    r.curve = E;
    r.d = d;
    r.p = p;
    r.prime = Pr;
    r.P = P;
    if (P.infinity) {
        r.outcome = RamifiedOutcome::torsion;
        r.torsion_order = 1;
        return r;
    }
    QuadraticPoint T = P;
    for (int n = 1; n <= torsion_bound; ++n) {
        if (T.infinity) {
            r.outcome = RamifiedOutcome::torsion;
            r.torsion_order = n;
            return r;
        }
        T = add_unchecked(EL, T, P);
    }
    r.Q = add_unchecked(EL, P, negate(EL, conjugate(P)));
    if (r.Q.infinity) {
        // P is fixed by inertia: it comes from the subfield and P' = O
        r.outcome = RamifiedOutcome::descent;
        r.bound_met = true;
        return r;
    }
    KernelWitness w = in_kernel_of_reduction(E, r.Q, Pr);
    if (!w.in_kernel || !w.v_z || *w.v_z < make_rational(1, Pr.e))
        throw invariant_violation("(1 - tau)P is not in the kernel of reduction at " + Pr.label());
    r.kernel_witness = w.v_z;
    QuadraticPoint Q2 = add_unchecked(EL, r.Q, negate(EL, conjugate(r.Q)));
    r.Pprime = scalar_mul(EL, p, Q2);
    if (r.Pprime.infinity) {
        // a nonzero point of the kernel of reduction has no p-power torsion killed this way
        throw invariant_violation("P' = O for a nontorsion P");
    }
    BigRational v = kernel_valuation(E, r.Pprime, Pr);
    r.valuation = v * Pr.e;
    r.local_height = local_height_finite(E, r.Pprime, p, Pr).value;
    r.bound_met = *r.valuation >= 2;
    return r;
}

struct TorsionEscape {
    IntPolynomial a, b;
    bool verified = false;
};

// a(X)(X^m - 1) + b(X) p (X - 1)^2 = m p (X - 1) with a = p and
// b = -sum_{i=0}^{m-2} (m-1-i) X^i.
inline TorsionEscape torsion_escape_identity(long m, long p) {
    if (m < 1) throw argument_error("m must be positive");
    if (!is_prime(BigInt(p))) throw argument_error("p must be prime");
    TorsionEscape t;
    t.a = IntPolynomial::constant(BigInt(p));
    std::vector<BigInt> b;
    for (long i = 0; i <= m - 2; ++i) b.emplace_back(-(m - 1 - i));
    t.b = IntPolynomial(b);
    std::vector<BigInt> xm(static_cast<std::size_t>(m + 1), BigInt(0));
    xm[0] = -1;
    xm[static_cast<std::size_t>(m)] = 1;
    IntPolynomial X1{-1, 1};
    IntPolynomial lhs = t.a * IntPolynomial(xm) + t.b * IntPolynomial::constant(BigInt(p)) * X1 * X1;
    IntPolynomial rhs = IntPolynomial::constant(BigInt(m * p)) * X1;
    t.verified = lhs == rhs;
    if (!t.verified) throw invariant_violation("torsion-escape identity failed for m = " + std::to_string(m));
    return t;
}

}  // namespace heightforge
