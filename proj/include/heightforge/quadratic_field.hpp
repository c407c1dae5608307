#pragma once

#include <string>
#include <vector>

#include "heightforge/exact_arith.hpp"
#include "heightforge/finite_field.hpp"
#include "heightforge/integer_factor.hpp"

namespace heightforge {

class QuadraticField {
public:
    explicit QuadraticField(const BigInt& d) : d_(d) {
        if (d == 0 || d == 1) throw argument_error("quadratic field needs d != 0, 1");
        auto [core, s] = squarefree_decomposition(d);
        if (s != 1) throw argument_error("d = " + d.get_str() + " is not squarefree");
        BigInt r = d % 4;
        if (r < 0) r += 4;
        disc_ = (r == 1) ? d : BigInt(4 * d);
    }

    const BigInt& d() const { return d_; }
    const BigInt& discriminant() const { return disc_; }
    bool is_real() const { return d_ > 0; }
    bool d_is_1_mod_4() const { return disc_ == d_; }
    bool operator==(const QuadraticField& o) const { return d_ == o.d_; }

private:
    BigInt d_;
    BigInt disc_;
};

// a + b*sqrt(d). d == 0 marks a bare rational that combines with any field.
class QuadraticElement {
public:
    QuadraticElement() = default;
    QuadraticElement(long n) : a_(n) {}
    QuadraticElement(const BigRational& a) : a_(a) {}
    QuadraticElement(const BigRational& a, const BigRational& b, const BigInt& d) : a_(a), b_(b), d_(d) {
        if (b_ != 0 && d_ == 0) throw argument_error("irrational part without a field");
    }
    QuadraticElement(const BigRational& a, const BigRational& b, const QuadraticField& K)
        : QuadraticElement(a, b, K.d()) {}

    const BigRational& a() const { return a_; }
    const BigRational& b() const { return b_; }
    const BigInt& d() const { return d_; }
    bool is_rational() const { return b_ == 0; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    BigRational trace() const { return 2 * a_; }
    BigRational norm() const { return a_ * a_ - BigRational(d_) * b_ * b_; }
    QuadraticElement conjugate() const { return QuadraticElement(a_, -b_, d_); }

    friend bool operator==(const QuadraticElement& x, const QuadraticElement& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend QuadraticElement operator+(const QuadraticElement& x, const QuadraticElement& y) {
        return QuadraticElement(x.a_ + y.a_, x.b_ + y.b_, common(x, y));
    }
    friend QuadraticElement operator-(const QuadraticElement& x) {
        return QuadraticElement(-x.a_, -x.b_, x.d_);
    }
    friend QuadraticElement operator-(const QuadraticElement& x, const QuadraticElement& y) {
        return QuadraticElement(x.a_ - y.a_, x.b_ - y.b_, common(x, y));
    }
    friend QuadraticElement operator*(const QuadraticElement& x, const QuadraticElement& y) {
        BigInt d = common(x, y);
        return QuadraticElement(x.a_ * y.a_ + BigRational(d) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, d);
    }
    QuadraticElement inverse() const {
        if (is_zero()) throw argument_error("inverse of zero");
        BigRational n = norm();
        return QuadraticElement(a_ / n, -b_ / n, d_);
    }
    friend QuadraticElement operator/(const QuadraticElement& x, const QuadraticElement& y) {
        return x * y.inverse();
    }

    // Largest digit count among the four integers of a and b.
    std::size_t digits() const {
        std::size_t m = 0;
        for (const BigRational* q : {&a_, &b_}) {
            m = std::max(m, mpz_sizeinbase(q->get_num_mpz_t(), 10));
            m = std::max(m, mpz_sizeinbase(q->get_den_mpz_t(), 10));
        }
        return m;
    }

    std::string str() const {
        if (b_ == 0) return a_.get_str();
        std::string s = a_.get_str();
        s += (b_ < 0) ? "-" : "+";
        s += BigRational(abs(b_)).get_str() + "*sqrt(" + d_.get_str() + ")";
        return s;
    }

private:
    static BigInt common(const QuadraticElement& x, const QuadraticElement& y) {
        if (x.d_ == 0) return y.d_;
        if (y.d_ == 0 || x.d_ == y.d_) return x.d_;
        throw argument_error("elements from different quadratic fields");
    }

    BigRational a_ = 0, b_ = 0;
    BigInt d_ = 0;
};

inline QuadraticElement field_const(const QuadraticElement& like, long n) {
    return QuadraticElement(BigRational(n), BigRational(0), like.d());
}
inline BigRational field_const(const BigRational&, long n) { return BigRational(n); }

inline QuadraticElement sqrt_d(const QuadraticField& K) { return QuadraticElement(0, 1, K); }

// Algebraic integer iff trace and norm are integers.
inline bool is_algebraic_integer(const QuadraticElement& x) {
    return is_integer(x.trace()) && is_integer(x.norm());
}

// "a+b*sqrt(d)", "a-b*sqrt(d)", "b*sqrt(d)" or a plain rational.
inline QuadraticElement parse_quadratic(std::string s, const BigInt& d) {
    std::string t;
    for (char ch : s)
        if (ch != ' ') t.push_back(ch);
    auto pos = t.find("sqrt(");
    if (pos == std::string::npos) return QuadraticElement(parse_rational(t), 0, d);
    auto close = t.find(')', pos);
    if (close == std::string::npos || close + 1 != t.size()) throw argument_error("bad quadratic literal: " + s);
    BigInt dd(t.substr(pos + 5, close - pos - 5));
    if (dd != d) throw argument_error("literal uses sqrt(" + dd.get_str() + ") but field is d = " + d.get_str());
    std::string head = t.substr(0, pos);  // "a+b*" or "b*" or "a+" or ""
    if (!head.empty() && head.back() == '*') head.pop_back();
    // split head at the last sign that is not in leading position
    std::size_t split = std::string::npos;
    for (std::size_t i = head.size(); i-- > 1;)
        if (head[i] == '+' || head[i] == '-') {
            split = i;
            break;
        }
    BigRational a = 0, b;
    std::string bs = head;
    if (split != std::string::npos) {
        a = parse_rational(head.substr(0, split));
        bs = head.substr(split);
    }
    if (bs.empty() || bs == "+") b = 1;
    else if (bs == "-") b = -1;
    else b = parse_rational(bs[0] == '+' ? bs.substr(1) : bs);
    return QuadraticElement(a, b, d);
}

enum class Splitting { split, inert, ramified };

inline const char* to_string(Splitting s) {
    switch (s) {
        case Splitting::split: return "split";
        case Splitting::inert: return "inert";
        default: return "ramified";
    }
}

// A prime of Q(sqrt d) above p. For split p, root is the image of omega in F_p
// (omega = (1+sqrt d)/2 or sqrt d); index 0 takes the smallest square root of disc.
struct QuadraticPrime {
    BigInt d;
    BigInt p;
    Splitting splitting = Splitting::inert;
    int e = 1;
    int f = 2;
    int index = 0;
    BigInt root = 0;

    int local_degree() const { return e * f; }
    std::string label() const {
        std::string s = p.get_str();
        if (splitting == Splitting::split) s += (index == 0 ? "a" : "b");
        return s;
    }
};

inline bool omega_is_half(const BigInt& d) {
    BigInt r = d % 4;
    if (r < 0) r += 4;
    return r == 1;
}

inline std::vector<QuadraticPrime> primes_above(const QuadraticField& K, const BigInt& p) {
    if (!is_prime(p)) throw argument_error("not a prime: " + p.get_str());
    const BigInt& D = K.discriminant();
    if (D % p == 0) return {QuadraticPrime{K.d(), p, Splitting::ramified, 2, 1, 0, 0}};
    bool split;
    if (p == 2) {
        BigInt r = D % 8;
        if (r < 0) r += 8;
        split = (r == 1);
    } else {
        split = legendre(BigInt(((D % p) + p) % p).get_ui(), p.get_ui()) == 1;
    }
    if (!split) return {QuadraticPrime{K.d(), p, Splitting::inert, 1, 2, 0, 0}};
    BigInt r0, r1;
    if (p == 2) {
        r0 = 0;  // omega^2 - omega + (1-d)/4 = x(x+1) mod 2
        r1 = 1;
    } else {
        u64 pp = p.get_ui();
        u64 s = sqrt_mod(BigInt(((D % p) + p) % p).get_ui(), pp);
        u64 inv2 = (pp + 1) / 2;
        // images of omega for sqrt(disc) -> s and -> -s
        auto omega_of = [&](u64 sd) -> u64 {
            if (omega_is_half(K.d())) return mulmod((1 + sd) % pp, inv2, pp);
            return mulmod(sd, inv2, pp);  // sqrt(4d) = 2 sqrt(d)
        };
        r0 = omega_of(s);
        r1 = omega_of((pp - s) % pp);
    }
    return {QuadraticPrime{K.d(), p, Splitting::split, 1, 1, 0, r0},
            QuadraticPrime{K.d(), p, Splitting::split, 1, 1, 1, r1}};
}

inline QuadraticPrime splitting_type(const QuadraticField& K, const BigInt& p) { return primes_above(K, p).front(); }

// x = (U + V*omega) / D with integers, D > 0.
struct OmegaCoordinates {
    BigInt U, V, D;
};

inline OmegaCoordinates omega_coordinates(const QuadraticElement& x) {
    BigRational u, v;
    if (omega_is_half(x.d())) {
        u = x.a() - x.b();  // sqrt d = 2 omega - 1
        v = 2 * x.b();
    } else {
        u = x.a();
        v = x.b();
    }
    BigInt D = lcm(BigInt(u.get_den()), BigInt(v.get_den()));
    return {BigInt(u * D), BigInt(v * D), D};
}

namespace detail {

// Root of the minimal polynomial of omega lifted from F_p to Z/p^k.
inline BigInt hensel_lift(const BigInt& d, const BigInt& root, const BigInt& p, unsigned long k) {
    BigInt c1, c0;  // omega^2 + c1 omega + c0
    if (omega_is_half(d)) {
        c1 = -1;
        c0 = (1 - d) / 4;
    } else {
        c1 = 0;
        c0 = -d;
    }
    BigInt mod = ipow(p, k);
    BigInt r = root;
    for (unsigned long i = 0; i < k + 1; ++i) {
        BigInt fr = r * r + c1 * r + c0;
        BigInt dfr = 2 * r + c1, inv;
        if (!mpz_invert(inv.get_mpz_t(), dfr.get_mpz_t(), mod.get_mpz_t()))
            throw invariant_violation("hensel lift at a ramified prime");
        r = r - fr * inv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    }
    return r;
}

inline long ord_at_split(const BigInt& U, const BigInt& V, const QuadraticPrime& P, const BigInt& norm) {
    long K = ord_p(norm, P.p) + 1;
    BigInt r = hensel_lift(P.d, P.root, P.p, static_cast<unsigned long>(K));
    BigInt t = U + V * r;
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), ipow(P.p, static_cast<unsigned long>(K)).get_mpz_t());
    if (t == 0) throw invariant_violation("split valuation exceeded the norm bound");
    return ord_p(t, P.p);
}

}  // namespace detail

// w(x) / log p, so that w(p) = 1 at every prime; ramified values live in (1/2)Z.
inline BigRational quad_valuation(const QuadraticElement& x, const QuadraticPrime& P) {
    if (x.is_zero()) throw argument_error("valuation of zero");
    if (x.is_rational()) return BigRational(valuation_p(x.a(), P.p).value);
    if (P.splitting != Splitting::split) {
        BigRational n = x.norm();
        return make_rational(ord_p(BigInt(n.get_num()), P.p) - ord_p(BigInt(n.get_den()), P.p), 2);
    }
    OmegaCoordinates c = omega_coordinates(x);
    BigInt n = omega_is_half(P.d) ? BigInt(c.U * c.U + c.U * c.V + c.V * c.V * ((1 - P.d) / 4))
                                  : BigInt(c.U * c.U - c.V * c.V * P.d);
    return BigRational(detail::ord_at_split(c.U, c.V, P, n) - ord_p(c.D, P.p));
}

// Residue field of P: F_p when split or ramified, F_{p^2} when inert.
inline ResidueField residue_field(const QuadraticPrime& P) {
    if (!P.p.fits_ulong_p() || P.p > BigInt("4294967295")) throw unsupported_case_error("residue prime too large");
    return P.splitting == Splitting::inert ? ResidueField::quadratic(P.p.get_ui()) : ResidueField::prime(P.p.get_ui());
}

inline u64 reduce_rational(const BigRational& q, u64 p) {
    BigInt num = q.get_num() % BigInt(p), den = q.get_den() % BigInt(p);
    if (num < 0) num += p;
    if (den == 0) throw argument_error("rational not p-integral in reduction");
    return mulmod(num.get_ui(), powmod(den.get_ui(), p - 2, p), p);
}

// Image of a P-integral element in the residue field.
inline FqElement residue(const QuadraticElement& x, const QuadraticPrime& P) {
    ResidueField F = residue_field(P);
    u64 p = F.p;
    if (x.is_rational()) {
        if (valuation_p(x.a(), P.p).value < 0) throw argument_error("element not integral at " + P.label());
        return FqElement(F, reduce_rational(x.a(), p), 0);
    }
    if (quad_valuation(x, P) < 0) throw argument_error("element not integral at " + P.label());
    switch (P.splitting) {
        case Splitting::ramified: {
            u64 t = (p == 2) ? BigInt(((P.d % 2) + 2) % 2).get_ui() : 0;
            return FqElement(F, (reduce_rational(x.a(), p) + mulmod(reduce_rational(x.b(), p), t, p)) % p, 0);
        }
        case Splitting::inert: {
            if (p == 2) {
                OmegaCoordinates c = omega_coordinates(x);
                return FqElement(F, reduce_rational(make_rational(c.U, c.D), 2), reduce_rational(make_rational(c.V, c.D), 2));
            }
            // sqrt d -> s*t with t^2 = n, s^2 = d/n
            u64 dn = mulmod(reduce_rational(BigRational(P.d), p), powmod(F.m0, p - 2, p), p);
            u64 s = sqrt_mod(dn, p);
            return FqElement(F, reduce_rational(x.a(), p), mulmod(reduce_rational(x.b(), p), s, p));
        }
        default: {
            OmegaCoordinates c = omega_coordinates(x);
            long k = ord_p(c.D, P.p);
            BigInt pk = ipow(P.p, static_cast<unsigned long>(k));
            BigInt r = detail::hensel_lift(P.d, P.root, P.p, static_cast<unsigned long>(k + 1));
            BigInt t = c.U + c.V * r;
            mpz_mod(t.get_mpz_t(), t.get_mpz_t(), BigInt(pk * P.p).get_mpz_t());
            if (t % pk != 0) throw invariant_violation("split residue lost integrality");
            BigInt num = t / pk;
            return FqElement(F, reduce_rational(make_rational(num, BigInt(c.D / pk)), p), 0);
        }
    }
}

}  // namespace heightforge
