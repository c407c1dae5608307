#pragma once

#include <map>
#include <mutex>
#include <numeric>
#include <vector>

#include "heightforge/exact_arith.hpp"
#include "heightforge/quadratic_field.hpp"

namespace heightforge {

inline long euler_phi(long m) {
    long r = m, n = m;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

inline long multiplicative_order(long k, long m) {
    if (std::gcd(k, m) != 1) throw argument_error("k not a unit mod m");
    long x = ((k % m) + m) % m, ord = 1;
    if (m == 1) return 1;
    while (x != 1) {
        x = x * (((k % m) + m) % m) % m;
        ++ord;
    }
    return ord;
}

// Phi_m by exact division of X^m - 1 by Phi_d for the proper divisors d.
inline IntPolynomial cyclotomic_polynomial(long m) {
    static std::map<long, IntPolynomial> cache;
    static std::mutex mu;
    if (m < 1) throw argument_error("cyclotomic index must be positive");
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(m); it != cache.end()) return it->second;
    }
    RatPolynomial num = RatPolynomial::monomial(1, static_cast<int>(m)) - RatPolynomial::constant(1);
    for (long d = 1; d < m; ++d)
        if (m % d == 0) num = divmod(num, to_rational(cyclotomic_polynomial(d))).first;
    std::vector<BigInt> v;
    for (const auto& c : num.coeffs()) v.push_back(c.get_num());
    IntPolynomial r(std::move(v));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(m, r);
    return r;
}

// Element of Z[zeta_m] in the redundant basis zeta^0..zeta^(m-1).
class CyclotomicElement {
public:
    explicit CyclotomicElement(long m) : m_(m), c_(static_cast<std::size_t>(m), BigInt(0)) {
        if (m < 1) throw argument_error("cyclotomic modulus must be positive");
    }
    CyclotomicElement(long m, std::vector<BigInt> coeffs) : CyclotomicElement(m) {
        if (static_cast<long>(coeffs.size()) > m) throw argument_error("too many coefficients");
        for (std::size_t i = 0; i < coeffs.size(); ++i) c_[i] = coeffs[i];
    }
    static CyclotomicElement zeta(long m, long j = 1) {
        CyclotomicElement z(m);
        z.c_[static_cast<std::size_t>(((j % m) + m) % m)] = 1;
        return z;
    }
    static CyclotomicElement constant(long m, const BigInt& n) {
        CyclotomicElement z(m);
        z.c_[0] = n;
        return z;
    }

    long m() const { return m_; }
    const std::vector<BigInt>& coeffs() const { return c_; }

    friend CyclotomicElement operator+(const CyclotomicElement& a, const CyclotomicElement& b) {
        check(a, b);
        CyclotomicElement r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend CyclotomicElement operator-(const CyclotomicElement& a, const CyclotomicElement& b) {
        check(a, b);
        CyclotomicElement r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    friend CyclotomicElement operator*(const CyclotomicElement& a, const CyclotomicElement& b) {
        check(a, b);
        CyclotomicElement r(a.m_);
        std::size_t m = static_cast<std::size_t>(a.m_);
        for (std::size_t i = 0; i < m; ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (b.c_[j] != 0) r.c_[(i + j) % m] += a.c_[i] * b.c_[j];
        }
        return r;
    }
    friend CyclotomicElement operator*(const BigInt& s, const CyclotomicElement& a) {
        CyclotomicElement r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    CyclotomicElement pow(unsigned long k) const {
        CyclotomicElement r = constant(m_, 1), b = *this;
        while (k) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    // zeta^i -> zeta^(ik)
    CyclotomicElement apply_power(long k) const {
        if (std::gcd(k, m_) != 1) throw argument_error("automorphism exponent not coprime to m");
        CyclotomicElement r(m_);
        long kk = ((k % m_) + m_) % m_;
        for (long i = 0; i < m_; ++i) r.c_[static_cast<std::size_t>(i * kk % m_)] += c_[static_cast<std::size_t>(i)];
        return r;
    }

    // Canonical form: coefficients in the basis zeta^0..zeta^(phi(m)-1).
    std::vector<BigInt> reduced() const {
        IntPolynomial f(c_);
        IntPolynomial phi = cyclotomic_polynomial(m_);
        // phi is monic, so long division stays integral
        std::vector<BigInt> v = f.coeffs();
        int dp = phi.degree();
        for (int k = static_cast<int>(v.size()) - 1; k >= dp; --k) {
            BigInt q = v[static_cast<std::size_t>(k)];
            if (q == 0) continue;
            for (int i = 0; i <= dp; ++i) v[static_cast<std::size_t>(k - dp + i)] -= q * phi.coeff(i);
        }
        v.resize(static_cast<std::size_t>(dp), BigInt(0));
        return v;
    }

    friend bool operator==(const CyclotomicElement& a, const CyclotomicElement& b) {
        return a.m_ == b.m_ && a.reduced() == b.reduced();
    }

private:
    static void check(const CyclotomicElement& a, const CyclotomicElement& b) {
        if (a.m_ != b.m_) throw argument_error("cyclotomic elements with different moduli");
    }
    long m_;
    std::vector<BigInt> c_;
};

inline bool divides_in_cyclotomic(const CyclotomicElement& x, const BigInt& n) {
    if (n == 0) throw argument_error("divisibility by zero");
    for (const auto& c : x.reduced())
        if (!mpz_divisible_p(c.get_mpz_t(), n.get_mpz_t())) return false;
    return true;
}

struct GaloisAutomorphism {
    enum class Kind { identity, quadratic_conjugation, cyclotomic_power };
    Kind kind = Kind::identity;
    long k = 1;
    long m = 1;

    static GaloisAutomorphism identity() { return {}; }
    static GaloisAutomorphism conjugation() { return {Kind::quadratic_conjugation, -1, 2}; }
    static GaloisAutomorphism cyclotomic_power(long k, long m) {
        if (m < 1 || std::gcd(k, m) != 1) throw argument_error("cyclotomic automorphism needs gcd(k, m) = 1");
        return {Kind::cyclotomic_power, ((k % m) + m) % m, m};
    }

    long order() const {
        switch (kind) {
            case Kind::identity: return 1;
            case Kind::quadratic_conjugation: return 2;
            default: return multiplicative_order(k, m);
        }
    }
};

inline QuadraticElement apply_automorphism(const QuadraticElement& x, const GaloisAutomorphism& g) {
    switch (g.kind) {
        case GaloisAutomorphism::Kind::identity: return x;
        case GaloisAutomorphism::Kind::quadratic_conjugation: return x.conjugate();
        default: throw argument_error("cyclotomic automorphism applied to a quadratic element");
    }
}

inline CyclotomicElement apply_automorphism(const CyclotomicElement& x, const GaloisAutomorphism& g) {
    switch (g.kind) {
        case GaloisAutomorphism::Kind::identity: return x;
        case GaloisAutomorphism::Kind::cyclotomic_power:
            if (g.m != x.m()) throw argument_error("automorphism modulus differs from the ring");
            return x.apply_power(g.k);
        default: throw argument_error("quadratic conjugation applied to a cyclotomic element");
    }
}

}  // namespace heightforge
