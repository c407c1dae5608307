#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "heightforge/exact_arith.hpp"

namespace heightforge {

// Power series in V variables over Q, truncated by total degree: every
// monomial of degree > N is dropped. Zero coefficients are not stored.
template <int V>
class TruncSeries {
public:
    using Mono = std::array<int, V>;

    TruncSeries() = default;
    explicit TruncSeries(int N) : N_(N) {
        if (N < 0) throw argument_error("negative series precision");
    }

    static TruncSeries variable(int i, int N) {
        TruncSeries s(N);
        Mono m{};
        m[i] = 1;
        if (N >= 1) s.c_[m] = 1;
        return s;
    }
    static TruncSeries constant(const BigRational& a, int N) {
        TruncSeries s(N);
        if (a != 0) s.c_[Mono{}] = a;
        return s;
    }

    int precision() const { return N_; }
    const std::map<Mono, BigRational>& terms() const { return c_; }

    static int degree(const Mono& m) {
        int d = 0;
        for (int e : m) d += e;
        return d;
    }

    BigRational coeff(const Mono& m) const {
        auto it = c_.find(m);
        return it == c_.end() ? BigRational(0) : it->second;
    }
    void set(const Mono& m, const BigRational& a) {
        if (degree(m) > N_) return;
        if (a == 0) c_.erase(m);
        else c_[m] = a;
    }

    bool has_constant_term() const { return c_.count(Mono{}) > 0; }
    bool is_integral() const {
        for (const auto& [m, a] : c_)
            if (a.get_den() != 1) return false;
        return true;
    }

    TruncSeries truncated(int N) const {
        TruncSeries s(std::min(N, N_));
        for (const auto& [m, a] : c_)
            if (degree(m) <= s.N_) s.c_[m] = a;
        return s;
    }

    friend TruncSeries operator+(const TruncSeries& f, const TruncSeries& g) {
        TruncSeries s = f.truncated(std::min(f.N_, g.N_));
        for (const auto& [m, a] : g.c_) s.set(m, s.coeff(m) + a);
        return s;
    }
    friend TruncSeries operator-(const TruncSeries& f) {
        TruncSeries s = f;
        for (auto& [m, a] : s.c_) a = -a;
        return s;
    }
    friend TruncSeries operator-(const TruncSeries& f, const TruncSeries& g) { return f + (-g); }
    friend TruncSeries operator*(const TruncSeries& f, const TruncSeries& g) {
        TruncSeries s(std::min(f.N_, g.N_));
        for (const auto& [m1, a1] : f.c_) {
            int d1 = degree(m1);
            if (d1 > s.N_) continue;
            for (const auto& [m2, a2] : g.c_) {
                if (d1 + degree(m2) > s.N_) continue;
                Mono m;
                for (int i = 0; i < V; ++i) m[i] = m1[i] + m2[i];
                s.c_[m] += a1 * a2;
            }
        }
        s.prune();
        return s;
    }
    friend TruncSeries operator*(const BigRational& k, const TruncSeries& f) {
        TruncSeries s(f.N_);
        if (k == 0) return s;
        for (const auto& [m, a] : f.c_) s.c_[m] = k * a;
        return s;
    }

    // 1/f for f with constant term 1 + ..., by the geometric series in (1 - f).
    TruncSeries reciprocal() const {
        BigRational c0 = coeff(Mono{});
        if (c0 == 0) throw argument_error("reciprocal of a series without constant term");
        TruncSeries u = constant(1, N_) - (BigRational(1) / c0) * (*this);  // no constant term
        TruncSeries sum = constant(1, N_), pw = constant(1, N_);
        for (int k = 1; k <= N_; ++k) {
            pw = pw * u;
            if (pw.c_.empty()) break;
            sum = sum + pw;
        }
        return (BigRational(1) / c0) * sum;
    }

    friend bool operator==(const TruncSeries& f, const TruncSeries& g) {
        return f.truncated(std::min(f.N_, g.N_)).c_ == g.truncated(std::min(f.N_, g.N_)).c_;
    }

    std::string str() const {
        static const char* names[] = {"x", "y", "z"};
        if (c_.empty()) return "O(" + std::to_string(N_ + 1) + ")";
        std::string s;
        std::vector<std::pair<Mono, BigRational>> items(c_.begin(), c_.end());
        std::stable_sort(items.begin(), items.end(),
                         [](const auto& a, const auto& b) { return degree(a.first) < degree(b.first); });
        for (const auto& [m, a] : items) {
            std::string mono;
            for (int i = 0; i < V; ++i) {
                if (m[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += V == 1 ? "t" : names[i];
                if (m[i] > 1) mono += "^" + std::to_string(m[i]);
            }
            BigRational c = a;
            if (s.empty()) {
                if (c < 0) s += "-";
            } else {
                s += c < 0 ? " - " : " + ";
            }
            c = abs(c);
            if (mono.empty()) s += c.get_str();
            else if (c == 1) s += mono;
            else s += c.get_str() + "*" + mono;
        }
        return s;
    }

private:
    void prune() {
        for (auto it = c_.begin(); it != c_.end();)
            it = it->second == 0 ? c_.erase(it) : std::next(it);
    }

    int N_ = 0;
    std::map<Mono, BigRational> c_;
};

using TruncSeries1 = TruncSeries<1>;
using TruncSeries2 = TruncSeries<2>;
using TruncSeries3 = TruncSeries<3>;

// Coefficient list c_0..c_N of a one-variable series.
inline std::vector<BigRational> coefficients(const TruncSeries1& f) {
    std::vector<BigRational> v(f.precision() + 1, BigRational(0));
    for (const auto& [m, a] : f.terms()) v[m[0]] = a;
    return v;
}

inline TruncSeries1 series_from_coefficients(const std::vector<BigRational>& c, int N) {
    TruncSeries1 s(N);
    for (std::size_t k = 0; k < c.size(); ++k) s.set({static_cast<int>(k)}, c[k]);
    return s;
}

// f(g_1, ..., g_W) where the g_i have no constant term.
template <int W, int V>
TruncSeries<V> compose(const TruncSeries<W>& f, const std::array<TruncSeries<V>, W>& g) {
    int N = f.precision();
    for (const auto& gi : g) {
        if (gi.has_constant_term()) throw argument_error("substituted series must vanish at 0");
        N = std::min(N, gi.precision());
    }
    std::array<std::vector<TruncSeries<V>>, W> pw;
    for (int i = 0; i < W; ++i) {
        pw[i].push_back(TruncSeries<V>::constant(1, N));
        for (int e = 1; e <= N; ++e) pw[i].push_back(pw[i].back() * g[i].truncated(N));
    }
    TruncSeries<V> out(N);
    for (const auto& [m, a] : f.terms()) {
        if (TruncSeries<W>::degree(m) > N) continue;
        TruncSeries<V> term = TruncSeries<V>::constant(a, N);
        for (int i = 0; i < W; ++i)
            if (m[i] > 0) term = term * pw[i][m[i]];
        out = out + term;
    }
    return out;
}

}  // namespace heightforge
