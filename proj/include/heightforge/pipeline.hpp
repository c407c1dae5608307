#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "heightforge/frobenius.hpp"
#include "heightforge/torsion.hpp"

namespace heightforge {

// ---------------------------------------------------------------- corpus

struct CorpusPoint {
    std::string source;  // "rational-search", "x-scan", "multiple", "conjugate"
    QuadraticPoint point;
    BigInt d = 0;        // 0 for points over Q
};

struct CorpusConfig {
    long rational_bound = 100;  // |numerator|, denominator of x
    bool quadratic_scan = true;
    long x_min = -10, x_max = 10;
    std::vector<BigInt> fields = {97, 241, 481};  // empty: every field the scan meets
    int max_multiple = 3;
    bool conjugates = true;
};

inline std::string point_key(const QuadraticPoint& P) { return to_string(P); }

// y^2 + (a1 x + a3) y - f(x) = 0 has discriminant (a1 x + a3)^2 + 4 f(x).
inline BigRational y_discriminant(const WeierstrassCurve& E, const BigRational& x) {
    BigRational l = E.a1 * x + E.a3;
    return l * l + 4 * (x * x * x + E.a2 * x * x + E.a4 * x + E.a6);
}

inline std::vector<RationalPoint> rational_points_search(const WeierstrassCurve& E, long bound) {
    std::vector<RationalPoint> out;
    for (long den = 1; den <= bound; ++den) {
        if (!is_perfect_square(BigInt(den))) continue;  // x-denominators of points are squares
        for (long num = -bound; num <= bound; ++num) {
            if (std::gcd(num, den) != 1) continue;
            BigRational x = make_rational(num, den);
            auto s = rational_sqrt(y_discriminant(E, x));
            if (!s) continue;
            BigRational l = E.a1 * x + E.a3;
            RationalPoint P{x, (-l + *s) / 2};
            out.push_back(P);
            if (*s != 0) out.push_back({x, (-l - *s) / 2});
        }
    }
    return out;
}

// Points (x, y) with integer x in the scan window and y quadratic irrational.
inline std::vector<QuadraticPoint> quadratic_points_scan(const WeierstrassCurve& E, long x_min, long x_max,
                                                         const std::vector<BigInt>& fields) {
    std::vector<QuadraticPoint> out;
    for (long xv = x_min; xv <= x_max; ++xv) {
        BigRational D = y_discriminant(E, BigRational(xv));
        if (D == 0 || rational_sqrt(D)) continue;
        BigInt num = D.get_num() * D.get_den();  // same square class as D
        auto [core, s] = squarefree_decomposition(num);
        if (!fields.empty() && std::find(fields.begin(), fields.end(), core) == fields.end()) continue;
        BigRational l = E.a1 * xv + E.a3;
        BigRational b = BigRational(s) / (2 * BigRational(D.get_den()));
        out.push_back({QuadraticElement(BigRational(xv), 0, core), QuadraticElement(-l / 2, b, core)});
    }
    return out;
}

inline std::vector<CorpusPoint> build_corpus(const WeierstrassCurve& E, const CorpusConfig& cfg) {
    std::vector<CorpusPoint> base;
    for (const auto& P : rational_points_search(E, cfg.rational_bound))
        base.push_back({"rational-search", lift_point(P, 0), 0});
    if (cfg.quadratic_scan)
        for (const auto& P : quadratic_points_scan(E, cfg.x_min, cfg.x_max, cfg.fields))
            base.push_back({"x-scan", P, P.x.d() != 0 ? P.x.d() : P.y.d()});
    std::map<std::string, CorpusPoint> all;
    auto add = [&all](const CorpusPoint& c) {
        if (!c.point.infinity) all.emplace(point_key(c.point), c);
    };
    for (const auto& c : base) {
        add(c);
        auto EL = base_change(E, c.d);
        QuadraticPoint M = c.point;
        for (int k = 2; k <= cfg.max_multiple; ++k) {
            M = add_unchecked(EL, M, c.point);
            if (M.infinity) break;
            add({"multiple", M, c.d});
        }
    }
    if (cfg.conjugates) {
        std::vector<CorpusPoint> conj;
        for (const auto& [k, c] : all)
            if (c.d != 0 && !is_rational_point(c.point)) conj.push_back({"conjugate", conjugate(c.point), c.d});
        for (const auto& c : conj) add(c);
    }
    std::vector<CorpusPoint> out;
    for (auto& [k, c] : all) out.push_back(c);
    return out;
}

// ---------------------------------------------------------------- c1

enum class C1Mode { empirical, derived };

inline const char* to_string(C1Mode m) { return m == C1Mode::empirical ? "empirical" : "derived"; }

struct C1Evidence {
    std::size_t sample_size = 0;
    std::string worst_point;     // empirical: the maximizing point
    Real archimedean_term = 0;   // derived: max(0, -archimedean_lower_bound)
    double abs_q = 0;            // derived: |q| from j
    Real c2 = 0;
    Real bad_place_term = 0;     // derived: sum (1/24) v(disc) log p over multiplicative p
    std::vector<std::string> notes;
};

struct C1Report {
    C1Mode mode = C1Mode::empirical;
    Real value = 0;
    bool fallback_warning = false;  // derived requested, empirical delivered
    C1Evidence evidence;
};

// 2 * max over the sample of -sum_w weighted min(lambda_w, 0).
inline C1Report c1_empirical(const WeierstrassCurve& E, const std::vector<CorpusPoint>& sample) {
    C1Report r;
    r.mode = C1Mode::empirical;
    Real worst = 0;
    for (const auto& c : sample) {
        HeightDecomposition h = height_decomposition(E, c.point);
        Real neg = 0;
        for (const auto& v : h.entries)
            if (v.value < 0) neg -= v.place.weight() * v.value;
        if (neg > worst) {
            worst = neg;
            r.evidence.worst_point = point_key(c.point);
        }
    }
    r.evidence.sample_size = sample.size();
    r.value = 2 * worst;
    r.evidence.notes.push_back("safety factor 2 over the sample maximum");
    return r;
}

// -(lower bound of the archimedean local height) - sum of multiplicative-place lower bounds.
// Archimedean: lambda >= (1/24) log|q| - c2; multiplicative p: lambda >= -(1/24) v(disc) log p,
// the minimum of (1/2) B2(t) v(disc) log p. Additive places have no bound here.
inline std::optional<C1Report> c1_derived_only(const WeierstrassCurve& E) {
    C1Report r;
    r.mode = C1Mode::derived;
    for (const BigInt& p : prime_divisors(BigInt(E.disc.get_num()))) {
        ReductionInfo info = reduction_type(E, p);
        if (info.type == ReductionType::additive) return std::nullopt;
        r.evidence.bad_place_term += to_real(BigInt(info.v_disc.value)) * log(to_real(p)) / 24;
    }
    double j = to_real(j_invariant(E)).convert_to<double>();
    double aq = abs_q_from_j(j);
    r.evidence.abs_q = aq;
    Real q(aq);
    r.evidence.c2 = c2_tail_bound(q);
    Real lb = archimedean_lower_bound(q);
    r.evidence.archimedean_term = lb < 0 ? Real(-lb) : Real(0);
    r.value = r.evidence.archimedean_term + r.evidence.bad_place_term;
    r.evidence.notes.push_back("c2 = log 2 + (|q| + |q|^(1/2)) / (1 - |q|)");
    return r;
}

inline C1Report c1_bound(const WeierstrassCurve& E, C1Mode mode, const std::vector<CorpusPoint>& sample) {
    if (mode == C1Mode::derived) {
        if (auto r = c1_derived_only(E)) {
            r->evidence.sample_size = sample.size();
            return *r;
        }
        C1Report r = c1_empirical(E, sample);
        r.fallback_warning = true;
        r.evidence.notes.push_back("additive reduction: no documented bound, fell back to empirical");
        return r;
    }
    return c1_empirical(E, sample);
}

// ---------------------------------------------------------------- condition (1)

// Rational j-invariants of CM curves.
inline bool has_cm_j_invariant(const WeierstrassCurve& E) {
    static const std::vector<BigInt> cm_j = {BigInt(0), BigInt(1728), BigInt(-3375), BigInt(8000),
                                             BigInt(-32768), BigInt(54000), BigInt(287496), BigInt(-884736),
                                             BigInt(-12288000), BigInt(16581375), BigInt(-884736000),
                                             BigInt("-147197952000"), BigInt("-262537412640768000")};
    BigRational j = j_invariant(E);
    if (!is_integer(j)) return false;
    return std::find(cm_j.begin(), cm_j.end(), BigInt(j.get_num())) != cm_j.end();
}

enum class HeuristicStatus { heuristic_pass, inconclusive };

struct SurjectivityEvidence {
    long p = 0;
    long sample_bound = 0;
    std::size_t primes_sampled = 0;
    bool borel_excluded = false;
    bool split_cartan_excluded = false;
    bool nonsplit_cartan_excluded = false;
    bool exceptional_excluded = false;
    long max_projective_order = 0;
    HeuristicStatus status = HeuristicStatus::inconclusive;
    std::vector<std::string> notes;
};

namespace detail {

inline u64 powmod_u(u64 b, u64 e, u64 m) { return powmod(b % m, e, m); }

// Order of x in F_p^*.
inline long order_mod(u64 x, u64 p) {
    x %= p;
    if (x == 0) return 0;
    long k = 1;
    for (u64 y = x; y != 1; y = mulmod(y, x, p)) ++k;
    return k;
}

// Order in PGL_2(F_p) of a semisimple element with char poly X^2 - tX + n,
// from the ratio of its eigenvalues. 0 when the char poly has a repeated root.
inline long projective_order(u64 t, u64 n, u64 p) {
    u64 disc = (mulmod(t, t, p) + p - mulmod(4 % p, n, p)) % p;
    if (disc == 0) return 0;
    ResidueField F = ResidueField::quadratic(p);
    if (legendre(disc, p) == 1) {
        u64 s = sqrt_mod(disc, p), inv2 = powmod_u(2, p - 2, p);
        u64 r1 = mulmod((t + s) % p, inv2, p), r2 = mulmod((t + p - s) % p, inv2, p);
        return order_mod(mulmod(r1, powmod_u(r2, p - 2, p), p), p);
    }
    // roots in F_{p^2}: alpha = (t + sqrt(disc)) / 2 with sqrt(disc) = c t_gen for some c
    // disc = c^2 * m0 where t^2 = m0 in F; c = sqrt(disc / m0) exists since both are nonresidues
    u64 ratio = mulmod(disc, powmod_u(F.m0, p - 2, p), p);
    u64 c = sqrt_mod(ratio, p);
    u64 inv2 = powmod_u(2, p - 2, p);
    FqElement alpha(F, mulmod(t, inv2, p), mulmod(c, inv2, p));
    FqElement beta(F, mulmod(t, inv2, p), (p - mulmod(c, inv2, p)) % p);
    FqElement r = alpha / beta, y = r;
    long k = 1;
    FqElement one(F, 1, 0);
    while (!(y == one)) {
        y = y * r;
        ++k;
    }
    return k;
}

// Factorization pattern of 4x^3 + b2 x^2 + 2 b4 x + b6 mod l: number of roots in F_l.
inline int cubic_roots_mod(const WeierstrassCurve& E, u64 l) {
    u64 b2 = reduce_rational(E.b2, l), b4 = reduce_rational(E.b4, l), b6 = reduce_rational(E.b6, l);
    int roots = 0;
    for (u64 x = 0; x < l; ++x) {
        u64 v = (mulmod(4 % l, mulmod(mulmod(x, x, l), x, l), l) + mulmod(b2, mulmod(x, x, l), l) +
                 mulmod(mulmod(2 % l, b4, l), x, l) + b6) % l;
        if (v == 0) ++roots;
    }
    return roots;
}

}  // namespace detail

// Samples Frobenius char polys mod p at good primes l <= sample_bound and tries to rule
// out each proper maximal subgroup class of GL_2(F_p) for the mod-p image.
inline SurjectivityEvidence surjectivity_heuristic(const WeierstrassCurve& E, long p, long sample_bound) {
    SurjectivityEvidence ev;
    ev.p = p;
    ev.sample_bound = sample_bound;
    if (!is_prime(BigInt(p))) throw argument_error("surjectivity heuristic needs a prime");
    if (p == 2) {
        // image in GL_2(F_2) = S_3 is the Galois group of the 2-division cubic
        bool three_cycle = false, transposition = false;
        for (long l = 3; l <= sample_bound; l = next_prime(BigInt(l)).get_si()) {
            if (!reduction_type(E, l).good()) continue;
            ++ev.primes_sampled;
            int r = detail::cubic_roots_mod(E, static_cast<u64>(l));
            if (r == 0) three_cycle = true;
            if (r == 1) transposition = true;
        }
        ev.borel_excluded = three_cycle;
        ev.split_cartan_excluded = ev.nonsplit_cartan_excluded = three_cycle && transposition;
        ev.exceptional_excluded = true;
        ev.notes.push_back("p = 2: S_3 reached iff the 2-division cubic shows a 3-cycle and a transposition");
        ev.status = three_cycle && transposition ? HeuristicStatus::heuristic_pass : HeuristicStatus::inconclusive;
        return ev;
    }
    for (long l = 2; l <= sample_bound; l = next_prime(BigInt(l)).get_si()) {
        if (l == p || !reduction_type(E, l).good()) continue;
        ++ev.primes_sampled;
        long a = l + 1 - count_points_mod_p(E, l);
        u64 t = static_cast<u64>(((a % p) + p) % p), n = static_cast<u64>(l % p);
        u64 disc = (mulmod(t, t, p) + p - mulmod(4, n, p)) % p;
        int chi = disc == 0 ? 0 : legendre(disc, p);
        if (chi == -1) ev.borel_excluded = true;
        if (chi == -1 && t != 0) ev.split_cartan_excluded = true;
        if (chi == 1 && t != 0) ev.nonsplit_cartan_excluded = true;
        ev.max_projective_order = std::max(ev.max_projective_order, detail::projective_order(t, n, p));
    }
    if (p == 3) {
        ev.exceptional_excluded = true;
        ev.nonsplit_cartan_excluded = false;
        ev.notes.push_back("p = 3: the normalizer of the nonsplit Cartan is a 2-Sylow subgroup; "
                           "traces cannot exclude it");
    } else {
        ev.exceptional_excluded = ev.max_projective_order > 5;
    }
    bool pass = ev.borel_excluded && ev.split_cartan_excluded && ev.nonsplit_cartan_excluded && ev.exceptional_excluded;
    ev.status = pass ? HeuristicStatus::heuristic_pass : HeuristicStatus::inconclusive;
    return ev;
}

// ---------------------------------------------------------------- prime selection and bound

enum class ConditionStatus { heuristic_pass, asserted, fail };

inline const char* to_string(ConditionStatus s) {
    switch (s) {
        case ConditionStatus::heuristic_pass: return "heuristic-pass";
        case ConditionStatus::asserted: return "asserted";
        default: return "fail";
    }
}

struct PipelineConfig {
    C1Mode c1_mode = C1Mode::empirical;
    bool assert_condition_1 = false;
    long min_p = 2;
    long max_p = 10000;
    long sample_bound = 500;
    std::uint64_t seed = 1;
    std::size_t extra_c1_samples = 16;  // seeded random multiples added to the c1 sample
    CorpusConfig corpus;
};

struct PrimeSelectionReport {
    long p = 0;
    ConditionStatus cond_torsion = ConditionStatus::fail;
    std::optional<SurjectivityEvidence> torsion_evidence;
    bool cm_flagged = false;
    bool cond_size = false;
    Real size_threshold = 0;  // e^{[K:Q](1 + c1)}
    C1Report c1;
    bool cond_good_reduction = false;
    bool cond_degree1_unramified = true;  // K = Q
    std::vector<long> rejected;           // candidates scanned and rejected
};

inline PrimeSelectionReport select_prime(const WeierstrassCurve& E, const PipelineConfig& cfg, const C1Report& c1) {
    PrimeSelectionReport r;
    r.c1 = c1;
    r.cm_flagged = has_cm_j_invariant(E);
    r.size_threshold = exp(1 + c1.value);
    for (long p = next_prime(BigInt(std::max(2L, cfg.min_p) - 1)).get_si(); p <= cfg.max_p;
         p = next_prime(BigInt(p)).get_si()) {
        if (Real(p) < r.size_threshold || !reduction_type(E, p).good()) {
            r.rejected.push_back(p);
            continue;
        }
        if (cfg.assert_condition_1) {
            r.cond_torsion = ConditionStatus::asserted;
        } else if (r.cm_flagged) {
            r.rejected.push_back(p);
            continue;
        } else {
            SurjectivityEvidence ev = surjectivity_heuristic(E, p, cfg.sample_bound);
            if (ev.status != HeuristicStatus::heuristic_pass) {
                r.rejected.push_back(p);
                continue;
            }
            r.cond_torsion = ConditionStatus::heuristic_pass;
            r.torsion_evidence = ev;
        }
        r.p = p;
        r.cond_size = true;
        r.cond_good_reduction = true;
        return r;
    }
    if (r.cm_flagged && !cfg.assert_condition_1)
        throw search_exhausted_error("curve has CM (j = " + j_invariant(E).get_str() +
                                     "); condition (1) needs --assert-condition-1");
    throw search_exhausted_error("no prime up to " + std::to_string(cfg.max_p) + " satisfies conditions (1)-(4)");
}

struct BoundCertificate {
    long p = 0;
    BigRational C_unramified, C_ramified, C;
    std::vector<std::string> caveats;
};

inline BoundCertificate compute_bound(long p) {
    if (!is_prime(BigInt(p))) throw argument_error("compute_bound needs a prime");
    BoundCertificate b;
    b.p = p;
    BigInt P(p);
    b.C_unramified = make_rational(1, 3 * (1 + 4 * P + P * P));
    b.C_ramified = make_rational(1, 18 * P * P);
    b.C = std::min(b.C_unramified, b.C_ramified);
    return b;
}

// ---------------------------------------------------------------- corpus verification

struct IntermediateCheck {
    long p = 0;
    Real value;      // h_hat(Phi_p(sigma) P)
    Real threshold;  // log p - c1
    bool holds = false;
};

struct CorpusResult {
    CorpusPoint entry;
    TorsionResult torsion;
    bool meets_bound = true;
    std::optional<IntermediateCheck> intermediate;
};

struct VerificationRun {
    std::vector<CorpusResult> results;
    std::vector<std::string> violations;
    std::size_t nontorsion = 0, torsion = 0;
    std::size_t quadratic_fields = 0;
    bool vacuous = false;
    bool pass() const { return violations.empty(); }
};

inline VerificationRun verify_corpus(const WeierstrassCurve& E, const std::optional<BoundCertificate>& cert,
                                     const std::vector<CorpusPoint>& corpus, std::optional<Real> c1 = std::nullopt) {
    VerificationRun run;
    std::set<BigInt> fields;
    for (const auto& c : corpus) {
        CorpusResult res;
        res.entry = c;
        res.torsion = torsion_test(E, c.point);
        const std::string key = point_key(c.point) + (c.d != 0 ? " over Q(sqrt " + c.d.get_str() + ")" : "");
        switch (res.torsion.status) {
            case TorsionStatus::torsion: ++run.torsion; break;
            case TorsionStatus::inconclusive:
                run.violations.push_back("unclassified point " + key);
                break;
            case TorsionStatus::nontorsion: {
                ++run.nontorsion;
                if (c.d != 0 && !is_rational_point(c.point)) fields.insert(c.d);
                if (!cert) {
                    run.violations.push_back("no certificate for nontorsion point " + key);
                    break;
                }
                Real lower = *res.torsion.height - res.torsion.height_error;
                res.meets_bound = lower >= to_real(cert->C);
                if (!res.meets_bound) run.violations.push_back("h_hat below C at " + key);
                bool unramified = c.d == 0 || is_rational_point(c.point) ||
                                  splitting_type(QuadraticField(c.d), cert->p).splitting != Splitting::ramified;
                if (c1 && unramified && reduction_type(E, cert->p).good()) {
                    AnnihilationReport a = verify_annihilation(E, c.point, cert->p);
                    IntermediateCheck ic;
                    ic.p = cert->p;
                    ic.value = a.torsion ? Real(0) : canonical_height(E, a.image).value;
                    ic.threshold = log(Real(cert->p)) - *c1;
                    ic.holds = ic.value >= ic.threshold;
                    res.intermediate = ic;
                }
                break;
            }
        }
        run.results.push_back(std::move(res));
    }
    run.quadratic_fields = fields.size();
    run.vacuous = run.nontorsion == 0;
    return run;
}

// ---------------------------------------------------------------- end to end

struct PipelineReport {
    WeierstrassCurve curve;
    PipelineConfig config;
    std::size_t corpus_size = 0;
    C1Report c1;
    std::optional<PrimeSelectionReport> selection;
    std::optional<std::string> selection_error;
    std::optional<BoundCertificate> certificate;
    VerificationRun run;
    bool pass() const { return run.pass(); }
};

// c1 sample: the corpus plus seeded random multiples [k]P, 2 <= |k| <= 5, of corpus points.
inline std::vector<CorpusPoint> c1_sample(const WeierstrassCurve& E, const std::vector<CorpusPoint>& corpus,
                                          std::size_t extra, std::uint64_t seed) {
    std::vector<CorpusPoint> s = corpus;
    if (corpus.empty()) return s;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
    std::uniform_int_distribution<long> mult(2, 5);
    for (std::size_t i = 0; i < extra; ++i) {
        const CorpusPoint& c = corpus[pick(rng)];
        long k = mult(rng);
        QuadraticPoint M = scalar_mul(base_change(E, c.d), k, c.point);
        if (!M.infinity) s.push_back({"random-multiple", M, c.d});
    }
    return s;
}

inline PipelineReport run_pipeline(const WeierstrassCurve& E, const PipelineConfig& cfg) {
    PipelineReport rep;
    rep.curve = E;
    rep.config = cfg;
    std::vector<CorpusPoint> corpus = build_corpus(E, cfg.corpus);
    rep.corpus_size = corpus.size();
    rep.c1 = c1_bound(E, cfg.c1_mode, c1_sample(E, corpus, cfg.extra_c1_samples, cfg.seed));
    try {
        rep.selection = select_prime(E, cfg, rep.c1);
        rep.certificate = compute_bound(rep.selection->p);
        rep.certificate->caveats.push_back(std::string("condition (1): ") + to_string(rep.selection->cond_torsion));
        rep.certificate->caveats.push_back(std::string("c1 mode: ") + to_string(rep.c1.mode) +
                                           (rep.c1.fallback_warning ? " (fallback from derived)" : ""));
    } catch (const search_exhausted_error& e) {
        rep.selection_error = e.what();
    }
    rep.run = verify_corpus(E, rep.certificate, corpus, rep.c1.value);
    return rep;
}

}  // namespace heightforge
