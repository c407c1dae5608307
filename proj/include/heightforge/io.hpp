#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "heightforge/formal_group.hpp"
#include "heightforge/frobenius.hpp"
#include "heightforge/pipeline.hpp"
#include "heightforge/ramified.hpp"

namespace heightforge {

using json = nlohmann::ordered_json;

inline constexpr int report_digits = 20;

// Reals go out as decimal strings; the declared precision travels alongside.
inline json real_json(const Real& x, int digits = report_digits) { return to_decimal(x, digits); }

inline BigRational rational_field(const json& j, const char* key) {
    if (!j.contains(key)) return 0;
    const json& v = j.at(key);
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return BigRational(BigInt(std::to_string(v.get<long long>())));
    throw argument_error(std::string("coefficient ") + key + " must be an integer or a \"num/den\" string");
}

inline WeierstrassCurve curve_from_json(const json& j) {
    if (!j.is_object()) throw argument_error("curve JSON must be an object");
    return make_curve(rational_field(j, "a1"), rational_field(j, "a2"), rational_field(j, "a3"),
                      rational_field(j, "a4"), rational_field(j, "a6"));
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw argument_error("malformed JSON in " + path + ": " + e.what());
    }
}

inline WeierstrassCurve load_curve(const std::string& path) { return curve_from_json(read_json_file(path)); }

inline json curve_json(const WeierstrassCurve& E) {
    return {{"a1", E.a1.get_str()}, {"a2", E.a2.get_str()}, {"a3", E.a3.get_str()},
            {"a4", E.a4.get_str()}, {"a6", E.a6.get_str()}, {"disc", E.disc.get_str()},
            {"j", j_invariant(E).get_str()}};
}

// Optional "corpus" block of a curve file.
inline CorpusConfig corpus_config_from_json(const json& j, CorpusConfig cfg = {}) {
    if (!j.contains("corpus")) return cfg;
    const json& c = j.at("corpus");
    if (c.contains("rational_bound")) cfg.rational_bound = c.at("rational_bound").get<long>();
    if (c.contains("quadratic_scan")) cfg.quadratic_scan = c.at("quadratic_scan").get<bool>();
    if (c.contains("x_range")) {
        cfg.x_min = c.at("x_range").at(0).get<long>();
        cfg.x_max = c.at("x_range").at(1).get<long>();
    }
    if (c.contains("fields")) {
        cfg.fields.clear();
        for (const auto& f : c.at("fields"))
            cfg.fields.emplace_back(f.is_string() ? f.get<std::string>() : std::to_string(f.get<long long>()));
    }
    if (c.contains("max_multiple")) cfg.max_multiple = c.at("max_multiple").get<int>();
    if (c.contains("conjugates")) cfg.conjugates = c.at("conjugates").get<bool>();
    return cfg;
}

// "x,y" with each coordinate a rational or "a+b*sqrt(d)".
inline QuadraticPoint parse_point(const std::string& s, const BigInt& d = 0) {
    auto comma = s.find(',');
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
        throw argument_error("point must be given as \"x,y\"");
    auto coord = [&d](const std::string& t) {
        if (d == 0) return QuadraticElement(parse_rational(t));
        return parse_quadratic(t, d);
    };
    QuadraticPoint P{coord(s.substr(0, comma)), coord(s.substr(comma + 1))};
    return P;
}

inline json point_json(const QuadraticPoint& P) {
    if (P.infinity) return "O";
    return json::array({P.x.str(), P.y.str()});
}

inline json to_json(const HeightDecomposition& h, int digits = report_digits) {
    json entries = json::array();
    for (const auto& v : h.entries) {
        json e = {{"place", v.place.label}, {"value", real_json(v.value, digits)}, {"method", to_string(v.method)},
                  {"weight", real_json(v.place.weight(), 6)}};
        if (v.log_coefficient) e["log_coefficient"] = v.log_coefficient->get_str();
        entries.push_back(e);
    }
    return {{"global", real_json(h.global, digits)}, {"entries", entries},
            {"residual", real_json(h.residual, digits)}, {"precision", digits}};
}

inline json to_json(const AnnihilationReport& r, int digits = report_digits) {
    json j = {{"p", r.frobenius.p.get_si()}, {"a", r.frobenius.a.get_si()}, {"Np", r.frobenius.N_p.get_si()},
              {"sigma", r.sigma.kind == GaloisAutomorphism::Kind::identity ? "identity" : "conjugation"},
              {"image", point_json(r.image)}, {"torsion", r.torsion}, {"kernel", r.in_kernel}};
    j["lambda"] = r.local_value ? real_json(*r.local_value, digits) : json(nullptr);
    j["bound"] = real_json(r.bound, digits);
    j["bound_met"] = r.bound_met;
    j["precision"] = digits;
    return j;
}

inline json to_json(const NontorsionCertificate& c) {
    return {{"r", c.r.get_str()}, {"minimal_r", c.minimal_r.get_str()}, {"m", c.m},
            {"a", c.a.str()}, {"b", c.b.str()}, {"identity_holds", c.identity_holds}};
}

inline json series_json(const TruncSeries1& f) {
    json a = json::array();
    for (const auto& c : coefficients(f)) a.push_back(c.get_str());
    return a;
}

// Rows by total degree n, entry i the coefficient of x^i y^(n-i).
inline json series_json(const TruncSeries2& f) {
    json rows = json::array();
    for (int n = 0; n <= f.precision(); ++n) {
        json row = json::array();
        for (int i = 0; i <= n; ++i) row.push_back(f.coeff({i, n - i}).get_str());
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const ADWitness& w) {
    return {{"m", w.m}, {"p", w.p}, {"tau_k", w.tau.k}, {"exhaustive", w.exhaustive_checked},
            {"samples", w.samples.size()}, {"checked", w.checked}, {"failures", w.failures.size()},
            {"all_pass", w.all_pass}};
}

inline json to_json(const RamifiedCheckReport& r, int digits = report_digits) {
    json j = {{"d", r.d.get_str()}, {"p", r.p.get_str()}, {"prime", r.prime.label()}, {"P", point_json(r.P)},
              {"outcome", to_string(r.outcome)}};
    if (r.outcome == RamifiedOutcome::torsion) j["torsion_order"] = r.torsion_order;
    j["Q"] = point_json(r.Q);
    j["kernel_witness"] = r.kernel_witness ? json(r.kernel_witness->get_str()) : json(nullptr);
    j["Pprime_digits"] = point_digits(r.Pprime);
    j["valuation"] = r.valuation ? json(r.valuation->get_str()) : json(nullptr);
    j["lambda"] = r.local_height ? real_json(*r.local_height, digits) : json(nullptr);
    j["bound"] = real_json(log(to_real(r.p)), digits);
    j["bound_met"] = r.bound_met;
    j["precision"] = digits;
    return j;
}

inline json to_json(const C1Report& c, int digits = report_digits) {
    json ev = {{"sample_size", c.evidence.sample_size}};
    if (c.mode == C1Mode::empirical) ev["worst_point"] = c.evidence.worst_point;
    else {
        ev["abs_q"] = to_decimal(Real(c.evidence.abs_q), 16);
        ev["c2"] = real_json(c.evidence.c2, digits);
        ev["archimedean_term"] = real_json(c.evidence.archimedean_term, digits);
        ev["bad_place_term"] = real_json(c.evidence.bad_place_term, digits);
    }
    ev["notes"] = c.evidence.notes;
    return {{"mode", to_string(c.mode)}, {"value", real_json(c.value, digits)},
            {"fallback_warning", c.fallback_warning}, {"evidence", ev}};
}

inline json to_json(const SurjectivityEvidence& e) {
    return {{"p", e.p},
            {"sample_bound", e.sample_bound},
            {"primes_sampled", e.primes_sampled},
            {"borel_excluded", e.borel_excluded},
            {"split_cartan_excluded", e.split_cartan_excluded},
            {"nonsplit_cartan_excluded", e.nonsplit_cartan_excluded},
            {"exceptional_excluded", e.exceptional_excluded},
            {"max_projective_order", e.max_projective_order},
            {"status", e.status == HeuristicStatus::heuristic_pass ? "heuristic-pass" : "inconclusive"},
            {"notes", e.notes}};
}

inline json to_json(const PipelineReport& r, int digits = report_digits) {
    json j;
    j["curve"] = curve_json(r.curve);
    j["cm_flagged"] = has_cm_j_invariant(r.curve);
    j["c1"] = to_json(r.c1, digits);
    if (r.selection) {
        const auto& s = *r.selection;
        json sel = {{"p", s.p},
                    {"cond_torsion", to_string(s.cond_torsion)},
                    {"cond_size", s.cond_size},
                    {"size_threshold", real_json(s.size_threshold, digits)},
                    {"cond_good_reduction", s.cond_good_reduction},
                    {"cond_degree1_unramified", s.cond_degree1_unramified},
                    {"rejected", s.rejected}};
        if (s.torsion_evidence) sel["torsion_evidence"] = to_json(*s.torsion_evidence);
        j["selection"] = sel;
    } else {
        j["selection"] = nullptr;
        j["selection_error"] = r.selection_error.value_or("");
    }
    if (r.certificate) {
        const auto& c = *r.certificate;
        j["certificate"] = {{"p", c.p},
                            {"C_unramified", c.C_unramified.get_str()},
                            {"C_ramified", c.C_ramified.get_str()},
                            {"C", c.C.get_str()},
                            {"caveats", c.caveats}};
    } else {
        j["certificate"] = nullptr;
    }
    json pts = json::array();
    for (const auto& res : r.run.results) {
        json p = {{"point", point_json(res.entry.point)},
                  {"field", res.entry.d.get_str()},
                  {"source", res.entry.source},
                  {"status", to_string(res.torsion.status)}};
        if (res.torsion.status == TorsionStatus::torsion) p["order"] = res.torsion.order;
        p["height"] = res.torsion.height ? real_json(*res.torsion.height, digits) : json(nullptr);
        p["meets_bound"] = res.meets_bound;
        if (res.intermediate) {
            p["intermediate"] = {{"p", res.intermediate->p},
                                 {"height", real_json(res.intermediate->value, digits)},
                                 {"threshold", real_json(res.intermediate->threshold, digits)},
                                 {"holds", res.intermediate->holds}};
        }
        pts.push_back(p);
    }
    j["verification"] = {{"corpus_size", r.run.results.size()},
                         {"nontorsion", r.run.nontorsion},
                         {"torsion", r.run.torsion},
                         {"quadratic_fields", r.run.quadratic_fields},
                         {"vacuous", r.run.vacuous},
                         {"violations", r.run.violations},
                         {"points", pts}};
    j["pass"] = r.pass();
    j["precision"] = digits;
    return j;
}

}  // namespace heightforge
