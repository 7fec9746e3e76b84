#include "qdiff/report.hpp"

namespace qdiff {

Json json_real(const Real& x) { return static_cast<double>(x); }

Json json_complex(const Complex& z) {
    return Json::array({json_real(z.re), json_real(z.im)});
}

Json json_series(const Series& s) {
    Json coeffs = Json::array();
    for (const auto& v : s.c) coeffs.push_back(json_complex(v));
    return Json{{"ram", s.ram}, {"val", s.val}, {"coeffs", coeffs}, {"trunc", s.window()}};
}

Json json_rational(const Rational& r) {
    return Json::array({r.numerator(), r.denominator()});
}

Json json_context(const QContext& ctx) {
    return Json{{"omega", ctx.omega_spec.describe()},
                {"omega_value", json_real(ctx.omega)},
                {"precision", ctx.digits},
                {"trunc", ctx.trunc},
                {"horizon", ctx.horizon},
                {"tol", json_real(ctx.tol)}};
}

Json json_polygon(const NewtonPolygon& np) {
    Json slopes = Json::array();
    for (const auto& [mu, r] : np.slopes)
        slopes.push_back(Json{{"slope", json_rational(mu)}, {"length", r}});
    Json out{{"slopes", slopes}, {"width", np.width()}};
    if (!np.indeterminate_coeffs.empty()) out["indeterminate_coeffs"] = np.indeterminate_coeffs;
    return out;
}

Json json_slope_data(const SlopeData& sd) {
    Json cp = Json::array();
    for (const auto& c : sd.char_poly) cp.push_back(json_complex(c));
    Json ex = Json::array();
    for (const auto& e : sd.exponents) ex.push_back(json_complex(e));
    return Json{{"slope", json_rational(sd.mu)},
                {"length", sd.r},
                {"char_poly", cp},
                {"exponents", ex},
                {"root_residual", json_real(sd.root_residual)}};
}

Json json_class_group(const QClassGroup& g) {
    Json members = Json::array();
    for (const auto& m : g.members) members.push_back(json_complex(m));
    return Json{{"representative", json_complex(g.representative)},
                {"shifts", g.matched_shifts},
                {"members", members}};
}

static const char* trend_name(RadiusTrend t) {
    switch (t) {
    case RadiusTrend::Stable: return "stable";
    case RadiusTrend::Shrinking: return "shrinking";
    case RadiusTrend::Growing: return "growing";
    }
    return "?";
}

Json json_radius(const RadiusEstimate& r) {
    return Json{{"estimate", json_real(r.estimate)}, {"trend", trend_name(r.trend)}};
}

Json json_admissibility(const AdmissibilityVerdict& v) {
    Json slopes = Json::array();
    for (const auto& ev : v.slopes) {
        Json j{{"slope", json_rational(ev.mu)}, {"verdict", verdict_name(ev.verdict)}};
        Json ex = Json::array();
        for (const auto& e : ev.exponents) ex.push_back(json_complex(e));
        j["exponents"] = ex;
        j["ratio_set_size"] = ev.lambda_set.size();
        j["excluded_pairs"] = ev.excluded_pairs.size();
        if (ev.phi_radius) j["phi_radius"] = json_radius(*ev.phi_radius);
        if (ev.base_radius) j["base_radius"] = json_radius(*ev.base_radius);
        Json pr = Json::array();
        for (const auto& r : ev.pair_radii) pr.push_back(json_radius(r));
        j["pair_radii"] = pr;
        if (!ev.note.empty()) j["note"] = ev.note;
        slopes.push_back(std::move(j));
    }
    return Json{{"status", verdict_name(v.status)},
                {"slopes", slopes},
                {"horizon", v.horizon},
                {"N", v.N_used}};
}

Json json_factorization(const Factorization& f, const VerifyReport& rep) {
    Json factors = Json::array();
    for (const auto& fac : f.factors)
        factors.push_back(Json{{"mu", json_rational(fac.mu)},
                               {"lambda", json_complex(fac.lambda)},
                               {"h", json_series(fac.h)}});
    return Json{{"mode", f.mode == FactorMode::Analytic ? "analytic" : "formal"},
                {"ram", f.ram},
                {"unit", json_series(f.unit)},
                {"factors", factors},
                {"permutation", f.permutation},
                {"max_dev", json_real(rep.max_dev)},
                {"verified", rep.pass}};
}

Json json_invariants(const ModuleInvariants& inv) {
    Json classes = Json::array();
    for (const auto& [mu, groups] : inv.slope_classes) {
        Json g = Json::array();
        for (const auto& grp : groups) g.push_back(json_class_group(grp));
        classes.push_back(Json{{"slope", json_rational(mu)}, {"classes", g}});
    }
    return Json{{"polygon", json_polygon(inv.polygon)},
                {"slope_classes", classes},
                {"admissibility", json_admissibility(inv.admissible)}};
}

Json json_iso(const IsoResult& r) {
    Json out{{"verdict", iso_verdict_name(r.verdict)}, {"reason", r.reason}};
    if (r.has_witness) {
        Json g = Json::array();
        for (const auto& row : r.gauge) {
            Json jr = Json::array();
            for (const auto& e : row) jr.push_back(json_series(e));
            g.push_back(std::move(jr));
        }
        out["gauge"] = g;
        out["witness_residual"] = json_real(r.witness_residual);
    }
    return out;
}

Json json_system(const QSystem& s) {
    Json rows = Json::array();
    for (const auto& row : s.entries) {
        Json jr = Json::array();
        for (const auto& e : row) jr.push_back(json_series(e));
        rows.push_back(std::move(jr));
    }
    Json out{{"rank", s.rank()}, {"ram", s.ram}, {"entries", rows}};
    if (!s.note.empty()) out["note"] = s.note;
    return out;
}

Json json_cf(const ContinuedFraction& cf) {
    Json a = Json::array(), p = Json::array(), q = Json::array();
    for (const auto& v : cf.a) a.push_back(v.str());
    for (const auto& v : cf.p) p.push_back(v.str());
    for (const auto& v : cf.q) q.push_back(v.str());
    return Json{{"a", a},
                {"p", p},
                {"q", q},
                {"rational_input", cf.rational_input},
                {"precision_exhausted", cf.precision_exhausted}};
}

Json json_brjuno(const BrjunoEstimate& b) {
    Json sums = Json::array(), wt = Json::array();
    for (const auto& s : b.partial_sums) sums.push_back(json_real(s));
    for (const auto& s : b.weighted_terms) wt.push_back(json_real(s));
    return Json{{"partial_sums", sums},
                {"weighted_terms", wt},
                {"value", json_real(b.value())},
                {"last_increment", json_real(b.last_increment())},
                {"converged", b.converged},
                {"depth", b.depth}};
}

Json make_report(const std::string& command, const QContext& ctx, Json result,
                 std::vector<std::string> warnings) {
    return Json{{"schema", "qdiff-report/1"},
                {"command", command},
                {"context", json_context(ctx)},
                {"result", std::move(result)},
                {"warnings", warnings}};
}

} // namespace qdiff
