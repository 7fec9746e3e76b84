#include "qdiff/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace qdiff;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUndecided = 2;

struct CommonOpts {
    std::string omega = "golden";
    unsigned precision = 50;
    int trunc = 64;
    long horizon = 50;
    double tol = 0.0;

    QContextPtr make_ctx() const {
        return QContext::make(OmegaSpec::parse(omega), precision, trunc, horizon, tol);
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--omega", o.omega,
                    "omega preset: golden | sqrt2m1 | liouville-demo | cf:[a1,a2,...] | dec:0.123");
    cmd->add_option("--precision", o.precision, "working precision in decimal digits");
    cmd->add_option("--trunc", o.trunc, "series truncation order");
    cmd->add_option("--horizon", o.horizon, "q^Z search horizon");
    cmd->add_option("--tol", o.tol, "comparison tolerance override");
}

// `@file` arguments are read from disk.
std::string resolve_input(const std::string& arg) {
    if (arg.empty() || arg[0] != '@') return arg;
    std::ifstream in(arg.substr(1));
    if (!in) throw std::runtime_error("cannot open input file: " + arg.substr(1));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

int emit_error(const std::string& command, const std::string& what) {
    Json err{{"schema", "qdiff-report/1"},
             {"command", command},
             {"error", what}};
    std::cout << err.dump(2) << "\n";
    return kExitError;
}

std::vector<std::size_t> parse_permutation(const std::string& text) {
    std::vector<std::size_t> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(static_cast<std::size_t>(std::stoul(cur)));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    return out;
}

int cmd_newton(const CommonOpts& o, const std::string& optext) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = parse_operator(resolve_input(optext), ctx);
    NewtonPolygon np = newton_polygon(normalize(L));
    std::vector<std::string> warnings;
    if (!np.indeterminate_coeffs.empty())
        warnings.push_back("some coefficient windows are all-zero; hull may be incomplete");
    emit(make_report("newton", *ctx, Json{{"polygon", json_polygon(np)}}, warnings));
    return kExitOk;
}

int cmd_exponents(const CommonOpts& o, const std::string& optext) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = normalize(parse_operator(resolve_input(optext), ctx));
    NewtonPolygon np = newton_polygon(L);
    Json slopes = Json::array();
    for (const auto& [mu, r] : np.slopes) {
        SlopeData sd = slope_data(L, mu);
        Json j = json_slope_data(sd);
        Json groups = Json::array();
        for (const auto& g : group_q_classes(sd.exponents, *ctx))
            groups.push_back(json_class_group(g));
        j["q_classes"] = groups;
        slopes.push_back(std::move(j));
    }
    emit(make_report("exponents", *ctx, Json{{"slopes", slopes}}));
    return kExitOk;
}

int cmd_admissible(const CommonOpts& o, const std::string& optext) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = parse_operator(resolve_input(optext), ctx);
    AdmissibilityVerdict v = admissibility(normalize(L));
    emit(make_report("admissible", *ctx, json_admissibility(v)));
    return v.status == Verdict::Admissible ? kExitOk : kExitUndecided;
}

int cmd_factor(const CommonOpts& o, const std::string& optext, const std::string& perm,
               const std::string& mode) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = parse_operator(resolve_input(optext), ctx);
    FactorMode fm = mode == "formal" ? FactorMode::Formal : FactorMode::Analytic;
    std::vector<std::size_t> p = perm.empty() ? std::vector<std::size_t>{} : parse_permutation(perm);
    try {
        Factorization f = factor_ramified(L, p, fm);
        VerifyReport rep = verify_factorization(L, f);
        emit(make_report("factor", *ctx, json_factorization(f, rep)));
        return rep.pass ? kExitOk : kExitUndecided;
    } catch (const SmallDivisorAbort& e) {
        Json res{{"status", "small_divisor_abort"},
                 {"n", e.n},
                 {"magnitude", json_real(e.magnitude)},
                 {"mode", mode}};
        emit(make_report("factor", *ctx, std::move(res),
                         {"analytic extraction aborted; retry with --mode formal"}));
        return kExitUndecided;
    } catch (const ResonanceError& e) {
        emit(make_report("factor", *ctx, Json{{"status", "resonance"}, {"n", e.n}},
                         {e.what()}));
        return kExitUndecided;
    }
}

int cmd_classify(const CommonOpts& o, const std::string& optext) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator L = parse_operator(resolve_input(optext), ctx);
    ModuleInvariants inv = invariants(L);
    emit(make_report("classify", *ctx, json_invariants(inv)));
    return inv.admissible.status == Verdict::Undecided ? kExitUndecided : kExitOk;
}

int cmd_iso(const CommonOpts& o, const std::string& a, const std::string& b) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    SkewOperator A = parse_operator(resolve_input(a), ctx);
    SkewOperator B = parse_operator(resolve_input(b), ctx);
    IsoResult r = formal_isomorphic(A, B);
    emit(make_report("iso", *ctx, json_iso(r)));
    return r.verdict == IsoVerdict::Undecided ? kExitUndecided : kExitOk;
}

int cmd_kummer(const CommonOpts& o, const std::string& alpha, long N) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real(alpha));
    const Complex& q = ctx->q;
    // phi_{(q; q lambda)}((1-q) t) against (1-lambda) e_q(t) g_lambda(t).
    Series lhs = dilate(phi_series({q * lambda}, N, *ctx), Complex(Real(1)) - q);
    Series eq = special_series(SpecialKind::EQ, N, *ctx);
    Series gl = special_series(SpecialKind::GLambda, N, *ctx, lambda);
    Series rhs = scalar_mul(Complex(Real(1)) - lambda, mul(eq, gl, *ctx));
    auto dev = max_dev(lhs, rhs, *ctx);
    Real d = dev ? *dev : Real(1);
    bool pass = d <= ctx->tol * 100;
    Json res{{"alpha", alpha},
             {"N", N},
             {"max_dev", json_real(d)},
             {"pass", pass}};
    emit(make_report("kummer-verify", *ctx, std::move(res)));
    return pass ? kExitOk : kExitError;
}

int cmd_phi_radius(const CommonOpts& o, const std::vector<std::string>& alphas, long N) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    std::vector<Complex> lambdas;
    Json in = Json::array();
    for (const auto& a : alphas) {
        lambdas.push_back(unit_circle(Real(a)));
        in.push_back(a);
    }
    try {
        Series phi = phi_series(lambdas, N, *ctx);
        RadiusEstimate r = radius_estimate(phi, std::max<long>(8, N / 4), *ctx);
        emit(make_report("phi-radius", *ctx,
                         Json{{"alphas", in}, {"N", N}, {"radius", json_radius(r)}}));
        return kExitOk;
    } catch (const PochhammerZero& e) {
        emit(make_report("phi-radius", *ctx,
                         Json{{"alphas", in}, {"N", N}, {"status", "resonance"}}, {e.what()}));
        return kExitUndecided;
    }
}

int cmd_brjuno(const CommonOpts& o, std::size_t depth, const std::string& C0) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    ContinuedFraction cf = cf_expand(ctx->omega_spec, depth);
    Json res{{"cf", json_cf(cf)}};
    std::vector<std::string> warnings;
    int code = kExitOk;
    if (cf.depth() >= 2) {
        BrjunoEstimate b = brjuno(cf, Real("1e-8"), ctx->omega);
        res["brjuno"] = json_brjuno(b);
        res["yoccoz_bound"] = json_real(yoccoz_bound(b.value(), Real(C0)));
        if (!b.converged) {
            warnings.push_back("partial sums not converged at this depth");
            code = kExitUndecided;
        }
    } else {
        warnings.push_back("fewer than 2 partial quotients available");
        code = kExitUndecided;
    }
    emit(make_report("brjuno", *ctx, std::move(res), warnings));
    return code;
}

int cmd_resn(const CommonOpts& o, long mu, int n, const std::string& alpha, bool run_cyclic,
             const char* name) {
    QContextPtr ctx = o.make_ctx();
    ScopedPrecision prec(ctx->digits);
    Complex lambda = unit_circle(Real(alpha));
    QSystem S = n == 1 ? rank1_module(ctx, mu, lambda)
                       : restriction_of_scalars(ctx, mu, lambda, n);
    Json res{{"mu", mu}, {"n", n}, {"alpha", alpha}, {"system", json_system(S)}};
    std::vector<std::string> warnings;
    if (!S.note.empty()) warnings.push_back(S.note);
    if (run_cyclic) {
        CyclicResult cr = cyclic_vector(S);
        Json vec = Json::array();
        for (const auto& s : cr.vec) vec.push_back(json_series(s));
        Json coeffs = Json::array();
        for (const auto& s : cr.op.a) coeffs.push_back(json_series(s));
        res["cyclic_vector"] = vec;
        res["operator"] = Json{{"ram", cr.op.ram}, {"coeffs", coeffs}};
        res["candidates_tried"] = cr.candidates_tried;
        res["polygon"] = json_polygon(newton_polygon(normalize(cr.op)));
    }
    emit(make_report(name, *ctx, std::move(res), warnings));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qdiff: analysis of linear q-difference operators on the unit circle"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string optext, optext2, perm, mode = "analytic", alpha = "0.31", C0 = "0";
    std::vector<std::string> alphas;
    long N = 128;
    std::size_t depth = 40;
    long mu = 0;
    int n = 1;

    auto* c_newton = app.add_subcommand("newton", "Newton polygon of an operator");
    add_common(c_newton, common);
    c_newton->add_option("operator", optext, "operator expression or @file")->required();

    auto* c_exp = app.add_subcommand("exponents", "slope characteristic roots and q-classes");
    add_common(c_exp, common);
    c_exp->add_option("operator", optext)->required();

    auto* c_adm = app.add_subcommand("admissible", "small-divisor admissibility verdict");
    add_common(c_adm, common);
    c_adm->add_option("operator", optext)->required();

    auto* c_factor = app.add_subcommand("factor", "factorization into rank-one factors");
    add_common(c_factor, common);
    c_factor->add_option("operator", optext)->required();
    c_factor->add_option("--permutation", perm, "slope block order, comma list of indices");
    c_factor->add_option("--mode", mode, "analytic|formal");

    auto* c_classify = app.add_subcommand("classify", "module invariants");
    add_common(c_classify, common);
    c_classify->add_option("operator", optext)->required();

    auto* c_iso = app.add_subcommand("iso", "formal isomorphism test of two operators");
    add_common(c_iso, common);
    c_iso->add_option("operator1", optext)->required();
    c_iso->add_option("operator2", optext2)->required();

    auto* c_kummer = app.add_subcommand("kummer-verify", "q-Kummer identity check");
    add_common(c_kummer, common);
    c_kummer->add_option("--alpha", alpha, "lambda = exp(2*pi*i*alpha)");
    c_kummer->add_option("--N", N, "comparison order");

    auto* c_phi = app.add_subcommand("phi-radius", "radius evidence for phi_{(q;Lambda)}");
    add_common(c_phi, common);
    c_phi->add_option("--alpha", alphas, "lambda_i = exp(2*pi*i*alpha_i), repeatable")
        ->required();
    c_phi->add_option("--N", N, "number of coefficients");

    auto* c_brjuno = app.add_subcommand("brjuno", "continued fraction and Brjuno sums");
    add_common(c_brjuno, common);
    c_brjuno->add_option("--depth", depth, "continued-fraction depth");
    c_brjuno->add_option("--C0", C0, "constant in the radius lower bound");

    auto* c_cyclic = app.add_subcommand("cyclic", "cyclic vector of Res_n(mu, lambda)");
    add_common(c_cyclic, common);
    c_cyclic->add_option("--mu", mu, "slope numerator (x-units times n)");
    c_cyclic->add_option("--n", n, "ramification order");
    c_cyclic->add_option("--alpha", alpha, "lambda = exp(2*pi*i*alpha)");

    auto* c_resn = app.add_subcommand("resn", "restriction of scalars Res_n(mu, lambda)");
    add_common(c_resn, common);
    c_resn->add_option("--mu", mu);
    c_resn->add_option("--n", n);
    c_resn->add_option("--alpha", alpha);

    CLI11_PARSE(app, argc, argv);

    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (c_newton->parsed()) return cmd_newton(common, optext);
        if (c_exp->parsed()) return cmd_exponents(common, optext);
        if (c_adm->parsed()) return cmd_admissible(common, optext);
        if (c_factor->parsed()) return cmd_factor(common, optext, perm, mode);
        if (c_classify->parsed()) return cmd_classify(common, optext);
        if (c_iso->parsed()) return cmd_iso(common, optext, optext2);
        if (c_kummer->parsed()) return cmd_kummer(common, alpha, N);
        if (c_phi->parsed()) return cmd_phi_radius(common, alphas, N);
        if (c_brjuno->parsed()) return cmd_brjuno(common, depth, C0);
        if (c_cyclic->parsed()) return cmd_resn(common, mu, n, alpha, true, "cyclic");
        if (c_resn->parsed()) return cmd_resn(common, mu, n, alpha, false, "resn");
    } catch (const std::exception& e) {
        return emit_error(cmd, e.what());
    }
    return emit_error(cmd, "unknown command");
}
