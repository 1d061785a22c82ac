#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dwork/frobenius.hpp"
#include "dwork/oracle.hpp"
#include "dwork/pushforward.hpp"
#include "dwork/splitting.hpp"
#include "dwork/threefold.hpp"

using namespace dwork;
using ojson = nlohmann::ordered_json;

namespace {

/*
 * Deterministic report: key = value text lines (with [section] headers) plus
 * a JSON mirror of the same tree.  Nothing environment-dependent (paths,
 * timing, thread counts) may be added, so identical configs produce
 * byte-identical files.
 */
class Report {
public:
    explicit Report(const std::string& command) : root_(ojson::object()) {
        root_["command"] = command;
        lines_.push_back("command = " + command);
        cur_ = &root_;
    }

    void section(const std::string& name) {
        lines_.push_back("");
        lines_.push_back("[" + name + "]");
        root_[name] = ojson::object();
        cur_ = &root_[name];
    }

    void kv(const std::string& k, const std::string& v) {
        lines_.push_back(k + " = " + v);
        (*cur_)[k] = v;
    }
    void kv(const std::string& k, const char* v) { kv(k, std::string(v)); }
    void kv(const std::string& k, long v) {
        lines_.push_back(k + " = " + std::to_string(v));
        (*cur_)[k] = v;
    }
    void kv(const std::string& k, bool v) {
        lines_.push_back(k + " = " + (v ? "true" : "false"));
        (*cur_)[k] = v;
    }
    void kv(const std::string& k, const mpq_class& v) { kv(k, v.get_str()); }
    void kv(const std::string& k, const mpz_class& v) { kv(k, v.get_str()); }

    void list(const std::string& k, const std::vector<std::string>& items) {
        ojson arr = ojson::array();
        for (size_t i = 0; i < items.size(); ++i) {
            lines_.push_back(k + "[" + std::to_string(i) + "] = " + items[i]);
            arr.push_back(items[i]);
        }
        (*cur_)[k] = arr;
    }

    void matrix(const std::string& name, const PrecMatrix& m) {
        section(name);
        kv("dim", m.dim);
        kv("certificate", m.certificate);
        ojson rows = ojson::array();
        for (long i = 0; i < m.dim; ++i) {
            ojson row = ojson::array();
            for (long j = 0; j < m.dim; ++j) {
                std::string s = m.at(i, j).str();
                lines_.push_back("e[" + std::to_string(i) + "][" + std::to_string(j) +
                                 "] = " + s);
                row.push_back(s);
            }
            rows.push_back(row);
        }
        (*cur_)["entries"] = rows;
    }

    std::string text() const {
        std::string out;
        for (auto& l : lines_) out += l + "\n";
        return out;
    }

    // Text to `path` (or stdout when empty), JSON mirror to `path`.json.
    void write(const std::string& path) const {
        if (path.empty()) {
            std::cout << text();
            return;
        }
        std::ofstream t(path, std::ios::binary);
        if (!t) throw std::invalid_argument("cannot open output path: " + path);
        t << text();
        std::ofstream j(path + ".json", std::ios::binary);
        j << root_.dump(2) << "\n";
    }

private:
    std::vector<std::string> lines_;
    ojson root_;
    ojson* cur_;
};

// exit codes per contract
constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kInputError = 2;

struct Opt {
    long p = 5;
    long N = 6;
    long M = -1;
    int threads = 1;
    std::string poly;
    std::string param;
    std::string out;
};

// --poly accepts either inline text or a path to a fixture file.
std::string read_poly_text(const std::string& arg) {
    std::ifstream f(arg);
    if (!f.good()) return arg;
    std::string text, line;
    while (std::getline(f, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        text += line + " ";
    }
    return text;
}

HomoPoly load_poly(const std::string& arg) {
    std::string text = read_poly_text(arg);
    return homogenize_laurent(parse_poly(text));
}

ParamSpec parse_param(const std::string& s, const HomoPoly& f) {
    if (s.empty()) {
        if (f.uses_param())
            throw std::invalid_argument("polynomial has a parameter; pass --param");
        return ParamSpec::absent();
    }
    if (!f.uses_param()) throw std::invalid_argument("polynomial has no parameter");
    if (s.rfind("teich:", 0) == 0) {
        long k = std::stol(s.substr(6));
        return ParamSpec::teich(k);
    }
    Rat q;
    try {
        q = Rat(s);
        q.canonicalize();
    } catch (...) {
        throw std::invalid_argument("bad parameter value: " + s);
    }
    if (q == 0) throw std::invalid_argument("parameter must be nonzero");
    return ParamSpec::exact(q);
}

void check_param_nonzero(const ParamSpec& ps, long p) {
    if (ps.kind == ParamSpec::teichmuller && ps.k % p == 0)
        throw std::invalid_argument("parameter must be nonzero mod p");
}

std::string slope_str(const std::vector<mpq_class>& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += s[i].get_str();
    }
    return out + "}";
}

// ---------------------------------------------------------------- commands

int cmd_splitting(const Opt& o) {
    Report rep("splitting");
    rep.kv("p", o.p);
    rep.kv("target_digits", o.N);
    SplittingSeries S = splitting_coeffs(o.p, o.N, o.M);
    long M_used = S.size() - 1;
    rep.kv("M_used", M_used);

    rep.section("coefficients");
    std::vector<std::string> items;
    for (long n = 0; n <= M_used; ++n) {
        auto [slot, c] = S.collapsed(n);
        items.push_back("pi^" + std::to_string(slot) + " * (" + c.str() + ")");
    }
    rep.list("A", items);

    rep.section("checks");
    bool a0 = S.check_a0_is_one();
    auto bad_h = S.check_homogeneity(M_used);
    auto bad_o = S.check_ord_bound(M_used);
    rep.kv("a0_is_one", a0);
    rep.kv("pi_homogeneous", !bad_h.has_value());
    rep.kv("ord_bound", !bad_o.has_value());
    if (bad_h) rep.kv("first_inhomogeneous_index", *bad_h);
    if (bad_o) rep.kv("first_ord_violation_index", *bad_o);
    bool pass = a0 && !bad_h && !bad_o;
    rep.kv("pass", pass);
    rep.write(o.out);
    return pass ? kOk : kVerifyFail;
}

int cmd_formula3(const Opt& o, const std::string& brange) {
    long b_lo = 1, b_hi = 3;
    auto dots = brange.find("..");
    if (dots == std::string::npos) {
        b_lo = b_hi = std::stol(brange);
    } else {
        b_lo = std::stol(brange.substr(0, dots));
        b_hi = std::stol(brange.substr(dots + 2));
    }
    if (b_lo < 1 || b_hi < b_lo) throw std::invalid_argument("bad --b range");

    Report rep("formula3");
    rep.kv("p", o.p);
    rep.kv("target_digits", o.N);
    rep.kv("b_range", std::to_string(b_lo) + ".." + std::to_string(b_hi));
    bool pass = true;
    for (long b = b_lo; b <= b_hi; ++b) {
        Formula3Result r = verify_formula3(o.p, o.N, b, o.M);
        rep.section("b" + std::to_string(b));
        rep.kv("lhs", r.lhs.str());
        rep.kv("rhs", r.rhs.str());
        rep.kv("residual", r.residual.str());
        long rv = r.residual.is_exact_zero() ? 9999
                  : r.residual.is_zero_to_window() ? r.residual.window()
                                                   : r.residual.val();
        bool ok = rv >= o.N;
        rep.kv("residual_valuation", rv);
        rep.kv("terms_used", r.terms_used);
        rep.kv("pass", ok);
        pass = pass && ok;
    }
    rep.section("summary");
    rep.kv("pass", pass);
    rep.write(o.out);
    return pass ? kOk : kVerifyFail;
}

int cmd_basis(const Opt& o) {
    HomoPoly f = load_poly(o.poly);
    Report rep("basis");
    rep.kv("poly", f.str());
    rep.kv("nv", static_cast<long>(f.vars.size()));
    rep.kv("degree", f.degree);

    std::vector<std::string> items;
    std::vector<std::pair<long, long>> dims;
    long dim = 0;
    if (f.uses_param()) {
        GDEngine<QLField> eng(QLField{}, symbolic_param(f));
        for (auto& e : eng.basis())
            items.push_back("pole " + std::to_string(e.pole) + ": " + mono_str(e.mono, f.vars));
        dims = eng.quotient_dims();
        dim = eng.basis_size();
    } else {
        GDEngine<QField> eng(QField{}, evaluate_param(f, Rat(0)));
        for (auto& e : eng.basis())
            items.push_back("pole " + std::to_string(e.pole) + ": " + mono_str(e.mono, f.vars));
        dims = eng.quotient_dims();
        dim = eng.basis_size();
    }
    rep.kv("dim", dim);
    rep.section("elements");
    rep.list("b", items);
    rep.section("pole_dimensions");
    bool ok = true;
    long nv = static_cast<long>(f.vars.size());
    for (auto& [pole, d] : dims) {
        long want = smooth_quotient_dim(static_cast<int>(nv), f.degree, pole * f.degree - nv);
        rep.kv("pole_" + std::to_string(pole),
               std::to_string(d) + " (smooth value " + std::to_string(want) + ")");
        ok = ok && d == want;
    }
    rep.kv("matches_smooth_dimensions", ok);
    rep.write(o.out);
    return ok ? kOk : kVerifyFail;
}

// Oracle cross-check for plane curves: trace(normalized) = p + 1 - #X(F_p).
struct OracleVerdict {
    std::string status;  // "match", "mismatch", "skipped: ..."
    bool fail = false;
};

OracleVerdict oracle_cross_check(Report& rep, const HomoPoly& f, const ParamSpec& lam,
                                 const FrobeniusResult& R, long p) {
    OracleVerdict v;
    if (f.vars.size() != 3) {
        v.status = "skipped: oracle covers plane curves only";
        return v;
    }
    Rat lam_q;
    if (lam.kind == ParamSpec::teichmuller)
        lam_q = Rat(((lam.k % p) + p) % p);  // Teichmueller lift reduces to k mod p
    else if (lam.kind == ParamSpec::rational)
        lam_q = lam.q;
    MPoly<long> fp;
    try {
        fp = to_fp(evaluate_param(f, lam_q), p);
    } catch (const std::exception&) {
        v.status = "skipped: cannot reduce mod p";
        return v;
    }
    long n1;
    try {
        n1 = count_points(fp, p, 1);
    } catch (const oracle_budget_exceeded&) {
        v.status = "skipped: enumeration budget";
        return v;
    }
    PadicScalar tr = PadicScalar::zero(p);
    for (long i = 0; i < R.normalized.dim; ++i) tr += R.normalized.at(i, i);
    mpz_class a_mat = tr.to_centered_integer();
    long a_count = p + 1 - n1;
    rep.kv("points_f_p", n1);
    rep.kv("trace_from_counts", a_count);
    rep.kv("trace_from_matrix", a_mat);
    if (a_mat == a_count) {
        v.status = "match";
    } else {
        v.status = "mismatch";
        v.fail = true;
    }
    if (R.normalized.dim == 2) {
        long n2 = count_points(fp, p, 2);
        ZetaData z = zeta_genus1(n1, n2, p);  // throws when counts are inconsistent
        rep.kv("points_f_p2", z.n2);
        std::vector<PadicScalar> cp = charpoly(R.normalized);
        bool det_ok = (cp[0] - PadicScalar::from_integer(p, p, 8)).is_zero_to_window() ||
                      (cp[0] - PadicScalar::from_integer(p, p, 8)).is_exact_zero();
        rep.kv("det_equals_p", det_ok);
        if (!det_ok) {
            v.status = "mismatch";
            v.fail = true;
        }
    }
    return v;
}

int cmd_frobenius(const Opt& o) {
    HomoPoly f = load_poly(o.poly);
    ParamSpec lam = parse_param(o.param, f);
    check_param_nonzero(lam, o.p);

    FrobeniusResult R = frobenius_matrix(f, lam, o.p, o.N, o.M, o.threads);
    Report rep("frobenius");
    rep.kv("poly", f.str());
    rep.kv("param", lam.str());
    rep.kv("p", o.p);
    rep.kv("target_digits", o.N);
    rep.kv("M_used", R.M_used);
    rep.kv("dim", static_cast<long>(R.basis.size()));

    std::vector<std::string> bitems;
    for (auto& e : R.basis)
        bitems.push_back("pole " + std::to_string(e.pole) + ": " + mono_str(e.mono, f.vars));
    rep.section("basis");
    rep.list("b", bitems);

    rep.matrix("raw", R.raw);
    rep.matrix("normalized", R.normalized);

    rep.section("char_poly_normalized");
    std::vector<PadicScalar> cp = charpoly(R.normalized);
    std::vector<std::string> citems;
    for (auto& c : cp) citems.push_back(c.str());
    rep.list("ascending", citems);
    std::vector<mpq_class> slopes = newton_slopes(cp);
    rep.kv("newton_slopes", slope_str(slopes));

    rep.section("oracle");
    OracleVerdict v = oracle_cross_check(rep, f, lam, R, o.p);
    rep.kv("status", v.status);
    rep.write(o.out);
    return v.fail ? kVerifyFail : kOk;
}

int cmd_gm(const Opt& o) {
    HomoPoly f = load_poly(o.poly);
    Report rep("gm");
    rep.kv("poly", f.str());
    GDEngine<QLField> eng(QLField{}, symbolic_param(f));
    MPoly<RatFunc> df = symbolic_param(param_partial(f));
    std::vector<RatFunc> th = gm_theta_matrix(eng, df, RatFunc::var());
    long dim = eng.basis_size();
    rep.kv("dim", dim);
    rep.section("theta_matrix");
    for (long i = 0; i < dim; ++i)
        for (long j = 0; j < dim; ++j)
            rep.kv("e[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                   th[static_cast<size_t>(i * dim + j)].str("l"));
    rep.write(o.out);
    return kOk;
}

int cmd_pf(const Opt& o, long max_order, long period_terms, bool period_check) {
    HomoPoly f = load_poly(o.poly);
    Report rep("pf");
    rep.kv("poly", f.str());
    PFOperator L = picard_fuchs(f, max_order);
    rep.kv("order", L.order);
    rep.kv("operator", L.str());

    bool pass = true;
    if (period_check) {
        rep.section("period_check");
        std::vector<mpz_class> series = period_series(period_terms);
        std::vector<mpq_class> res = pf_apply_to_series(L, series);
        bool all_zero = true;
        for (auto& r : res) all_zero = all_zero && r == 0;
        rep.kv("terms", period_terms);
        rep.kv("annihilates_series", all_zero);
        pass = all_zero;
    }
    rep.write(o.out);
    return pass ? kOk : kVerifyFail;
}

int cmd_keylemma(const Opt& o, long amax, long imax, long perturb) {
    Report rep("keylemma");
    rep.kv("p", o.p);
    rep.kv("target_digits", o.N);
    rep.kv("alpha_max", amax);
    rep.kv("i_max", imax);
    if (perturb >= 0) rep.kv("perturbed_coefficient", perturb);
    IntertwineReport r = verify_phi_intertwine(o.p, o.N, o.M, amax, imax, perturb);
    rep.section("checks");
    for (auto& c : r.checks) {
        std::string rv = c.residual_val >= 9999 ? "exact" : std::to_string(c.residual_val);
        rep.kv(c.label, std::string(c.pass ? "pass" : "FAIL") + " (residual valuation " + rv + ")");
    }
    rep.section("summary");
    rep.kv("pass", r.pass);
    rep.write(o.out);
    return r.pass ? kOk : kVerifyFail;
}

int cmd_spectrum(const Opt& o, long imax) {
    Report rep("spectrum");
    rep.kv("i_max", imax);
    bool pass = true;
    rep.section("x_powers");
    for (long i = 0; i <= imax; ++i) {
        mpq_class w = weight_spectrum(WeightKind::x_power, i);
        mpq_class want(-(i + 1), 2);
        want.canonicalize();
        pass = pass && w == want;
        rep.kv("x^" + std::to_string(i), w);
    }
    rep.section("t_powers");
    for (long i = 1; i <= imax; ++i) {
        mpq_class w = weight_spectrum(WeightKind::t_power, i);
        mpq_class want(2 * i - 1, 2);
        want.canonicalize();
        pass = pass && w == want;
        rep.kv("t^" + std::to_string(i), w);
    }
    rep.section("summary");
    rep.kv("matches_closed_forms", pass);
    rep.write(o.out);
    return pass ? kOk : kVerifyFail;
}

int cmd_threefold(const Opt& o) {
    HomoPoly f = load_poly(o.poly);
    ParamSpec lam = parse_param(o.param, f);
    check_param_nonzero(lam, o.p);

    FrobeniusResult R = frobenius_matrix(f, lam, o.p, o.N, o.M, o.threads);
    ThreefoldFrobenius tf = assemble(R.normalized, o.p);

    Report rep("threefold");
    rep.kv("poly", f.str());
    rep.kv("param", lam.str());
    rep.kv("p", o.p);
    rep.kv("target_digits", o.N);
    rep.kv("graded_dim", tf.graded_dim());
    rep.kv("extension_known", tf.extension_known);
    rep.matrix("curve_block_times_p", tf.block);
    rep.section("line");
    rep.kv("eigenvalue", tf.line.str());
    rep.section("slopes");
    rep.kv("newton_slopes", slope_str(newton_slopes(tf)));
    rep.section("scaling_check");
    ScalingReport sc = verify_scaling(tf, R.normalized, o.p);
    rep.kv("pass", sc.pass);
    if (!sc.pass) rep.kv("detail", sc.detail);
    rep.write(o.out);
    return sc.pass ? kOk : kVerifyFail;
}

int cmd_zeta(const Opt& o) {
    HomoPoly f = load_poly(o.poly);
    if (f.uses_param()) throw std::invalid_argument("zeta takes a parameter-free polynomial");
    MPoly<long> fp = to_fp(evaluate_param(f, Rat(0)), o.p);
    Report rep("zeta");
    rep.kv("poly", f.str());
    rep.kv("p", o.p);
    long n1 = count_points(fp, o.p, 1);
    long n2 = count_points(fp, o.p, 2);
    rep.kv("points_f_p", n1);
    rep.kv("points_f_p2", n2);
    if (f.vars.size() == 3 && f.degree == 3) {
        ZetaData z = zeta_genus1(n1, n2, o.p);
        rep.section("genus1");
        rep.kv("a", z.a);
        rep.kv("char_poly", "T^2 - (" + std::to_string(z.a) + ")*T + " + std::to_string(o.p));
    }
    rep.write(o.out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic splitting series, hypersurface Frobenius, and point-count tools"};
    app.require_subcommand(1);

    Opt o;
    std::string brange = "1..3";
    long amax = 5, imax = 3, perturb = -1, spectrum_imax = 50;
    long pf_max_order = 4, period_terms = 20;
    bool no_period_check = false;

    auto add_common = [&](CLI::App* c, bool needs_poly, bool needs_param) {
        c->add_option("--prime,-p", o.p, "odd prime p");
        c->add_option("--prec,-N", o.N, "target precision digits");
        c->add_option("--M", o.M, "series truncation (-1 = auto)");
        c->add_option("--out", o.out, "report path (JSON mirror written alongside)");
        if (needs_poly)
            c->add_option("--poly", o.poly, "polynomial text or fixture file")->required();
        if (needs_param)
            c->add_option("--param", o.param, "parameter value: rational or teich:k");
        c->add_option("--threads", o.threads, "Frobenius column threads");
        return c;
    };

    auto* c_split = add_common(app.add_subcommand("splitting", "splitting-series coefficients and invariants"), false, false);
    (void)c_split;
    auto* c_f3 = add_common(app.add_subcommand("formula3", "factorial-pairing identity residuals"), false, false);
    c_f3->add_option("--b", brange, "b range, e.g. 1..4");
    add_common(app.add_subcommand("basis", "cohomology basis of a smooth hypersurface"), true, false);
    add_common(app.add_subcommand("frobenius", "Frobenius matrix with oracle cross-check"), true, true);
    add_common(app.add_subcommand("gm", "theta-connection matrix over the parameter field"), true, false);
    auto* c_pf = add_common(app.add_subcommand("pf", "minimal theta-operator of the family"), true, false);
    c_pf->add_option("--max-order", pf_max_order, "search order bound");
    c_pf->add_option("--period-terms", period_terms, "series length for the check");
    c_pf->add_flag("--no-period-check", no_period_check, "skip the period-series check");
    auto* c_kl = add_common(app.add_subcommand("keylemma", "rank-one pushforward intertwining check"), false, false);
    c_kl->add_option("--amax", amax, "largest nonnegative source exponent");
    c_kl->add_option("--imax", imax, "largest divided-power source index");
    c_kl->add_option("--perturb", perturb, "corrupt series coefficient n (negative control)");
    auto* c_sp = add_common(app.add_subcommand("spectrum", "weight-operator eigenvalues"), false, false);
    c_sp->add_option("--imax", spectrum_imax, "largest exponent");
    add_common(app.add_subcommand("threefold", "graded Frobenius on the associated threefold"), true, true);
    add_common(app.add_subcommand("zeta", "exhaustive point counts"), true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (o.p < 3 || o.p % 2 == 0) throw std::invalid_argument("p must be an odd prime");
        if (o.N < 1) throw std::invalid_argument("precision must be >= 1");
        if (app.got_subcommand("splitting")) return cmd_splitting(o);
        if (app.got_subcommand("formula3")) return cmd_formula3(o, brange);
        if (app.got_subcommand("basis")) return cmd_basis(o);
        if (app.got_subcommand("frobenius")) return cmd_frobenius(o);
        if (app.got_subcommand("gm")) return cmd_gm(o);
        if (app.got_subcommand("pf")) return cmd_pf(o, pf_max_order, period_terms, !no_period_check);
        if (app.got_subcommand("keylemma")) return cmd_keylemma(o, amax, imax, perturb);
        if (app.got_subcommand("spectrum")) return cmd_spectrum(o, spectrum_imax);
        if (app.got_subcommand("threefold")) return cmd_threefold(o);
        if (app.got_subcommand("zeta")) return cmd_zeta(o);
        return kInputError;
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const bad_reduction& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const coefficient_not_teichmueller& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const oracle_budget_exceeded& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        // verification machinery could not certify the request
        std::cerr << "verification failure: " << e.what() << "\n";
        return kVerifyFail;
    }
}
