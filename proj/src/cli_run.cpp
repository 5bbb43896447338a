#include "qchab/cli_run.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <sstream>

#include "qchab/chabauty.hpp"
#include "qchab/coleman.hpp"
#include "qchab/liegrade.hpp"
#include "qchab/report.hpp"

namespace qchab {

namespace {

struct MissingMetadata : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConsistencyFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> load_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) throw DomainError("config file not readable: " + path);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) throw DomainError("config line without '=': " + line);
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

class Inputs {
public:
    std::map<std::string, std::string> flags, config;
    bool has(const std::string& k) const { return flags.count(k) || config.count(k); }
    std::string get(const std::string& k) const {
        auto it = flags.find(k);
        if (it != flags.end()) return it->second;
        auto jt = config.find(k);
        if (jt != config.end()) return jt->second;
        throw DomainError("missing required input: " + k);
    }
    std::string get_or(const std::string& k, const std::string& dflt) const {
        return has(k) ? get(k) : dflt;
    }
};

BigInt parse_int(const std::string& s) {
    try {
        return BigInt(trim(s));
    } catch (...) {
        throw DomainError("not an integer: " + s);
    }
}

BigRat parse_rat(const std::string& s) {
    std::string t = trim(s);
    size_t slash = t.find('/');
    try {
        if (slash == std::string::npos) return BigRat(BigInt(t));
        return BigRat(BigInt(t.substr(0, slash)), BigInt(t.substr(slash + 1)));
    } catch (...) {
        throw DomainError("not a rational: " + s);
    }
}

std::pair<BigRat, BigRat> parse_point(const std::string& s) {
    size_t comma = s.find(',');
    if (comma == std::string::npos) throw DomainError("point must be x,y: " + s);
    return {parse_rat(s.substr(0, comma)), parse_rat(s.substr(comma + 1))};
}

std::vector<ExactPoint> parse_points(const std::string& s) {
    std::vector<ExactPoint> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        auto [x, y] = parse_point(item);
        out.push_back(ExactPoint::make(x, y));
    }
    return out;
}

WeierstrassCurve curve_from(const Inputs& in) {
    BigInt a4 = parse_int(in.get("a4"));
    BigInt a6 = parse_int(in.get("a6"));
    long p = (long)parse_int(in.get("p"));
    long N = (long)parse_int(in.get_or("prec", "12"));
    return WeierstrassCurve(a4, a6, p, N);
}

void require_hypotheses(const Inputs& in) {
    if (!in.has("rank") || !in.has("sha_p_trivial"))
        throw MissingMetadata(
            "hypothesis metadata missing: declare rank and sha_p_trivial (config or flags)");
}

std::string fmt_val(const PadicNumber& v, long N) { return v.with_abs_prec(N).str(); }

int do_frobenius(const Inputs& in, bool records, std::ostream& os) {
    WeierstrassCurve E = curve_from(in);
    long N = E.precision();
    FrobeniusData fd = frobenius_matrix(E, N);
    long ap = point_count_ap(E);
    long loss = std::max(0L, N - fd.achieved_prec);
    if (records) {
        Record r;
        r.add("command", "frobenius");
        r.add("a4", E.a4().str());
        r.add("a6", E.a6().str());
        r.add("p", std::to_string(E.prime()));
        r.add("prec", std::to_string(N));
        r.add("F11", fmt_val(fd.F.at(0, 0), N));
        r.add("F21", fmt_val(fd.F.at(1, 0), N));
        r.add("F12", fmt_val(fd.F.at(0, 1), N));
        r.add("F22", fmt_val(fd.F.at(1, 1), N));
        r.add("trace", fmt_val(fd.F.trace(), N));
        r.add("det", fmt_val(fd.F.det2(), N));
        r.add("ap", std::to_string(ap));
        r.add("achieved", std::to_string(std::min(fd.achieved_prec, N)));
        r.add("loss", std::to_string(loss));
        os << print_records({r});
        return 0;
    }
    os << "curve: y^2 = x^3 + (" << E.a4() << ")x + (" << E.a6() << "), p = " << E.prime()
       << ", N = " << N << "\n";
    os << "F (columns = images of alpha, beta):\n";
    os << "  F11 = " << fmt_val(fd.F.at(0, 0), N) << "\n";
    os << "  F21 = " << fmt_val(fd.F.at(1, 0), N) << "\n";
    os << "  F12 = " << fmt_val(fd.F.at(0, 1), N) << "\n";
    os << "  F22 = " << fmt_val(fd.F.at(1, 1), N) << "\n";
    os << "det(F) = " << fmt_val(fd.F.det2(), N) << "\n";
    os << "achieved precision: " << std::min(fd.achieved_prec, N) << " digits (loss " << loss
       << ")\n";
    os << "trace(F) = " << fmt_val(fd.F.trace(), N) << ", a_p = " << ap
       << " (verified by point count)\n";
    return 0;
}

CurvePoint to_point(const WeierstrassCurve& E, const Inputs& in, const std::string& key) {
    auto [x, y] = parse_point(in.get(key));
    ExactPoint q = ExactPoint::make(x, y);
    if (!on_curve_exact(E, q)) throw DomainError("point is not on the curve: " + in.get(key));
    return CurvePoint::from_exact(E, q, E.precision() + 14);
}

int do_integrate(const Inputs& in, bool records, bool want_d2, std::ostream& os) {
    WeierstrassCurve E = curve_from(in);
    long N = E.precision();
    ColemanEngine eng(E, want_d2);
    CurvePoint z = to_point(E, in, "to");
    IteratedValue v = eng.global(z);
    long achieved = std::min(v.achieved_prec, N);
    if (records) {
        Record r;
        r.add("command", want_d2 ? "d2" : "integrate");
        r.add("a4", E.a4().str());
        r.add("a6", E.a6().str());
        r.add("p", std::to_string(E.prime()));
        r.add("prec", std::to_string(N));
        r.add("to", in.get("to"));
        if (want_d2) {
            r.add("D2", fmt_val(v.D2, N));
        } else {
            r.add("log_alpha", fmt_val(v.log_alpha, N));
            r.add("log_beta", fmt_val(v.log_beta, N));
        }
        r.add("achieved", std::to_string(achieved));
        r.add("loss", std::to_string(std::max(0L, N - achieved)));
        os << print_records({r});
        return 0;
    }
    os << "basepoint: " << v.basepoint << "\n";
    if (want_d2) {
        os << "D2 = " << fmt_val(v.D2, N) << "\n";
    } else {
        os << "log_alpha = " << fmt_val(v.log_alpha, N) << "\n";
        os << "log_beta  = " << fmt_val(v.log_beta, N) << "\n";
    }
    os << "achieved precision: " << achieved << " digits\n";
    return 0;
}

int do_check_corollary(const Inputs& in, bool records, std::ostream& os) {
    require_hypotheses(in);
    WeierstrassCurve E = curve_from(in);
    long N = E.precision();
    std::vector<ExactPoint> pts = parse_points(in.get("points"));
    if (pts.size() < 2) throw DomainError("check-corollary needs at least two points");
    for (auto& q : pts)
        if (!on_curve_exact(E, q))
            throw DomainError("point not on curve (exact check failed)");
    ColemanEngine eng(E, true);
    long delta = 3 + eng.total_solve_loss();
    long threshold = N - delta;
    std::vector<Record> rs;
    bool ok = true;
    if (!records)
        os << "pairwise residuals (threshold: valuation >= " << threshold << ", rank="
           << in.get("rank") << ", sha_p_trivial=" << in.get("sha_p_trivial") << ")\n";
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            CurvePoint y = CurvePoint::from_exact(E, pts[i], N + 14);
            CurvePoint z = CurvePoint::from_exact(E, pts[j], N + 14);
            PadicNumber r = corollary_residual(eng, y, z);
            long val = r.is_zero() ? r.abs_prec() : r.valuation();
            bool pass = val >= threshold;
            ok = ok && pass;
            if (records) {
                Record rec;
                rec.add("command", "check-corollary");
                rec.add("p", std::to_string(E.prime()));
                rec.add("prec", std::to_string(N));
                rec.add("y", "(" + pts[i].x.str() + "," + pts[i].y.str() + ")");
                rec.add("z", "(" + pts[j].x.str() + "," + pts[j].y.str() + ")");
                rec.add("residual_valuation", std::to_string(std::min(val, N)));
                rec.add("threshold", std::to_string(threshold));
                rec.add("pass", pass ? "yes" : "no");
                rs.push_back(std::move(rec));
            } else {
                os << "(" << pts[i].x << "," << pts[i].y << ") vs (" << pts[j].x << ","
                   << pts[j].y << "): valuation " << std::min(val, N) << (pass ? " ok" : " FAIL")
                   << "\n";
            }
        }
    }
    if (records) os << print_records(rs);
    if (!ok) throw ConsistencyFailure("corollary residual above threshold");
    return 0;
}

int do_qc_locate(const Inputs& in, bool records, std::ostream& os) {
    require_hypotheses(in);
    if (!in.has("known"))
        throw MissingMetadata("qc-locate requires a known integral point (--known x,y)");
    WeierstrassCurve E = curve_from(in);
    long N = E.precision();
    auto [kx, ky] = parse_point(in.get("known"));
    ExactPoint kq = ExactPoint::make(kx, ky);
    if (denominator(kx) != 1 || denominator(ky) != 1)
        throw DomainError("known point must be integral");
    if (!on_curve_exact(E, kq)) throw DomainError("known point not on curve");
    ColemanEngine eng(E, true);
    QCInstance inst(E, CurvePoint::from_exact(E, kq, N + 14), in.get("rank"),
                    in.get("sha_p_trivial"));
    LocateOptions opt;
    opt.cross_check = {kq, ExactPoint::make(kq.x, -kq.y)};
    auto cands = qc_locate(eng, inst, opt);
    bool known_found = false;
    std::vector<Record> rs;
    for (auto& cp : cands) {
        if (cp.matches_known) known_found = true;
        if (records) {
            Record r;
            r.add("command", "qc-locate");
            r.add("p", std::to_string(E.prime()));
            r.add("prec", std::to_string(N));
            r.add("disk",
                  cp.disk.kind == DiskKind::TwoTorsion
                      ? "(" + std::to_string(cp.disk.xbar) + ",0;two-torsion)"
                      : "(" + std::to_string(cp.disk.xbar) + "," + std::to_string(cp.disk.ybar) +
                            ")");
            r.add("t", fmt_val(cp.t_star, N));
            r.add("x", fmt_val(cp.x, N));
            r.add("y", fmt_val(cp.y, N));
            r.add("matches_known", cp.matches_known ? "yes" : "no");
            r.add("multiple_root", cp.multiple_root ? "yes" : "no");
            r.add("root_prec", std::to_string(std::min(cp.root_prec, N)));
            rs.push_back(std::move(r));
        }
    }
    if (records) {
        os << print_records(rs);
    } else {
        os << "rank=" << in.get("rank") << ", sha_p_trivial=" << in.get("sha_p_trivial")
           << " (declared, not verified)\n";
        os << "candidates: " << cands.size() << "\n";
        for (auto& cp : cands) {
            os << "  disk(" << cp.disk.xbar << "," << cp.disk.ybar << ","
               << (cp.disk.kind == DiskKind::TwoTorsion ? "tt" : "gen") << ") t = "
               << fmt_val(cp.t_star, N) << "  x = " << fmt_val(cp.x, N) << "  y = "
               << fmt_val(cp.y, N) << (cp.matches_known ? "  [known]" : "")
               << (cp.multiple_root ? "  [multiple]" : "") << "\n";
        }
    }
    if (!known_found) throw ConsistencyFailure("known integral point not recovered by the scan");
    return 0;
}

int do_liedim(const Inputs& in, bool records, std::ostream& os) {
    std::string kind = in.get_or("kind", "surface");
    long n = (long)parse_int(in.get("n"));
    GradedDimTable t;
    if (kind == "free") {
        t = graded_dims(LieKind::Free, (long)parse_int(in.get("k")), n);
    } else if (kind == "surface") {
        t = graded_dims(LieKind::Surface, (long)parse_int(in.get("g")), n);
    } else {
        throw DomainError("kind must be free or surface");
    }
    if (!verify_generating_identity(t)) throw ConsistencyFailure("generating identity failed");
    if (records) {
        std::vector<Record> rs;
        for (size_t i = 0; i < t.dims.size(); ++i) {
            Record r;
            r.add("command", "liedim");
            r.add("kind", kind);
            r.add(kind == "free" ? "k" : "g", std::to_string(t.param));
            r.add("i", std::to_string(i + 1));
            r.add("b", t.dims[i].str());
            rs.push_back(std::move(r));
        }
        os << print_records(rs);
        return 0;
    }
    for (size_t i = 0; i < t.dims.size(); ++i) os << (i + 1) << " " << t.dims[i] << "\n";
    os << "b = [";
    for (size_t i = 0; i < t.dims.size(); ++i) os << (i ? "," : "") << t.dims[i];
    os << "]\n";
    return 0;
}

int do_crossover(const Inputs& in, bool records, std::ostream& os) {
    long g = (long)parse_int(in.get("g"));
    BigRat c2 = parse_rat(in.get_or("c2", "0"));
    BoundReport rep = crossover_report(g, c2);
    long formula = crossover_by_formula(g, c2);
    if (rep.crossover != formula)
        throw ConsistencyFailure("crossover scan and closed form disagree");
    if (records) {
        Record r;
        r.add("command", "crossover");
        r.add("g", std::to_string(g));
        r.add("c2", in.get_or("c2", "0"));
        r.add("n_star", std::to_string(rep.crossover));
        r.add("selmer_upper_at_n_star", selmer_upper(g, rep.crossover, c2).str());
        r.add("dr_lower_at_n_star", dr_lower(g, rep.crossover).str());
        std::ostringstream mb;
        for (size_t i = 0; i < rep.metabelian.size(); ++i)
            mb << (i ? "," : "") << rep.metabelian[i];
        r.add("metabelian_counts_from_i2", mb.str());
        os << print_records({r});
        return 0;
    }
    os << "g = " << g << ", C2 = " << c2 << "\n";
    os << "crossover n* = " << rep.crossover << " (closed form: " << formula << ")\n";
    os << "selmer_upper(n*) = " << selmer_upper(g, rep.crossover, c2) << " < dr_lower(n*) = "
       << dr_lower(g, rep.crossover) << "\n";
    os << "exact metabelian counts (i = 2..):";
    for (auto& m : rep.metabelian) os << " " << m;
    os << "\n";
    return 0;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
    CLI::App app{"p-adic iterated Coleman integrals and quadratic Chabauty on E minus e"};
    app.require_subcommand(1);
    std::map<std::string, std::string> flagvals;
    std::string config_path;

    auto add_common = [&](CLI::App* sub, const std::vector<std::string>& keys) {
        sub->add_option("--config", config_path, "line-oriented key = value file");
        sub->add_option("--format", flagvals["format"], "text|records");
        for (const auto& k : keys)
            sub->add_option("--" + k, flagvals[k]);
    };

    CLI::App* frob = app.add_subcommand("frobenius", "Frobenius matrix on (alpha, beta)");
    add_common(frob, {"a4", "a6", "p", "prec"});
    CLI::App* integ = app.add_subcommand("integrate", "single Coleman integrals to a point");
    add_common(integ, {"a4", "a6", "p", "prec", "to"});
    CLI::App* d2 = app.add_subcommand("d2", "iterated integral D2 to a point");
    add_common(d2, {"a4", "a6", "p", "prec", "to"});
    CLI::App* chk = app.add_subcommand("check-corollary", "pairwise quadratic constraint residuals");
    add_common(chk, {"a4", "a6", "p", "prec", "points", "rank", "sha_p_trivial"});
    CLI::App* loc = app.add_subcommand("qc-locate", "locate integral-point candidates per disk");
    add_common(loc, {"a4", "a6", "p", "prec", "known", "rank", "sha_p_trivial"});
    CLI::App* lie = app.add_subcommand("liedim", "graded Lie dimensions");
    add_common(lie, {"kind", "k", "g", "n"});
    CLI::App* cross = app.add_subcommand("crossover", "bound crossover report");
    add_common(cross, {"g", "c2"});

    std::vector<std::string> rev(args.rbegin(), args.rend());
    CliResult res;
    std::ostringstream os;
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream err;
        err << e.what() << "\n";
        return {2, err.str()};
    }
    try {
        Inputs in;
        if (!config_path.empty()) in.config = load_config(config_path);
        for (auto& [k, v] : flagvals)
            if (!v.empty()) in.flags[k] = v;
        bool records = in.get_or("format", "text") == "records";
        int code = 0;
        if (frob->parsed()) code = do_frobenius(in, records, os);
        else if (integ->parsed()) code = do_integrate(in, records, false, os);
        else if (d2->parsed()) code = do_integrate(in, records, true, os);
        else if (chk->parsed()) code = do_check_corollary(in, records, os);
        else if (loc->parsed()) code = do_qc_locate(in, records, os);
        else if (lie->parsed()) code = do_liedim(in, records, os);
        else if (cross->parsed()) code = do_crossover(in, records, os);
        res.exit_code = code;
    } catch (const MissingMetadata& e) {
        os << "error: " << e.what() << "\n";
        res.exit_code = 4;
    } catch (const ConsistencyFailure& e) {
        os << "error: " << e.what() << "\n";
        res.exit_code = 5;
    } catch (const PrecisionExhausted& e) {
        os << "error: " << e.what() << "\n";
        res.exit_code = 3;
    } catch (const SingularToPrecision& e) {
        os << "error: " << e.what() << "\n";
        res.exit_code = 3;
    } catch (const DomainError& e) {
        os << "error: " << e.what() << "\n";
        res.exit_code = 2;
    }
    res.output = os.str();
    return res;
}

}  // namespace qchab
