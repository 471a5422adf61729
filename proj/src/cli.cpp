#include "dinv/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dinv/catalog.hpp"
#include "dinv/report.hpp"
#include "dinv/specdoc.hpp"

namespace dinv {

namespace {

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Point parse_point(const std::string& text) {
    std::vector<double> vals;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        size_t used = 0;
        double v = std::stod(tok, &used);
        vals.push_back(v);
    }
    Point p(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) p[i] = vals[i];
    return p;
}

std::vector<int> parse_tuple(const std::string& text) {
    if (text.empty() || text == "()") return {};
    std::vector<int> parts;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) parts.push_back(std::stoi(tok));
    return parts;
}

std::vector<Point> grid_points(const Box& box, int per_axis) {
    const int n = box.dim();
    std::vector<std::vector<double>> axes(n);
    for (int d = 0; d < n; ++d) {
        double lo = box.axes[d][0], hi = box.axes[d][1];
        double m = 0.05 * (hi - lo);  // keep FD stencils interior
        lo += m;
        hi -= m;
        for (int i = 0; i < per_axis; ++i)
            axes[d].push_back(per_axis == 1 ? 0.5 * (lo + hi)
                                            : lo + i * (hi - lo) / (per_axis - 1));
    }
    std::vector<Point> pts;
    std::vector<int> ix(n, 0);
    for (;;) {
        Point p(n);
        for (int d = 0; d < n; ++d) p[d] = axes[d][ix[d]];
        pts.push_back(p);
        int d = n - 1;
        while (d >= 0 && ++ix[d] == per_axis) ix[d--] = 0;
        if (d < 0) break;
    }
    return pts;
}

struct Session {
    std::string name;
    std::uint64_t seed = 0;
    int restarts = 32;
    bool no_timestamp = false;
    std::vector<ReportRecord> records;
    bool any_failed = false;

    OptimizerOptions opts() const {
        OptimizerOptions o;
        o.seed = seed;
        o.restarts = restarts;
        return o;
    }

    ReportRecord& add(const std::string& check) {
        ReportRecord r;
        r.check = check;
        r.name = name;
        r.seed = seed;
        r.restarts = restarts;
        if (!no_timestamp) r.timestamp = iso_timestamp();
        records.push_back(std::move(r));
        return records.back();
    }

    void finish(ReportRecord& r) {
        if (!r.passed) any_failed = true;
    }
};

std::vector<double> to_vec(const Point& p) {
    return std::vector<double>(p.data(), p.data() + p.size());
}

void emit(const Session& s, const std::string& format, const std::string& outfile,
          std::ostream& out) {
    std::string text = format == "csv" ? reports_to_csv(s.records) : reports_to_json(s.records);
    if (outfile.empty()) {
        out << text;
    } else {
        std::ofstream f(outfile);
        if (!f) throw std::runtime_error("cannot open output file '" + outfile + "'");
        f << text;
    }
}

struct Options {
    std::string spec, catalog;
    std::string point_str, tuple_str;
    bool all_tuples = false;
    int grid = 4;
    double tol = 1e-6;
    std::string case_name = "L1";
    double h2 = -1.0;
    double max_ktilde = 0.0;
    int restarts = 32;
    int max_iters = 400;
    double opt_tol = 1e-12;
    std::uint64_t seed = 20240915;
    bool no_timestamp = false;
    std::string format = "json";
    std::string outfile;
    std::string report_in;
    int n = 0;
    bool asymptotic = false;
    std::string which;  // check subcommand selector / catalog action
};

ManifoldRecord load_record(const Options& o) {
    if (!o.spec.empty() && !o.catalog.empty())
        throw std::invalid_argument("use either --spec or --catalog, not both");
    if (!o.spec.empty()) return load_spec(o.spec).record;
    if (!o.catalog.empty()) return resolve_catalog(o.catalog);
    throw std::invalid_argument("one of --spec or --catalog is required");
}

std::vector<TupleSpec> tuples_for(const Options& o, int n) {
    if (o.all_tuples) return enumerate_tuples(n);
    TupleSpec t{n, parse_tuple(o.tuple_str)};
    if (!t.valid()) throw std::invalid_argument("tuple " + t.to_string() + " is not in S(n)");
    return {t};
}

double point_data_h2(const ManifoldRecord& rec) {
    if (rec.point_h.empty())
        throw std::invalid_argument("point-data record has no 'h' array; H^2 unavailable");
    const int n = rec.point_curvature->dim();
    double h2 = 0.0;
    for (const auto& hr : rec.point_h) {
        double tr = hr.trace() / n;
        h2 += tr * tr;
    }
    return h2;
}

// ---------------------------------------------------------------------------

void cmd_compute(const Options& o, Session& s) {
    ManifoldRecord rec = load_record(o);
    s.name = rec.name;

    if (rec.kind == RecordKind::Warped) {
        Point p = parse_point(o.point_str);
        double lap = laplacian_of_warping(*rec.warped, p);
        double f = rec.warped->warping.eval(p, rec.warped->base.params());
        ReportRecord& r = s.add("compute.laplacian");
        r.point = to_vec(p);
        r.lhs = lap;
        r.rhs = lap / f;  // Delta f / f
        return;
    }

    CurvatureTensor R;
    std::optional<double> H2;
    Point p;
    if (rec.kind == RecordKind::PointData) {
        R = *rec.point_curvature;
        if (!rec.point_h.empty()) H2 = point_data_h2(rec);
        p = Point(0);
    } else {
        p = parse_point(o.point_str);
        if (rec.kind == RecordKind::Immersion) {
            if (p.size() != rec.immersion->dim())
                throw std::invalid_argument("--point dimension mismatch");
            SecondFundamentalForm sff = second_fundamental_form(*rec.immersion, p);
            R = curvature_via_gauss(sff, rec.ambient_c);
            H2 = mean_curvature(sff).H2;
        } else {
            if (p.size() != rec.metric->dim())
                throw std::invalid_argument("--point dimension mismatch");
            R = riemann_from_metric(*rec.metric, p);
        }
    }

    if (H2) {
        ReportRecord& r = s.add("compute.H2");
        r.point = to_vec(p);
        r.lhs = *H2;
        r.rhs = *H2;
    }
    {
        ReportRecord& r = s.add("compute.tau");
        r.point = to_vec(p);
        r.lhs = scalar_tau(R);
        r.rhs = r.lhs;
    }
    for (const TupleSpec& t : tuples_for(o, R.dim())) {
        DeltaResult d = delta_invariant(R, t, s.opts());
        ReportRecord& r = s.add("compute.delta");
        r.point = to_vec(p);
        r.tuple = t.parts;
        r.lhs = d.delta;
        r.rhs = d.normalized;
        r.certified = d.certified;
    }
}

void cmd_check_chen(const Options& o, Session& s) {
    ManifoldRecord rec = load_record(o);
    s.name = rec.name;

    if (rec.kind == RecordKind::PointData) {
        CurvatureTensor R = *rec.point_curvature;
        double H2 = point_data_h2(rec);
        for (const TupleSpec& t : tuples_for(o, R.dim())) {
            DeltaResult d = delta_invariant(R, t, s.opts());
            CheckReport c = chen_inequality_check(d, H2, t, rec.ambient_c, o.tol);
            ReportRecord& r = s.add("chen");
            r.tuple = t.parts;
            r.lhs = c.lhs;
            r.rhs = c.rhs;
            r.margin = c.margin;
            r.tolerance = c.tol;
            r.passed = c.passed;
            r.certified = d.certified;
            s.finish(r);
        }
        return;
    }
    if (rec.kind != RecordKind::Immersion)
        throw std::invalid_argument("check chen: record must be an immersion or point-data");

    const ImmersionField& f = *rec.immersion;
    for (const Point& p : grid_points(f.domain(), o.grid)) {
        SecondFundamentalForm sff = second_fundamental_form(f, p);
        double H2 = mean_curvature(sff).H2;
        CurvatureTensor R = curvature_via_gauss(sff, rec.ambient_c);
        for (const TupleSpec& t : tuples_for(o, f.dim())) {
            DeltaResult d = delta_invariant(R, t, s.opts());
            CheckReport c = chen_inequality_check(d, H2, t, rec.ambient_c, o.tol);
            ReportRecord& r = s.add("chen");
            r.point = to_vec(p);
            r.tuple = t.parts;
            r.lhs = c.lhs;
            r.rhs = c.rhs;
            r.margin = c.margin;
            r.tolerance = c.tol;
            r.passed = c.passed;
            r.certified = d.certified;
            s.finish(r);
        }
    }
}

LagrangianCase case_from_name(const std::string& name) {
    if (name == "L1") return LagrangianCase::L1;
    if (name == "L2") return LagrangianCase::L2;
    if (name == "L3") return LagrangianCase::L3;
    throw std::invalid_argument("--case must be L1, L2 or L3");
}

void cmd_check_lagrangian(const Options& o, Session& s) {
    ManifoldRecord rec = load_record(o);
    s.name = rec.name;
    if (rec.kind != RecordKind::Immersion)
        throw std::invalid_argument("check lagrangian: record must be an immersion");
    const ImmersionField& f = *rec.immersion;
    if (f.ambient_dim() != 2 * f.dim())
        throw std::invalid_argument("check lagrangian: ambient dimension must be 2n");

    const LagrangianCase which = case_from_name(o.case_name);
    const int n = f.dim();
    std::vector<TupleSpec> tuples;
    for (const TupleSpec& t : tuples_for(o, n)) {
        if (which == LagrangianCase::L2 && t.sum() >= n) continue;
        if (which == LagrangianCase::L3 && t.sum() != n) continue;
        tuples.push_back(t);
    }

    std::map<TupleSpec, std::vector<std::pair<double, double>>, TupleLess> min_data;
    for (const Point& p : grid_points(f.domain(), o.grid)) {
        double residual = lagrangian_check(f, p);
        {
            ReportRecord& r = s.add("lagrangian.residual");
            r.point = to_vec(p);
            r.lhs = residual;
            r.rhs = 1e-8;
            r.margin = r.rhs - r.lhs;
            r.passed = r.margin >= 0.0;
            s.finish(r);
        }
        SecondFundamentalForm sff = second_fundamental_form(f, p);
        double H2 = mean_curvature(sff).H2;
        CurvatureTensor R = curvature_via_gauss(sff, rec.ambient_c);
        for (const TupleSpec& t : tuples) {
            DeltaResult d = delta_invariant(R, t, s.opts());
            CheckReport c = lagrangian_inequality_check(d, H2, t, rec.ambient_c, which, o.tol);
            ReportRecord& r = s.add(c.check);
            r.point = to_vec(p);
            r.tuple = t.parts;
            r.lhs = c.lhs;
            r.rhs = c.rhs;
            r.margin = c.margin;
            r.tolerance = c.tol;
            r.passed = c.passed;
            r.certified = d.certified;
            s.finish(r);
            if (!t.empty()) min_data[t].emplace_back(d.delta, H2);
        }
    }
    // Thm-level minimality screen: equality of the base inequality with
    // nonzero mean curvature must never occur
    for (const auto& [t, data] : min_data) {
        MinimalityReport m = minimality_flags(data, n, t, rec.ambient_c);
        ReportRecord& r = s.add("lagrangian.minimality");
        r.tuple = t.parts;
        r.lhs = static_cast<double>(m.flagged.size());
        r.rhs = 0.0;
        r.margin = -r.lhs;
        r.passed = m.passed;
        s.finish(r);
    }
}

void cmd_check_warped(const Options& o, Session& s) {
    ManifoldRecord rec = load_record(o);
    s.name = rec.name;
    if (rec.kind != RecordKind::Warped)
        throw std::invalid_argument("check warped: record must be a warped product");
    const WarpedSpec& w = *rec.warped;

    double H2 = o.h2 >= 0.0 ? o.h2 : rec.h2.value_or(-1.0);
    if (H2 < 0.0)
        throw std::invalid_argument("check warped: supply --h2 (record carries no known H^2)");

    std::vector<Point> pts = grid_points(w.base.domain(), o.grid);
    for (const Point& p : pts) {
        WarpedCheckReport c = warped_inequality_check(w, H2, o.max_ktilde, p, o.tol);
        ReportRecord& r = s.add("warped");
        r.point = to_vec(p);
        r.lhs = c.lhs;
        r.rhs = c.rhs;
        r.margin = c.margin;
        r.tolerance = c.tol;
        r.passed = c.passed;
        s.finish(r);
    }
    WarpedFlags flags = warped_obstruction_flags(w, pts);
    ReportRecord& r = s.add("warped.flags");
    r.lhs = flags.harmonic ? 1.0 : 0.0;
    r.rhs = flags.eigenfunction ? flags.lambda : 0.0;
}

void cmd_check_spectral(const Options& o, Session& s) {
    ManifoldRecord rec = load_record(o);
    s.name = rec.name;
    if (!rec.lambda1) throw std::invalid_argument("check spectral: record has no lambda1");

    CurvatureTensor R;
    if (rec.kind == RecordKind::Immersion && rec.immersion) {
        R = curvature_via_gauss(
            second_fundamental_form(*rec.immersion, rec.immersion->domain().center()),
            rec.ambient_c);
    } else if (rec.metric) {
        R = riemann_from_metric(*rec.metric, rec.metric->domain().center());
    } else if (rec.point_curvature) {
        R = *rec.point_curvature;
    } else {
        throw std::invalid_argument("check spectral: record has no geometry");
    }

    DeltaMap results = delta_all(R, s.opts());
    SpectralReport rep = spectral_bound_check(rec, results, o.tol);
    for (const auto& [t, margin] : rep.margins) {
        ReportRecord& r = s.add("spectral.bound");
        r.tuple = t.parts;
        r.lhs = *rec.lambda1;
        r.rhs = *rec.lambda1 - margin;  // n * Delta(t)
        r.margin = margin;
        r.tolerance = o.tol;
        r.passed = margin >= -o.tol;
        s.finish(r);
    }
    auto [dhat, arg] = delta_hat0(results, R.dim());
    BestLivingReport bl = best_living_test(rec, dhat, o.tol);
    ReportRecord& r = s.add(bl.is_best ? "spectral.best_living:true" : "spectral.best_living:false");
    r.tuple = arg.parts;
    r.lhs = bl.lambda1;
    r.rhs = bl.n_dhat0;
}

void cmd_check_ideality(const Options& o, Session& s) {
    ManifoldRecord rec = load_record(o);
    s.name = rec.name;
    if (rec.kind != RecordKind::Immersion)
        throw std::invalid_argument("check ideality: record must be an immersion");
    IdealityReport rep =
        ideality_check(*rec.immersion, grid_points(rec.immersion->domain(), o.grid), s.opts(),
                       o.tol);
    for (const IdealityPoint& ip : rep.points) {
        ReportRecord& r = s.add("ideality");
        r.point = to_vec(ip.p);
        r.tuple = ip.argmax.parts;
        r.lhs = ip.H2;
        r.rhs = ip.dhat0;
        r.margin = -ip.gap;
        r.tolerance = rep.tol;
        r.passed = ip.gap <= rep.tol;
        s.finish(r);
    }
}

void cmd_check_obstruction(const Options& o, Session& s) {
    ManifoldRecord rec = load_record(o);
    s.name = rec.name;

    std::vector<CurvatureTensor> tensors;
    if (rec.kind == RecordKind::Immersion) {
        for (const Point& p : grid_points(rec.immersion->domain(), o.grid))
            tensors.push_back(
                curvature_via_gauss(second_fundamental_form(*rec.immersion, p), rec.ambient_c));
    } else if (rec.kind == RecordKind::Metric) {
        for (const Point& p : grid_points(rec.metric->domain(), o.grid))
            tensors.push_back(riemann_from_metric(*rec.metric, p));
    } else if (rec.kind == RecordKind::PointData) {
        tensors.push_back(*rec.point_curvature);
    } else {
        throw std::invalid_argument("check obstruction: unsupported record kind");
    }

    ObstructionReport rep = minimal_obstruction(tensors, s.opts());
    {
        ReportRecord& r = s.add(rep.delta_fires ? "obstruction.minimal.delta:fires"
                                                : "obstruction.minimal.delta:not-detected");
        r.lhs = rep.max_delta;
        r.tuple = rep.delta_witness.parts;
    }
    {
        ReportRecord& r = s.add(rep.ricci_fires ? "obstruction.minimal.ricci:fires"
                                                : "obstruction.minimal.ricci:not-detected");
        r.lhs = rep.max_ric;
    }
    LagrangianObstructionReport lrep =
        lagrangian_obstruction(tensors, rec.b1_zero, rec.finite_pi1, s.opts());
    const char* verdict = lrep.verdict == ObstructionVerdict::Fires        ? "fires"
                          : lrep.verdict == ObstructionVerdict::NotFired   ? "not-fired"
                                                                           : "inconclusive";
    ReportRecord& r = s.add(std::string("obstruction.lagrangian:") + verdict);
    r.lhs = lrep.max_delta;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"delta-invariant toolkit"};
    app.require_subcommand(1);

    Options o;
    if (const char* env = std::getenv("DINV_SEED")) o.seed = std::strtoull(env, nullptr, 10);

    auto add_common = [&](CLI::App* cmd, bool with_record) {
        cmd->add_option("--seed", o.seed, "master seed (overrides DINV_SEED)");
        cmd->add_option("--restarts", o.restarts, "optimizer restarts");
        cmd->add_option("--max-iters", o.max_iters, "optimizer sweep cap");
        cmd->add_option("--tol", o.tol, "check tolerance");
        cmd->add_flag("--no-timestamp", o.no_timestamp, "omit timestamps from reports");
        cmd->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", o.outfile, "write the report to a file");
        if (with_record) {
            auto* spec = cmd->add_option("--spec", o.spec, "spec file (JSON)");
            auto* cat = cmd->add_option("--catalog", o.catalog, "catalog entry name");
            spec->excludes(cat);
        }
    };

    CLI::App* partitions = app.add_subcommand("partitions", "cardinality of S(n)");
    partitions->add_option("--n", o.n, "dimension")->required();
    partitions->add_flag("--asymptotic", o.asymptotic, "also print the asymptotic estimate");

    CLI::App* catalog = app.add_subcommand("catalog", "built-in manifold catalog");
    catalog->add_option("action", o.which, "list")->required();

    CLI::App* compute = app.add_subcommand("compute", "delta invariants at a point");
    add_common(compute, true);
    compute->add_option("--point", o.point_str, "comma-separated chart coordinates");
    compute->add_option("--tuple", o.tuple_str, "comma-separated tuple, e.g. 2,2");
    compute->add_flag("--all-tuples", o.all_tuples, "every tuple of S(n)");

    CLI::App* check = app.add_subcommand("check", "theorem-level checks");
    check->add_option("which", o.which, "chen|lagrangian|warped|spectral|ideality|obstruction")
        ->required()
        ->check(CLI::IsMember({"chen", "lagrangian", "warped", "spectral", "ideality",
                               "obstruction"}));
    add_common(check, true);
    check->add_option("--grid", o.grid, "grid points per axis");
    check->add_option("--case", o.case_name, "Lagrangian inequality: L1|L2|L3")
        ->check(CLI::IsMember({"L1", "L2", "L3"}));
    check->add_option("--h2", o.h2, "squared mean curvature for warped checks");
    check->add_option("--max-ktilde", o.max_ktilde, "ambient max sectional curvature");
    check->add_flag("--all-tuples", o.all_tuples, "every tuple of S(n)");
    check->add_option("--tuple", o.tuple_str, "single tuple");

    CLI::App* report = app.add_subcommand("report", "re-emit a JSON report");
    report->add_option("--in", o.report_in, "input report (JSON)")->required();
    report->add_option("--format", o.format, "json|csv")
        ->required()
        ->check(CLI::IsMember({"json", "csv"}));
    report->add_option("--out", o.outfile, "write to a file");

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    std::string prog = "dinv";
    argv.push_back(prog.data());
    for (auto& a : storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(partitions)) {
            if (o.n < 2) {
                err << "partitions: --n must be >= 2\n";
                return 2;
            }
            out << cardinality(o.n).get_str() << "\n";
            if (o.asymptotic) {
                std::ostringstream os;
                os.precision(12);
                os << asymptotic_cardinality(o.n);
                out << os.str() << "\n";
            }
            return 0;
        }
        if (app.got_subcommand(catalog)) {
            if (o.which != "list") {
                err << "catalog: unknown action '" << o.which << "'\n";
                return 2;
            }
            for (const std::string& name : catalog_names()) out << name << "\n";
            return 0;
        }
        if (app.got_subcommand(report)) {
            std::ifstream in(o.report_in);
            if (!in) {
                err << "report: cannot open '" << o.report_in << "'\n";
                return 2;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            std::vector<ReportRecord> records = reports_from_json(buf.str());
            std::string text =
                o.format == "csv" ? reports_to_csv(records) : reports_to_json(records);
            if (o.outfile.empty()) {
                out << text;
            } else {
                std::ofstream f(o.outfile);
                f << text;
            }
            return 0;
        }

        Session s;
        s.seed = o.seed;
        s.restarts = o.restarts;
        s.no_timestamp = o.no_timestamp;

        if (app.got_subcommand(compute)) {
            cmd_compute(o, s);
        } else if (app.got_subcommand(check)) {
            if (o.which == "chen") cmd_check_chen(o, s);
            else if (o.which == "lagrangian") cmd_check_lagrangian(o, s);
            else if (o.which == "warped") cmd_check_warped(o, s);
            else if (o.which == "spectral") cmd_check_spectral(o, s);
            else if (o.which == "ideality") cmd_check_ideality(o, s);
            else cmd_check_obstruction(o, s);
        }
        emit(s, o.format, o.outfile, out);
        return s.any_failed ? 1 : 0;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dinv
