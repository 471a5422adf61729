#include "dinv/catalog.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dinv {

namespace {

const double kPi = 3.14159265358979323846;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(tok);
    return out;
}

std::vector<std::string> var_names(const std::string& prefix, int n, int from = 1) {
    std::vector<std::string> v(n);
    for (int i = 0; i < n; ++i) v[i] = prefix + std::to_string(from + i);
    return v;
}

/// "(x1*x1+...+xq*xq)"
std::string sum_of_squares(const std::vector<std::string>& vars) {
    std::string s = "(";
    for (size_t i = 0; i < vars.size(); ++i) {
        if (i) s += "+";
        s += vars[i] + "*" + vars[i];
    }
    return s + ")";
}

ManifoldRecord clifford_torus() {
    ManifoldRecord rec;
    rec.name = "clifford-torus";
    rec.kind = RecordKind::Immersion;
    std::vector<std::string> vars = {"u1", "u2"};
    std::vector<Expression> comps = {
        parse_expression("cos(u1)", vars), parse_expression("sin(u1)", vars),
        parse_expression("cos(u2)", vars), parse_expression("sin(u2)", vars)};
    Box box;
    box.axes = {{0.2, 6.0}, {0.2, 6.0}};
    rec.immersion = ImmersionField(2, 4, std::move(comps), box);
    rec.homogeneous = true;
    return rec;
}

ManifoldRecord catenoid() {
    ManifoldRecord rec;
    rec.name = "catenoid";
    rec.kind = RecordKind::Immersion;
    std::vector<std::string> vars = {"u1", "u2"};
    std::vector<Expression> comps = {parse_expression("cosh(u2)*cos(u1)", vars),
                                     parse_expression("cosh(u2)*sin(u1)", vars),
                                     parse_expression("u2", vars)};
    Box box;
    box.axes = {{0.2, 6.0}, {-1.2, 1.2}};
    rec.immersion = ImmersionField(2, 3, std::move(comps), box);
    return rec;
}

ManifoldRecord hypercylinder(int p, int q) {
    if (p < 1 || q < 1) throw std::invalid_argument("hypercylinder: need p >= 1, q >= 1");
    const int n = p + q;
    ManifoldRecord rec;
    rec.name = "hypercylinder:" + std::to_string(p) + ":" + std::to_string(q);
    rec.kind = RecordKind::Immersion;
    std::vector<std::string> vars = var_names("t", p);
    for (const auto& v : var_names("x", q)) vars.push_back(v);
    std::vector<std::string> xs(vars.begin() + p, vars.end());
    std::string s = sum_of_squares(xs);

    std::vector<Expression> comps;
    for (int i = 0; i < p; ++i) comps.push_back(parse_expression(vars[i], vars));
    for (int a = 0; a < q; ++a)
        comps.push_back(parse_expression("2*" + xs[a] + "/(1+" + s + ")", vars));
    comps.push_back(parse_expression("(" + s + "-1)/(" + s + "+1)", vars));

    Box box;
    box.axes.assign(p, {-1.0, 1.0});
    for (int a = 0; a < q; ++a) box.axes.push_back({-0.7, 0.7});
    rec.immersion = ImmersionField(n, n + 1, std::move(comps), box);
    rec.homogeneous = true;
    rec.h2 = static_cast<double>(q) * q / (static_cast<double>(n) * n);
    return rec;
}

ManifoldRecord warped_s2() {
    ManifoldRecord rec;
    rec.name = "warped-s2";
    rec.kind = RecordKind::Warped;
    Box base_box, fiber_box;
    base_box.axes = {{-kPi / 2, kPi / 2}};
    fiber_box.axes = {{0.0, 2 * kPi}};
    MetricField base(1, {{parse_expression("1", {"t1"})}}, base_box);
    MetricField fiber(1, {{parse_expression("1", {"v1"})}}, fiber_box);
    WarpedSpec w{std::move(base), std::move(fiber), parse_expression("cos(t1)", {"t1"}), true};
    rec.warped = std::move(w);
    rec.h2 = 1.0;  // as the round sphere in E^3
    return rec;
}

ManifoldRecord flat_torus() {
    ManifoldRecord rec;
    rec.name = "flat-torus";
    rec.kind = RecordKind::Metric;
    std::vector<std::string> vars = {"u1", "u2"};
    std::vector<std::vector<Expression>> g = {
        {parse_expression("1", vars), parse_expression("0", vars)},
        {parse_expression("0", vars), parse_expression("1", vars)}};
    Box box;
    box.axes = {{0.0, 1.0}, {0.0, 1.0}};
    rec.metric = MetricField(2, std::move(g), box);
    rec.lambda1 = 4.0 * kPi * kPi;
    rec.volume = 1.0;
    rec.b1_zero = false;
    rec.homogeneous = true;
    return rec;
}

}  // namespace

ImmersionField sphere_immersion(int n, double r) {
    if (n < 2) throw std::invalid_argument("sphere_immersion: n must be >= 2");
    std::vector<std::string> vars = var_names("x", n);
    std::string s = sum_of_squares(vars);
    std::vector<Expression> comps;
    Params params = {{"r", r}};
    for (int a = 0; a < n; ++a)
        comps.push_back(parse_expression("2*r*" + vars[a] + "/(1+" + s + ")", vars, {"r"}));
    comps.push_back(parse_expression("r*(" + s + "-1)/(" + s + "+1)", vars, {"r"}));
    Box box;
    box.axes.assign(n, {-0.7, 0.7});
    return ImmersionField(n, n + 1, std::move(comps), box, params);
}

MetricField sphere_metric(int n, double r, bool full_last_angle) {
    if (n < 2) throw std::invalid_argument("sphere_metric: n must be >= 2");
    std::vector<std::string> vars = var_names("u", n);
    std::vector<std::vector<Expression>> g(n, std::vector<Expression>(n));
    Params params = {{"r", r}};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                g[i][j] = parse_expression("0", vars);
                continue;
            }
            std::string e = "r*r";
            for (int k = 0; k < i; ++k) e += "*sin(" + vars[k] + ")^2";
            g[i][j] = parse_expression(e, vars, {"r"});
        }
    Box box;
    box.axes.assign(n, {0.0, kPi});
    box.axes[n - 1][1] = full_last_angle ? 2 * kPi : kPi;
    return MetricField(n, std::move(g), box, params);
}

double sphere_volume(int n, double r) {
    return std::pow(r, n) * 2.0 * std::pow(kPi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0);
}

ManifoldRecord resolve_catalog(const std::string& name) {
    std::vector<std::string> parts = split(name, ':');
    const std::string& head = parts[0];

    if (head == "sphere") {
        if (parts.size() < 2 || parts.size() > 3)
            throw std::invalid_argument("catalog: expected sphere:n[:r]");
        int n = std::stoi(parts[1]);
        double r = parts.size() == 3 ? std::stod(parts[2]) : 1.0;
        ManifoldRecord rec;
        rec.name = name;
        rec.kind = RecordKind::Immersion;
        rec.immersion = sphere_immersion(n, r);
        rec.metric = sphere_metric(n, r);
        rec.lambda1 = n / (r * r);
        rec.volume = sphere_volume(n, r);
        rec.homogeneous = true;
        rec.h2 = 1.0 / (r * r);
        return rec;
    }
    if (head == "rp") {
        if (parts.size() != 2) throw std::invalid_argument("catalog: expected rp:n");
        int n = std::stoi(parts[1]);
        ManifoldRecord rec;
        rec.name = name;
        rec.kind = RecordKind::Metric;
        rec.metric = sphere_metric(n, 1.0, /*full_last_angle=*/false);
        rec.lambda1 = 2.0 * (n + 1);
        rec.volume = 0.5 * sphere_volume(n);
        rec.finite_pi1 = true;
        rec.homogeneous = true;
        return rec;
    }
    if (head == "hypercylinder") {
        if (parts.size() != 3) throw std::invalid_argument("catalog: expected hypercylinder:p:q");
        return hypercylinder(std::stoi(parts[1]), std::stoi(parts[2]));
    }
    if (head == "whitney") {
        if (parts.size() != 2) throw std::invalid_argument("catalog: expected whitney:n");
        ManifoldRecord rec;
        rec.name = name;
        rec.kind = RecordKind::Immersion;
        rec.immersion = whitney_immersion(std::stoi(parts[1]));
        return rec;
    }
    if (name == "clifford-torus") return clifford_torus();
    if (name == "catenoid") return catenoid();
    if (name == "warped-s2") return warped_s2();
    if (name == "flat-torus") return flat_torus();
    throw std::invalid_argument("catalog: unknown entry '" + name + "'");
}

std::vector<std::string> catalog_names() {
    return {"sphere:n[:r]",        "rp:n",     "hypercylinder:p:q", "clifford-torus",
            "catenoid",            "whitney:n", "warped-s2",        "flat-torus"};
}

}  // namespace dinv
