#include "dinv/specdoc.hpp"

#include <fstream>

namespace dinv {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& field, const std::string& ctx) {
    if (!j.contains(field)) throw SpecError(ctx.empty() ? field : ctx + "." + field, "missing field");
    return j.at(field);
}

std::string path_of(const std::string& ctx, const std::string& field) {
    return ctx.empty() ? field : ctx + "." + field;
}

std::vector<std::string> parse_variables(const json& j, const std::string& ctx) {
    const json& vars = require(j, "variables", ctx);
    if (!vars.is_array() || vars.empty())
        throw SpecError(path_of(ctx, "variables"), "must be a non-empty array of names");
    std::vector<std::string> out;
    for (const auto& v : vars) {
        if (!v.is_string()) throw SpecError(path_of(ctx, "variables"), "entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

Box parse_domain(const json& j, int dim, const std::string& ctx) {
    const json& dom = require(j, "domain", ctx);
    if (!dom.is_array() || static_cast<int>(dom.size()) != dim)
        throw SpecError(path_of(ctx, "domain"), "must be an array of [lo, hi] pairs, one per variable");
    Box box;
    for (size_t i = 0; i < dom.size(); ++i) {
        const auto& axis = dom[i];
        if (!axis.is_array() || axis.size() != 2 || !axis[0].is_number() || !axis[1].is_number())
            throw SpecError(path_of(ctx, "domain[" + std::to_string(i) + "]"),
                            "must be a [lo, hi] number pair");
        double lo = axis[0].get<double>(), hi = axis[1].get<double>();
        if (!(lo < hi))
            throw SpecError(path_of(ctx, "domain[" + std::to_string(i) + "]"), "empty box (lo >= hi)");
        box.axes.push_back({lo, hi});
    }
    return box;
}

Params parse_params(const json& j, const std::string& ctx) {
    Params params;
    if (!j.contains("parameters")) return params;
    const json& p = j.at("parameters");
    if (!p.is_object()) throw SpecError(path_of(ctx, "parameters"), "must be an object of numbers");
    for (auto it = p.begin(); it != p.end(); ++it) {
        if (!it.value().is_number())
            throw SpecError(path_of(ctx, "parameters." + it.key()), "must be a number");
        params[it.key()] = it.value().get<double>();
    }
    return params;
}

std::vector<std::string> param_names(const Params& p) {
    std::vector<std::string> names;
    for (const auto& [k, v] : p) names.push_back(k);
    return names;
}

Expression parse_field_expression(const std::string& text, const std::vector<std::string>& vars,
                                  const Params& params, const std::string& field) {
    try {
        return parse_expression(text, vars, param_names(params));
    } catch (const ParseError& e) {
        throw SpecError(field, std::string("expression error: ") + e.what());
    }
}

MetricField parse_metric_field(const json& j, const std::string& ctx) {
    int dim = require(j, "dim", ctx).get<int>();
    if (dim < 1) throw SpecError(path_of(ctx, "dim"), "must be >= 1");
    auto vars = parse_variables(j, ctx);
    if (static_cast<int>(vars.size()) != dim)
        throw SpecError(path_of(ctx, "variables"), "count must equal dim");
    Params params = parse_params(j, ctx);
    Box box = parse_domain(j, dim, ctx);

    const json& m = require(j, "metric", ctx);
    if (!m.is_array() || static_cast<int>(m.size()) != dim)
        throw SpecError(path_of(ctx, "metric"), "must be a dim x dim array of expressions");
    std::vector<std::vector<Expression>> entries(dim, std::vector<Expression>(dim));
    for (int i = 0; i < dim; ++i) {
        if (!m[i].is_array() || static_cast<int>(m[i].size()) != dim)
            throw SpecError(path_of(ctx, "metric[" + std::to_string(i) + "]"),
                            "must have dim entries");
        for (int jj = 0; jj < dim; ++jj) {
            if (!m[i][jj].is_string())
                throw SpecError(path_of(ctx, "metric[" + std::to_string(i) + "][" +
                                                 std::to_string(jj) + "]"),
                                "must be an expression string");
            entries[i][jj] = parse_field_expression(
                m[i][jj].get<std::string>(), vars, params,
                path_of(ctx, "metric[" + std::to_string(i) + "][" + std::to_string(jj) + "]"));
        }
    }
    // enforce symmetric ingestion: g_ji entry must equal g_ij textually or parse-equal;
    // we simply mirror the upper triangle to guarantee the invariant
    for (int i = 0; i < dim; ++i)
        for (int jj = i + 1; jj < dim; ++jj) entries[jj][i] = entries[i][jj];
    return MetricField(dim, std::move(entries), box, params);
}

ImmersionField parse_immersion_field(const json& j, const std::string& ctx) {
    int dim = require(j, "dim", ctx).get<int>();
    int m = require(j, "ambient_dim", ctx).get<int>();
    auto vars = parse_variables(j, ctx);
    if (static_cast<int>(vars.size()) != dim)
        throw SpecError(path_of(ctx, "variables"), "count must equal dim");
    Params params = parse_params(j, ctx);
    Box box = parse_domain(j, dim, ctx);

    const json& comps = require(j, "components", ctx);
    if (!comps.is_array() || static_cast<int>(comps.size()) != m)
        throw SpecError(path_of(ctx, "components"), "must be an array of ambient_dim expressions");
    std::vector<Expression> expr;
    for (size_t a = 0; a < comps.size(); ++a) {
        if (!comps[a].is_string())
            throw SpecError(path_of(ctx, "components[" + std::to_string(a) + "]"),
                            "must be an expression string");
        expr.push_back(parse_field_expression(comps[a].get<std::string>(), vars, params,
                                              path_of(ctx, "components[" + std::to_string(a) + "]")));
    }
    if (m <= dim) throw SpecError(path_of(ctx, "ambient_dim"), "must exceed dim");
    return ImmersionField(dim, m, std::move(expr), box, params);
}

CurvatureTensor parse_curvature(const json& j, int n, const std::string& ctx) {
    std::vector<double> comps(static_cast<size_t>(n) * n * n * n, 0.0);
    auto idx = [n](int i, int jj, int k, int l) {
        return static_cast<size_t>(((i * n + jj) * n + k)) * n + l;
    };
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw SpecError(ctx, "must be an n^4 nested array");
    for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    try {
                        comps[idx(i, jj, k, l)] = j.at(i).at(jj).at(k).at(l).get<double>();
                    } catch (const json::exception&) {
                        throw SpecError(ctx, "must be an n^4 nested number array");
                    }
                }
    return CurvatureTensor(n, std::move(comps), Eigen::MatrixXd::Identity(n, n));
}

std::vector<Eigen::MatrixXd> parse_h(const json& j, int n, const std::string& ctx) {
    if (!j.is_array() || j.empty()) throw SpecError(ctx, "must be a [r][i][j] nested number array");
    std::vector<Eigen::MatrixXd> out;
    for (size_t r = 0; r < j.size(); ++r) {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) {
                try {
                    m(i, jj) = j.at(r).at(i).at(jj).get<double>();
                } catch (const json::exception&) {
                    throw SpecError(ctx, "must be a [r][i][j] nested number array");
                }
            }
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw SpecError(ctx + "[" + std::to_string(r) + "]", "must be symmetric");
        out.push_back(0.5 * (m + m.transpose()));
    }
    return out;
}

}  // namespace

SpecDocument parse_spec(const json& j) {
    SpecDocument doc;
    std::string kind = require(j, "kind", "").get<std::string>();
    doc.name = require(j, "name", "").get<std::string>();
    doc.record.name = doc.name;

    if (kind == "immersion") {
        doc.kind = RecordKind::Immersion;
        doc.record.kind = RecordKind::Immersion;
        doc.record.immersion = parse_immersion_field(j, "");
    } else if (kind == "metric") {
        doc.kind = RecordKind::Metric;
        doc.record.kind = RecordKind::Metric;
        doc.record.metric = parse_metric_field(j, "");
    } else if (kind == "warped") {
        doc.kind = RecordKind::Warped;
        doc.record.kind = RecordKind::Warped;
        const json& w = require(j, "warped", "");
        MetricField base = parse_metric_field(require(w, "base", "warped"), "warped.base");
        MetricField fiber = parse_metric_field(require(w, "fiber", "warped"), "warped.fiber");
        const json& warp = require(w, "warping", "warped");
        if (!warp.is_string()) throw SpecError("warped.warping", "must be an expression string");
        std::vector<std::string> base_vars;
        {
            const json& bv = require(require(w, "base", "warped"), "variables", "warped.base");
            for (const auto& v : bv) base_vars.push_back(v.get<std::string>());
        }
        Expression f = parse_field_expression(warp.get<std::string>(), base_vars, base.params(),
                                              "warped.warping");
        bool compact = w.contains("base_compact") && w.at("base_compact").get<bool>();
        doc.record.warped = WarpedSpec{std::move(base), std::move(fiber), std::move(f), compact};
    } else if (kind == "point-data") {
        doc.kind = RecordKind::PointData;
        doc.record.kind = RecordKind::PointData;
        int n = require(j, "dim", "").get<int>();
        if (n < 2) throw SpecError("dim", "must be >= 2");
        doc.record.point_curvature = parse_curvature(require(j, "curvature", ""), n, "curvature");
        if (j.contains("h")) doc.record.point_h = parse_h(j.at("h"), n, "h");
    } else {
        throw SpecError("kind", "must be one of immersion|metric|warped|point-data");
    }

    if (j.contains("lambda1")) {
        double l1 = j.at("lambda1").get<double>();
        if (!(l1 > 0.0)) throw SpecError("lambda1", "must be positive when present");
        doc.record.lambda1 = l1;
    }
    if (j.contains("volume")) doc.record.volume = j.at("volume").get<double>();
    if (j.contains("topology")) {
        const json& t = j.at("topology");
        if (t.contains("b1_zero")) doc.record.b1_zero = t.at("b1_zero").get<bool>();
        if (t.contains("finite_pi1")) doc.record.finite_pi1 = t.at("finite_pi1").get<bool>();
    }
    if (j.contains("homogeneous")) doc.record.homogeneous = j.at("homogeneous").get<bool>();
    if (j.contains("ambient_c")) doc.record.ambient_c = j.at("ambient_c").get<double>();
    return doc;
}

SpecDocument load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("(file)", "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw SpecError("(file)", std::string("invalid JSON: ") + e.what());
    }
    return parse_spec(j);
}

}  // namespace dinv
