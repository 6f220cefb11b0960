#include "gsqr_tools/document.hpp"

#include "gsqr/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace gsqr::tools {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "gsqr-path";
constexpr int kVersion = 1;

// +inf is written as null; the path never produces NaN or -inf.
json number(double v) { return std::isinf(v) && v > 0 ? json(nullptr) : json(v); }

double number_from(const json& j) {
    if (j.is_null()) return kInfinity;
    if (!j.is_number()) throw InputError("corrupt document: expected a number, found " + j.dump());
    return j.get<double>();
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (double x : v) out.push_back(number(x));
    return out;
}

Vector vector_from(const json& j) {
    if (!j.is_array()) throw InputError("corrupt document: expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = number_from(j[k]);
    return v;
}

json affine_json(const AffineVector& a) {
    return {{"c0", vector_json(a.c0)}, {"c1", vector_json(a.c1)}, {"lo", number(a.lo)}, {"hi", number(a.hi)}};
}

AffineVector affine_from(const json& j) {
    return AffineVector(vector_from(j.at("c0")), vector_from(j.at("c1")), number_from(j.at("lo")),
                        number_from(j.at("hi")));
}

json event_json(const EventTag& e) { return {{"kind", to_string(e.kind)}, {"index", e.index}}; }

EventTag event_from(const json& j) { return {event_kind_from_string(j.at("kind").get<std::string>()), j.at("index").get<int>()}; }

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json design_json(const DesignInfo& d) {
    json cols = json::array();
    for (const auto& c : d.columns) {
        const char* kind = c.kind == DesignColumn::Kind::Linear  ? "linear"
                           : c.kind == DesignColumn::Kind::Power ? "power"
                           : c.kind == DesignColumn::Kind::Dummy ? "dummy"
                                                                 : "intercept";
        cols.push_back({{"name", c.name},
                        {"source", c.source},
                        {"kind", kind},
                        {"power", c.power},
                        {"level", c.level},
                        {"center", c.center},
                        {"scale", c.scale}});
    }
    return {{"columns", cols},
            {"group_names", d.group_names},
            {"response", d.response},
            {"response_center", d.response_center},
            {"response_scale", d.response_scale},
            {"intercept", d.intercept}};
}

DesignInfo design_from(const json& j) {
    DesignInfo d;
    for (const auto& c : j.at("columns")) {
        DesignColumn col;
        col.name = c.at("name").get<std::string>();
        col.source = c.at("source").get<std::string>();
        const std::string kind = c.at("kind").get<std::string>();
        if (kind == "linear") col.kind = DesignColumn::Kind::Linear;
        else if (kind == "power") col.kind = DesignColumn::Kind::Power;
        else if (kind == "dummy") col.kind = DesignColumn::Kind::Dummy;
        else if (kind == "intercept") col.kind = DesignColumn::Kind::Intercept;
        else throw InputError("corrupt document: unknown design column kind '" + kind + "'");
        col.power = c.at("power").get<int>();
        col.level = c.at("level").get<std::string>();
        col.center = c.at("center").get<double>();
        col.scale = c.at("scale").get<double>();
        d.columns.push_back(col);
    }
    d.group_names = j.at("group_names").get<std::vector<std::string>>();
    d.response = j.at("response").get<std::string>();
    d.response_center = j.at("response_center").get<double>();
    d.response_scale = j.at("response_scale").get<double>();
    d.intercept = j.at("intercept").get<bool>();
    return d;
}

void fnv(std::uint64_t& h, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
        h ^= bits & 0xffu;
        h *= 0x100000001b3ull;
        bits >>= 8;
    }
}

}  // namespace

void fill_default_names(PathDocument& doc) {
    const auto& p = doc.problem();
    if (doc.column_names.size() != static_cast<std::size_t>(p.m())) {
        doc.column_names.clear();
        for (int j = 0; j < p.m(); ++j) doc.column_names.push_back("x" + std::to_string(j + 1));
    }
    if (doc.group_names.size() != static_cast<std::size_t>(p.groups().size())) {
        doc.group_names.clear();
        for (int k = 0; k < p.groups().size(); ++k) doc.group_names.push_back("G" + std::to_string(k + 1));
    }
}

std::string problem_checksum(const QuantileProblem& problem) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (Eigen::Index c = 0; c < problem.X().cols(); ++c) {
        for (Eigen::Index r = 0; r < problem.X().rows(); ++r) fnv(h, problem.X()(r, c));
    }
    for (double v : problem.y()) fnv(h, v);
    fnv(h, problem.tau());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json to_json(const PathDocument& doc) {
    if (!doc.path.problem) throw InputError("document has no problem attached");
    const QuantileProblem& p = doc.problem();

    json X = json::array();
    for (int i = 0; i < p.n(); ++i) X.push_back(vector_json(p.X().row(i).transpose()));

    json problem = {{"n", p.n()},
                    {"m", p.m()},
                    {"tau", p.tau()},
                    {"groups", p.groups().groups()},
                    {"group_names", doc.group_names},
                    {"column_names", doc.column_names},
                    {"checksum", problem_checksum(p)},
                    {"X", X},
                    {"y", vector_json(p.y())}};

    json nodes = json::array();
    for (const PathNode& node : doc.path.nodes) {
        nodes.push_back({{"R", node.R},
                         {"lambda_lo", number(node.lambda_lo)},
                         {"lambda_hi", number(node.lambda_hi)},
                         {"beta", vector_json(node.beta)},
                         {"r", vector_json(node.r)},
                         {"u", affine_json(node.u)},
                         {"w", affine_json(node.w)},
                         {"event", event_json(node.event)},
                         {"exit", event_json(node.exit)}});
    }

    json out = {{"format", kFormat},
                {"version", kVersion},
                {"problem", problem},
                {"solver",
                 {{"tie_tolerance", doc.options.tie_tolerance},
                  {"strict_margin", doc.options.strict_margin},
                  {"pivot_tolerance", doc.options.pivot_tolerance},
                  {"kkt_tolerance", doc.options.kkt_tolerance},
                  {"certify", doc.options.certify},
                  {"max_nodes", doc.options.max_nodes}}},
                {"stop",
                 {{"max_active_groups", optional_json(doc.stop.max_active_groups)},
                  {"max_R", optional_json(doc.stop.max_R)},
                  {"run_to_lambda_zero", doc.stop.run_to_lambda_zero}}},
                {"termination", to_string(doc.path.termination)},
                {"failure", to_string(doc.failure)},
                {"diagnostic", doc.path.diagnostic},
                {"provenance",
                 {{"source", doc.source},
                  {"jitter_seed", optional_json(doc.jitter_seed)},
                  {"jitter_magnitude", doc.jitter_magnitude}}},
                {"nodes", nodes}};
    if (doc.design) out["design"] = design_json(*doc.design);
    if (doc.stack) {
        out["layout"] = {{"n", doc.stack->layout.n},
                         {"m", doc.stack->layout.m},
                         {"p", doc.stack->layout.p},
                         {"responses", doc.stack->responses},
                         {"regressors", doc.stack->regressors}};
    }
    return out;
}

PathDocument document_from_json(const json& j) {
    try {
        if (!j.is_object() || j.value("format", "") != kFormat) throw InputError("corrupt document: not a gsqr-path file");
        if (j.at("version").get<int>() != kVersion) throw InputError("unsupported document version");

        const json& pj = j.at("problem");
        const int n = pj.at("n").get<int>();
        const int m = pj.at("m").get<int>();
        const json& Xj = pj.at("X");
        if (!Xj.is_array() || Xj.size() != static_cast<std::size_t>(n)) throw InputError("corrupt document: X has wrong row count");
        Matrix X(n, m);
        for (int i = 0; i < n; ++i) {
            const Vector row = vector_from(Xj[static_cast<std::size_t>(i)]);
            if (row.size() != m) throw InputError("corrupt document: X row " + std::to_string(i) + " has wrong length");
            X.row(i) = row.transpose();
        }
        auto problem = std::make_shared<QuantileProblem>(
            std::move(X), vector_from(pj.at("y")), pj.at("tau").get<double>(),
            GroupStructure(pj.at("groups").get<std::vector<std::vector<int>>>(), m));
        if (pj.at("checksum").get<std::string>() != problem_checksum(*problem)) {
            throw InputError("corrupt document: data checksum mismatch");
        }

        PathDocument doc;
        doc.path.problem = problem;
        doc.group_names = pj.at("group_names").get<std::vector<std::string>>();
        doc.column_names = pj.at("column_names").get<std::vector<std::string>>();

        const json& sj = j.at("solver");
        doc.options.tie_tolerance = sj.at("tie_tolerance").get<double>();
        doc.options.strict_margin = sj.at("strict_margin").get<double>();
        doc.options.pivot_tolerance = sj.at("pivot_tolerance").get<double>();
        doc.options.kkt_tolerance = sj.at("kkt_tolerance").get<double>();
        doc.options.certify = sj.at("certify").get<bool>();
        doc.options.max_nodes = sj.at("max_nodes").get<int>();

        const json& st = j.at("stop");
        if (!st.at("max_active_groups").is_null()) doc.stop.max_active_groups = st.at("max_active_groups").get<int>();
        if (!st.at("max_R").is_null()) doc.stop.max_R = st.at("max_R").get<double>();
        doc.stop.run_to_lambda_zero = st.at("run_to_lambda_zero").get<bool>();

        doc.path.termination = termination_from_string(j.at("termination").get<std::string>());
        doc.failure = path_failure_from_string(j.at("failure").get<std::string>());
        doc.path.diagnostic = j.at("diagnostic").get<std::string>();

        const json& prov = j.at("provenance");
        doc.source = prov.at("source").get<std::string>();
        if (!prov.at("jitter_seed").is_null()) doc.jitter_seed = prov.at("jitter_seed").get<std::uint64_t>();
        doc.jitter_magnitude = prov.at("jitter_magnitude").get<double>();

        for (const json& nj : j.at("nodes")) {
            PathNode node;
            node.R = number_from(nj.at("R"));
            node.lambda_lo = number_from(nj.at("lambda_lo"));
            node.lambda_hi = number_from(nj.at("lambda_hi"));
            node.beta = vector_from(nj.at("beta"));
            node.r = vector_from(nj.at("r"));
            node.u = affine_from(nj.at("u"));
            node.w = affine_from(nj.at("w"));
            node.event = event_from(nj.at("event"));
            node.exit = event_from(nj.at("exit"));
            if (node.beta.size() != m || node.r.size() != n || node.u.size() != m || node.w.size() != n) {
                throw InputError("corrupt document: node " + std::to_string(doc.path.nodes.size()) +
                                 " has inconsistent dimensions");
            }
            doc.path.nodes.push_back(std::move(node));
        }

        if (j.contains("design")) doc.design = design_from(j.at("design"));
        if (j.contains("layout")) {
            const json& lj = j.at("layout");
            StackInfo info;
            info.layout = {lj.at("n").get<int>(), lj.at("m").get<int>(), lj.at("p").get<int>()};
            info.responses = lj.at("responses").get<std::vector<std::string>>();
            info.regressors = lj.at("regressors").get<std::vector<std::string>>();
            if (info.layout.rows() != n || info.layout.columns() != m) {
                throw InputError("corrupt document: layout does not match the problem");
            }
            doc.stack = std::move(info);
        }
        fill_default_names(doc);
        return doc;
    } catch (const json::exception& e) {
        throw InputError(std::string("corrupt document: ") + e.what());
    }
}

void write_document(const std::filesystem::path& file, const PathDocument& doc) {
    std::ofstream out(file);
    if (!out) throw InputError("cannot write '" + file.string() + "'");
    out << to_json(doc).dump(1) << '\n';
    if (!out) throw InputError("error writing '" + file.string() + "'");
}

PathDocument read_document(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open '" + file.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("corrupt document '" + file.string() + "': " + e.what());
    }
    return document_from_json(j);
}

}  // namespace gsqr::tools
