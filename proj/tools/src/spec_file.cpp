#include "gsqr_tools/spec_file.hpp"

#include "gsqr/errors.hpp"

#include <fstream>

namespace gsqr::tools {

using nlohmann::json;

namespace {

Transform transform_from(const json& t, const std::string& column) {
    if (t.is_string()) {
        const auto name = t.get<std::string>();
        if (name == "standardize") return Transform::standardize();
        if (name == "dummy" || name == "dummy_code") return Transform::dummy_code();
        throw InputError("column '" + column + "': unknown transform '" + name + "'");
    }
    if (t.is_object() && t.contains("polynomial")) return Transform::polynomial(t.at("polynomial").get<int>());
    throw InputError("column '" + column + "': unrecognized transform " + t.dump());
}

ColumnSpec column_from(const json& c) {
    ColumnSpec spec;
    spec.name = c.at("name").get<std::string>();
    const std::string kind = c.value("kind", "quantitative");
    if (kind == "quantitative") spec.kind = ColumnKind::Quantitative;
    else if (kind == "categorical") spec.kind = ColumnKind::Categorical;
    else if (kind == "response") spec.kind = ColumnKind::Response;
    else throw InputError("column '" + spec.name + "': unknown kind '" + kind + "'");

    if (c.contains("levels")) spec.levels = c.at("levels").get<std::vector<std::string>>();
    if (c.contains("reference")) spec.reference = c.at("reference").get<std::string>();
    if (c.contains("transforms")) {
        for (const auto& t : c.at("transforms")) spec.transforms.push_back(transform_from(t, spec.name));
    }
    if (spec.kind == ColumnKind::Categorical && !spec.has(Transform::Kind::DummyCode)) {
        spec.transforms.push_back(Transform::dummy_code());
    }
    if (c.contains("group") && !c.at("group").is_null()) spec.group = c.at("group").get<std::string>();
    spec.validate();
    return spec;
}

}  // namespace

FitSpec parse_fit_spec(const json& j) {
    try {
        if (!j.is_object() || !j.contains("columns")) throw InputError("spec file needs a \"columns\" array");
        FitSpec spec;
        for (const auto& c : j.at("columns")) spec.columns.push_back(column_from(c));
        if (j.contains("tau")) spec.tau = j.at("tau").get<double>();
        if (j.contains("intercept")) spec.intercept = j.at("intercept").get<bool>();
        if (j.contains("jitter_columns")) spec.jitter_columns = j.at("jitter_columns").get<std::vector<std::string>>();
        return spec;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed spec file: ") + e.what());
    }
}

FitSpec load_fit_spec(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open '" + file.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("malformed spec file '" + file.string() + "': " + e.what());
    }
    return parse_fit_spec(j);
}

}  // namespace gsqr::tools
