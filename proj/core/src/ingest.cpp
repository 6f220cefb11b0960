#include "gsqr/ingest.hpp"

#include "gsqr/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace gsqr {

// ---------------------------------------------------------------------------
// specs

bool ColumnSpec::has(Transform::Kind k) const {
    return std::any_of(transforms.begin(), transforms.end(), [k](const Transform& t) { return t.kind == k; });
}

int ColumnSpec::polynomial_degree() const {
    for (const auto& t : transforms) {
        if (t.kind == Transform::Kind::Polynomial) return t.degree;
    }
    return 1;
}

void ColumnSpec::validate() const {
    if (name.empty()) throw InputError("column spec with empty name");
    for (const auto& t : transforms) {
        if (t.kind == Transform::Kind::Polynomial && t.degree < 2) {
            throw InputError("column '" + name + "': polynomial degree must be >= 2");
        }
    }
    switch (kind) {
        case ColumnKind::Categorical:
            if (!has(Transform::Kind::DummyCode)) throw InputError("categorical column '" + name + "' needs dummy coding");
            if (has(Transform::Kind::Standardize) || has(Transform::Kind::Polynomial)) {
                throw InputError("categorical column '" + name + "' only supports dummy coding");
            }
            if (levels.size() < 2) throw InputError("categorical column '" + name + "' needs at least two levels");
            if (!reference.empty() && std::find(levels.begin(), levels.end(), reference) == levels.end()) {
                throw InputError("categorical column '" + name + "': reference level '" + reference + "' is not a level");
            }
            break;
        case ColumnKind::Quantitative:
            if (has(Transform::Kind::DummyCode)) throw InputError("quantitative column '" + name + "' cannot be dummy coded");
            break;
        case ColumnKind::Response:
            if (group) throw InputError("response column '" + name + "' cannot carry a group");
            if (has(Transform::Kind::DummyCode) || has(Transform::Kind::Polynomial)) {
                throw InputError("response column '" + name + "' only supports standardization");
            }
            break;
    }
}

// ---------------------------------------------------------------------------
// dataset access

int Dataset::index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

const NumericColumn& Dataset::numeric(const std::string& name) const {
    const int idx = index_of(name);
    if (idx < 0) throw InputError("dataset has no column '" + name + "'");
    if (const auto* col = std::get_if<NumericColumn>(&columns[idx])) return *col;
    throw InputError("column '" + name + "' is not numeric");
}

const TextColumn& Dataset::text(const std::string& name) const {
    const int idx = index_of(name);
    if (idx < 0) throw InputError("dataset has no column '" + name + "'");
    if (const auto* col = std::get_if<TextColumn>(&columns[idx])) return *col;
    throw InputError("column '" + name + "' is not categorical");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one record; handles double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    field += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
        } else {
            field += c;
        }
    }
    if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quoted field");
    fields.push_back(was_quoted ? field : trim(field));
    return fields;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA"; }

}  // namespace

Dataset parse_csv(std::istream& in, const std::vector<ColumnSpec>& specs, const std::string& source) {
    std::set<std::string> seen;
    for (const auto& spec : specs) {
        spec.validate();
        if (!seen.insert(spec.name).second) throw InputError("column '" + spec.name + "' is claimed by two specs");
    }

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        header = split_record(line, line_no);
        break;
    }
    if (header.empty()) throw InputError(source + ": empty file (no header row)");

    std::vector<int> position;
    for (const auto& spec : specs) {
        const auto it = std::find(header.begin(), header.end(), spec.name);
        if (it == header.end()) throw InputError(source + ": header has no column '" + spec.name + "'");
        position.push_back(static_cast<int>(it - header.begin()));
    }

    Dataset data;
    data.source = source;
    for (const auto& spec : specs) {
        data.names.push_back(spec.name);
        if (spec.kind == ColumnKind::Categorical) data.columns.emplace_back(TextColumn{});
        else data.columns.emplace_back(NumericColumn{});
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_record(line, line_no);
        if (fields.size() != header.size()) {
            throw InputError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                             " fields, header has " + std::to_string(header.size()));
        }
        bool missing = false;
        for (int p : position) missing = missing || is_missing(fields[p]);
        if (missing) {
            ++data.dropped_rows;
            continue;
        }
        for (std::size_t c = 0; c < specs.size(); ++c) {
            const auto& spec = specs[c];
            const std::string& cell = fields[position[c]];
            if (spec.kind == ColumnKind::Categorical) {
                if (std::find(spec.levels.begin(), spec.levels.end(), cell) == spec.levels.end()) {
                    throw InputError(source + ": line " + std::to_string(line_no) + ", column '" + spec.name +
                                     "': unknown level '" + cell + "'");
                }
                std::get<TextColumn>(data.columns[c]).push_back(cell);
            } else {
                double value = 0.0;
                const char* begin = cell.data();
                const char* end = begin + cell.size();
                if (*begin == '+') ++begin;
                const auto [ptr, ec] = std::from_chars(begin, end, value);
                if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
                    throw InputError(source + ": line " + std::to_string(line_no) + ", column '" + spec.name +
                                     "': cannot parse '" + cell + "' as a number");
                }
                std::get<NumericColumn>(data.columns[c]).push_back(value);
            }
        }
        ++data.rows;
    }
    if (data.rows == 0) throw InputError(source + ": no complete data rows");
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const std::vector<ColumnSpec>& specs) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return parse_csv(in, specs, path.string());
}

// ---------------------------------------------------------------------------
// transforms

DummyColumns dummy_code(const TextColumn& column, const std::vector<std::string>& levels, const std::string& reference) {
    if (levels.size() < 2) throw InputError("dummy coding needs at least two levels");
    if (std::find(levels.begin(), levels.end(), reference) == levels.end()) {
        throw InputError("reference level '" + reference + "' is not a level");
    }
    DummyColumns out;
    for (const auto& level : levels) {
        if (level != reference) out.levels.push_back(level);
    }
    out.values = Matrix::Zero(static_cast<Eigen::Index>(column.size()), static_cast<Eigen::Index>(out.levels.size()));
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (column[i] == reference) continue;
        const auto it = std::find(out.levels.begin(), out.levels.end(), column[i]);
        if (it == out.levels.end()) throw InputError("unknown level '" + column[i] + "'");
        out.values(static_cast<Eigen::Index>(i), it - out.levels.begin()) = 1.0;
    }
    return out;
}

double sample_sd(const Vector& column) {
    const auto n = column.size();
    if (n < 2) return 0.0;
    const double mean = column.mean();
    return std::sqrt((column.array() - mean).square().sum() / static_cast<double>(n - 1));
}

Matrix polynomial_group(const Vector& column, int degree) {
    if (degree < 2) throw InputError("polynomial degree must be >= 2");
    if (sample_sd(column) == 0.0) throw InputError("polynomial expansion of a constant column");
    Matrix out(column.size(), degree);
    out.col(0) = column;
    for (int p = 1; p < degree; ++p) out.col(p) = out.col(p - 1).cwiseProduct(column);
    return out;
}

Standardized standardize(const Vector& column) {
    const double sd = sample_sd(column);
    if (!(sd > 0.0)) throw InputError("cannot standardize a column with zero variance");
    Standardized out;
    out.center = column.mean();
    out.scale = sd;
    out.values = (column.array() - out.center) / sd;
    return out;
}

Dataset jitter(const Dataset& dataset, double magnitude, std::uint64_t seed, const std::vector<std::string>& columns) {
    if (!(magnitude > 0.0) || !std::isfinite(magnitude)) throw InputError("jitter magnitude must be positive");
    Dataset out = dataset;
    std::vector<int> targets;
    if (columns.empty()) {
        for (std::size_t c = 0; c < out.columns.size(); ++c) {
            if (std::holds_alternative<NumericColumn>(out.columns[c])) targets.push_back(static_cast<int>(c));
        }
    } else {
        for (const auto& name : columns) {
            const int idx = out.index_of(name);
            if (idx < 0) throw InputError("jitter: no column '" + name + "'");
            if (!std::holds_alternative<NumericColumn>(out.columns[idx])) {
                throw InputError("jitter: column '" + name + "' is not numeric");
            }
            targets.push_back(idx);
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int c : targets) {
        auto& col = std::get<NumericColumn>(out.columns[c]);
        const double sd = sample_sd(Eigen::Map<const Vector>(col.data(), static_cast<Eigen::Index>(col.size())));
        const double scale = magnitude * (sd > 0.0 ? sd : 1.0);
        for (double& v : col) v += scale * unit(rng);
    }
    out.jitter_seed = seed;
    out.jitter_magnitude = magnitude;
    return out;
}

BuiltProblem jitter_dummies(BuiltProblem built, double magnitude, std::uint64_t seed,
                            const std::vector<std::string>& sources) {
    if (!(magnitude > 0.0) || !std::isfinite(magnitude)) throw InputError("jitter magnitude must be positive");
    const QuantileProblem& p = built.problem;
    Matrix X = p.X();
    // a stream distinct from the dataset jitter drawn with the same seed
    std::seed_seq seq{seed, std::uint64_t{0x64756d6d79}};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    bool touched = false;
    for (std::size_t c = 0; c < built.design.columns.size(); ++c) {
        const DesignColumn& dc = built.design.columns[c];
        if (dc.kind != DesignColumn::Kind::Dummy) continue;
        if (!sources.empty() && std::find(sources.begin(), sources.end(), dc.source) == sources.end()) continue;
        const auto j = static_cast<Eigen::Index>(c);
        const double sd = sample_sd(X.col(j));
        const double scale = magnitude * (sd > 0.0 ? sd : 1.0);
        for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, j) += scale * unit(rng);
        touched = true;
    }
    if (touched) built.problem = QuantileProblem(std::move(X), p.y(), p.tau(), p.groups());
    return built;
}

// ---------------------------------------------------------------------------
// problem assembly

namespace {

Vector as_vector(const NumericColumn& col) {
    return Eigen::Map<const Vector>(col.data(), static_cast<Eigen::Index>(col.size()));
}

}  // namespace

BuiltProblem build_problem(const Dataset& dataset, const std::vector<ColumnSpec>& specs, double tau, bool intercept) {
    std::set<std::string> seen;
    const ColumnSpec* response = nullptr;
    for (const auto& spec : specs) {
        spec.validate();
        if (!seen.insert(spec.name).second) throw InputError("column '" + spec.name + "' is claimed by two specs");
        if (spec.kind == ColumnKind::Response) {
            if (response) throw InputError("more than one response column ('" + response->name + "', '" + spec.name + "')");
            response = &spec;
        }
    }
    if (!response) throw InputError("no response column designated");

    const auto n = static_cast<Eigen::Index>(dataset.rows);
    DesignInfo info;
    info.intercept = intercept;
    info.response = response->name;

    Vector y = as_vector(dataset.numeric(response->name));
    if (response->has(Transform::Kind::Standardize)) {
        const Standardized st = standardize(y);
        y = st.values;
        info.response_center = st.center;
        info.response_scale = st.scale;
    }

    std::vector<Vector> cols;
    std::vector<std::optional<std::string>> labels;
    for (const auto& spec : specs) {
        if (spec.kind == ColumnKind::Response) continue;
        if (spec.kind == ColumnKind::Categorical) {
            const std::string reference = spec.reference.empty() ? spec.levels.back() : spec.reference;
            const DummyColumns dummies = dummy_code(dataset.text(spec.name), spec.levels, reference);
            for (std::size_t d = 0; d < dummies.levels.size(); ++d) {
                cols.push_back(dummies.values.col(static_cast<Eigen::Index>(d)));
                labels.push_back(spec.group.value_or(spec.name));
                DesignColumn dc;
                dc.name = spec.name + "[" + dummies.levels[d] + "]";
                dc.source = spec.name;
                dc.kind = DesignColumn::Kind::Dummy;
                dc.level = dummies.levels[d];
                info.columns.push_back(dc);
            }
            continue;
        }

        Vector v = as_vector(dataset.numeric(spec.name));
        double center = 0.0;
        double scale = 1.0;
        if (spec.has(Transform::Kind::Standardize)) {
            const Standardized st = standardize(v);
            v = st.values;
            center = st.center;
            scale = st.scale;
        }
        const int degree = spec.polynomial_degree();
        if (degree >= 2) {
            const Matrix powers = polynomial_group(v, degree);
            for (int p = 1; p <= degree; ++p) {
                cols.push_back(powers.col(p - 1));
                labels.push_back(spec.group.value_or(spec.name));
                DesignColumn dc;
                dc.name = p == 1 ? spec.name : spec.name + "^" + std::to_string(p);
                dc.source = spec.name;
                dc.kind = DesignColumn::Kind::Power;
                dc.power = p;
                dc.center = center;
                dc.scale = scale;
                info.columns.push_back(dc);
            }
        } else {
            cols.push_back(v);
            labels.push_back(spec.group);
            DesignColumn dc;
            dc.name = spec.name;
            dc.source = spec.name;
            dc.center = center;
            dc.scale = scale;
            info.columns.push_back(dc);
        }
    }
    if (intercept) {
        cols.push_back(Vector::Ones(n));
        labels.push_back(std::nullopt);
        DesignColumn dc;
        dc.name = "(intercept)";
        dc.source = "(intercept)";
        dc.kind = DesignColumn::Kind::Intercept;
        info.columns.push_back(dc);
    }
    if (cols.empty()) throw InputError("design has no columns");

    Matrix X(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) X.col(static_cast<Eigen::Index>(c)) = cols[c];

    std::vector<std::vector<int>> groups;
    std::map<std::string, int> by_label;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const int j = static_cast<int>(c);
        if (labels[c]) {
            auto [it, inserted] = by_label.emplace(*labels[c], static_cast<int>(groups.size()));
            if (inserted) {
                groups.push_back({});
                info.group_names.push_back(*labels[c]);
            }
            groups[it->second].push_back(j);
        } else {
            groups.push_back({j});
            info.group_names.push_back(info.columns[c].name);
        }
    }
    const int m = static_cast<int>(cols.size());
    return {QuantileProblem(std::move(X), std::move(y), tau, GroupStructure(std::move(groups), m)), std::move(info)};
}

std::vector<std::pair<std::string, double>> back_map(const Vector& beta, const DesignInfo& design) {
    if (beta.size() != static_cast<Eigen::Index>(design.columns.size())) {
        throw InputError("back_map: coefficient vector does not match the design");
    }
    double constant = 0.0;
    std::vector<std::pair<std::string, double>> terms;

    // a standardized power term b * ((x - c) / s)^p expands binomially in x
    std::map<std::string, std::vector<std::pair<int, double>>> powers;
    std::vector<std::string> power_order;
    for (std::size_t c = 0; c < design.columns.size(); ++c) {
        const DesignColumn& dc = design.columns[c];
        const double b = beta[static_cast<Eigen::Index>(c)];
        switch (dc.kind) {
            case DesignColumn::Kind::Intercept:
                constant += b;
                break;
            case DesignColumn::Kind::Dummy:
                terms.emplace_back(dc.name, b);
                break;
            case DesignColumn::Kind::Linear:
                terms.emplace_back(dc.name, b / dc.scale);
                constant -= b * dc.center / dc.scale;
                break;
            case DesignColumn::Kind::Power:
                if (!powers.count(dc.source)) power_order.push_back(dc.source);
                powers[dc.source].emplace_back(dc.power, b);
                break;
        }
    }
    for (const auto& source : power_order) {
        const auto& list = powers[source];
        const auto it = std::find_if(design.columns.begin(), design.columns.end(), [&](const DesignColumn& dc) {
            return dc.source == source && dc.kind == DesignColumn::Kind::Power;
        });
        const double c = it->center;
        const double s = it->scale;
        int degree = 0;
        for (const auto& [p, b] : list) degree = std::max(degree, p);
        std::vector<double> coeff(static_cast<std::size_t>(degree) + 1, 0.0);
        for (const auto& [p, b] : list) {
            double binom = 1.0;
            for (int q = 0; q <= p; ++q) {
                if (q > 0) binom = binom * (p - q + 1) / q;
                coeff[q] += b * binom * std::pow(-c, p - q) / std::pow(s, p);
            }
        }
        constant += coeff[0];
        for (int q = 1; q <= degree; ++q) terms.emplace_back(q == 1 ? source : source + "^" + std::to_string(q), coeff[q]);
    }

    std::vector<std::pair<std::string, double>> out;
    if (design.intercept) out.emplace_back("(intercept)", constant * design.response_scale + design.response_center);
    for (auto& [name, value] : terms) out.emplace_back(name, value * design.response_scale);
    return out;
}

}  // namespace gsqr
