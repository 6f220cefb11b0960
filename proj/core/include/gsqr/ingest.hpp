#pragma once

#include "gsqr/core.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gsqr {

enum class ColumnKind { Quantitative, Categorical, Response };

struct Transform {
    enum class Kind { Standardize, Polynomial, DummyCode };
    Kind kind = Kind::Standardize;
    int degree = 0;  // Polynomial only

    static Transform standardize() { return {Kind::Standardize, 0}; }
    static Transform polynomial(int degree) { return {Kind::Polynomial, degree}; }
    static Transform dummy_code() { return {Kind::DummyCode, 0}; }
};

/// How one source column becomes design columns.
struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Quantitative;
    std::vector<std::string> levels;    // Categorical: the admissible levels, in order
    std::string reference;              // Categorical: level coded as all zeros (default: last level)
    std::vector<Transform> transforms;  // applied as Standardize, Polynomial, DummyCode
    std::optional<std::string> group;   // columns sharing a label form one group

    bool has(Transform::Kind kind) const;
    int polynomial_degree() const;  // 1 when no Polynomial transform
    void validate() const;
};

using NumericColumn = std::vector<double>;
using TextColumn = std::vector<std::string>;

/// Rectangular table with one typed vector per column; no missing cells.
struct Dataset {
    std::vector<std::string> names;
    std::vector<std::variant<NumericColumn, TextColumn>> columns;
    std::size_t rows = 0;
    std::size_t dropped_rows = 0;
    std::string source;
    std::optional<std::uint64_t> jitter_seed;
    double jitter_magnitude = 0.0;

    int index_of(const std::string& name) const;  // -1 when absent
    const NumericColumn& numeric(const std::string& name) const;
    const TextColumn& text(const std::string& name) const;
};

/**
 * Reads a comma-separated file with a header row. Only the columns named in
 * specs are kept; rows with an empty or "NA" cell in any of them are
 * dropped (and counted). Categorical cells must be one of the listed levels.
 */
Dataset load_csv(const std::filesystem::path& path, const std::vector<ColumnSpec>& specs);
Dataset parse_csv(std::istream& in, const std::vector<ColumnSpec>& specs, const std::string& source = "<stream>");

struct DummyColumns {
    std::vector<std::string> levels;  // the L-1 non-reference levels, one per column
    Matrix values;                    // rows x (L-1) indicators
};

DummyColumns dummy_code(const TextColumn& column, const std::vector<std::string>& levels, const std::string& reference);

/// Columns x, x^2, ..., x^degree.
Matrix polynomial_group(const Vector& column, int degree);

struct Standardized {
    Vector values;
    double center = 0.0;
    double scale = 1.0;
};

/// Centers to mean 0 and scales to sample standard deviation (divisor n-1) 1.
Standardized standardize(const Vector& column);

/// Sample standard deviation with divisor n-1 (0 for fewer than two values).
double sample_sd(const Vector& column);

/**
 * Adds U[-magnitude * sd_c, magnitude * sd_c] noise to every cell of the
 * named numeric columns (all numeric columns when names is empty), sd_c
 * being the column's standard deviation or 1 if it is zero. Deterministic in
 * seed.
 */
Dataset jitter(const Dataset& dataset, double magnitude, std::uint64_t seed,
               const std::vector<std::string>& columns = {});

/// One column of the assembled design, with what is needed to map its
/// coefficient back to the source units.
struct DesignColumn {
    enum class Kind { Linear, Power, Dummy, Intercept };
    std::string name;
    std::string source;
    Kind kind = Kind::Linear;
    int power = 1;
    std::string level;
    double center = 0.0;
    double scale = 1.0;
};

struct DesignInfo {
    std::vector<DesignColumn> columns;
    std::vector<std::string> group_names;
    std::string response;
    double response_center = 0.0;
    double response_scale = 1.0;
    bool intercept = false;
};

struct BuiltProblem {
    QuantileProblem problem;
    DesignInfo design;
};

/**
 * Applies each spec's transforms, groups the resulting columns, appends an
 * intercept column as its own singleton group when requested, and returns
 * the problem together with the back-mapping metadata.
 */
BuiltProblem build_problem(const Dataset& dataset, const std::vector<ColumnSpec>& specs, double tau, bool intercept);

/**
 * Dataset jitter cannot reach the indicator columns produced by dummy
 * coding; this perturbs them in the design the same way. Only dummies of the
 * named source columns are touched (all dummies when sources is empty).
 */
BuiltProblem jitter_dummies(BuiltProblem built, double magnitude, std::uint64_t seed,
                            const std::vector<std::string>& sources = {});

/// Coefficients expressed in the source units (intercept first when present).
std::vector<std::pair<std::string, double>> back_map(const Vector& beta, const DesignInfo& design);

}  // namespace gsqr
