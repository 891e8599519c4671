#pragma once

// Solver-neutral MIP: named variables with bounds and objective coefficients,
// linear rows with a tag naming the constraint family. The sense
// is always maximization.

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace roster {

enum class VarType { Binary, Integer };
/// Decision variables are x and y; everything else is determined by them.
enum class VarRole { Decision, Auxiliary };
enum class Sense { LE, GE, EQ };

struct Variable {
    std::string name;
    VarType type = VarType::Binary;
    double lb = 0;
    double ub = 1;
    double obj = 0;
    VarRole role = VarRole::Auxiliary;
    bool operator==(const Variable&) const = default;
};

struct Term {
    int var = 0;
    double coef = 0;
    bool operator==(const Term&) const = default;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::LE;
    double rhs = 0;
    std::string tag;  // family, e.g. "14.2"
    bool operator==(const Constraint&) const = default;
};

class CanonicalModel {
public:
    int add_var(std::string name, VarType type, double lb, double ub, double obj, VarRole role);
    /// Terms are stored ordered by variable index.
    void add_row(std::string name, std::vector<Term> terms, Sense sense, double rhs, std::string tag);

    std::optional<int> find(const std::string& name) const;
    int index(const std::string& name) const;  // throws std::out_of_range

    const std::vector<Variable>& vars() const { return vars_; }
    const std::vector<Constraint>& rows() const { return rows_; }
    /// Mutable access for bounds and coefficients; names must not change.
    std::vector<Variable>& vars() { return vars_; }
    std::vector<Constraint>& rows() { return rows_; }

    double objective(const std::vector<double>& values) const;

    bool operator==(const CanonicalModel& o) const { return vars_ == o.vars_ && rows_ == o.rows_; }

private:
    std::vector<Variable> vars_;
    std::vector<Constraint> rows_;
    std::unordered_map<std::string, int> index_;
};

/// Major family of a tag: "14.2" -> "14".
std::string family_of(const std::string& tag);

struct ModelStatistics {
    int variables = 0;
    int binary = 0;
    int integer = 0;
    int constraints = 0;
    int nonzeros = 0;
    std::map<std::string, int> families;        // rows per major family
    std::map<std::string, int> variable_groups; // variables per name prefix ("x", "vioRest", ...)
};

ModelStatistics model_statistics(const CanonicalModel& m);

/// One constraint per line with its family tag, preceded by the objective and bounds.
std::string model_listing(const CanonicalModel& m);

/// Row activity (sum of coef * value).
double row_activity(const Constraint& c, const std::vector<double>& values);
bool row_satisfied(const Constraint& c, const std::vector<double>& values, double tol = 1e-6);

}  // namespace roster
