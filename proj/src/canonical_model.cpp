#include "roster/canonical_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace roster {

int CanonicalModel::add_var(std::string name, VarType type, double lb, double ub, double obj, VarRole role) {
    const int id = static_cast<int>(vars_.size());
    if (!index_.emplace(name, id).second)
        throw std::logic_error("duplicate variable name " + name);
    vars_.push_back({std::move(name), type, lb, ub, obj, role});
    return id;
}

void CanonicalModel::add_row(std::string name, std::vector<Term> terms, Sense sense, double rhs, std::string tag) {
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    rows_.push_back({std::move(name), std::move(terms), sense, rhs, std::move(tag)});
}

std::optional<int> CanonicalModel::find(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

int CanonicalModel::index(const std::string& name) const {
    const auto i = find(name);
    if (!i)
        throw std::out_of_range("unknown variable " + name);
    return *i;
}

double CanonicalModel::objective(const std::vector<double>& values) const {
    double z = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        z += vars_[i].obj * values.at(i);
    return z;
}

std::string family_of(const std::string& tag) {
    const auto dot = tag.find('.');
    return dot == std::string::npos ? tag : tag.substr(0, dot);
}

ModelStatistics model_statistics(const CanonicalModel& m) {
    ModelStatistics s;
    s.variables = static_cast<int>(m.vars().size());
    for (const auto& v : m.vars()) {
        (v.type == VarType::Binary ? s.binary : s.integer)++;
        s.variable_groups[v.name.substr(0, v.name.find('['))]++;
    }
    s.constraints = static_cast<int>(m.rows().size());
    for (const auto& r : m.rows()) {
        s.nonzeros += static_cast<int>(r.terms.size());
        s.families[family_of(r.tag)]++;
    }
    return s;
}

namespace {

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

const char* sense_str(Sense s) {
    switch (s) {
        case Sense::LE: return "<=";
        case Sense::GE: return ">=";
        case Sense::EQ: return "=";
    }
    return "?";
}

void append_terms(std::ostringstream& os, const CanonicalModel& m, const std::vector<Term>& terms) {
    bool first = true;
    for (const auto& t : terms) {
        if (t.coef < 0)
            os << (first ? "-" : " - ");
        else if (!first)
            os << " + ";
        const double a = std::fabs(t.coef);
        if (a != 1)
            os << num(a) << ' ';
        os << m.vars()[t.var].name;
        first = false;
    }
    if (first)
        os << '0';
}

}  // namespace

std::string model_listing(const CanonicalModel& m) {
    std::ostringstream os;
    os << "maximize\n  ";
    std::vector<Term> obj;
    for (int i = 0; i < static_cast<int>(m.vars().size()); ++i)
        if (m.vars()[i].obj != 0)
            obj.push_back({i, m.vars()[i].obj});
    append_terms(os, m, obj);
    os << "\nsubject to\n";
    for (const auto& r : m.rows()) {
        os << "  [" << r.tag << "] " << r.name << ": ";
        append_terms(os, m, r.terms);
        os << ' ' << sense_str(r.sense) << ' ' << num(r.rhs) << '\n';
    }
    os << "bounds\n";
    for (const auto& v : m.vars())
        os << "  " << num(v.lb) << " <= " << v.name << " <= " << num(v.ub)
           << (v.type == VarType::Binary ? " binary" : " integer") << '\n';
    return os.str();
}

double row_activity(const Constraint& c, const std::vector<double>& values) {
    double s = 0;
    for (const auto& t : c.terms)
        s += t.coef * values.at(t.var);
    return s;
}

bool row_satisfied(const Constraint& c, const std::vector<double>& values, double tol) {
    const double a = row_activity(c, values);
    switch (c.sense) {
        case Sense::LE: return a <= c.rhs + tol;
        case Sense::GE: return a >= c.rhs - tol;
        case Sense::EQ: return std::fabs(a - c.rhs) <= tol;
    }
    return false;
}

}  // namespace roster
