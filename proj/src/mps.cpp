#include "roster/mps.hpp"

#include "roster/errors.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>
#include <stdexcept>

namespace roster {

namespace {

constexpr std::size_t kNameWidth = 8;
constexpr std::size_t kNumberWidth = 12;
const char* const kObjRow = "OBJ";

bool fits(const std::string& s) {
    if (s.empty() || s.size() > kNameWidth)
        return false;
    for (char c : s)
        if (c <= ' ' || c == '$' || c == '*' || static_cast<unsigned char>(c) > 126)
            return false;
    return true;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

// Fields start at columns 2, 5, 15, 25, 40, 50.
std::string line(const std::string& f1, const std::string& f2, const std::string& f3 = "", const std::string& f4 = "",
                 const std::string& f5 = "", const std::string& f6 = "") {
    std::string s = " " + pad(f1, 2) + " " + pad(f2, 8) + "  " + pad(f3, 8) + "  " + pad(f4, 12) + "   " + pad(f5, 8) +
                    "  " + f6;
    while (!s.empty() && s.back() == ' ')
        s.pop_back();
    return s + "\n";
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

double parse_number(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw DocumentError("MPS: bad number '" + s + "'");
    return v;
}

}  // namespace

std::string mps_number(double x) {
    if (x == 0)
        return "0";
    char buf[64];
    for (int prec = 15; prec >= 1; --prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strlen(buf) <= kNumberWidth && (prec <= 12 || std::strtod(buf, nullptr) == x))
            return buf;
    }
    return buf;
}

std::string mangled_column(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "C%07d", i + 1);
    return buf;
}

std::string mangled_row(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "R%07d", i + 1);
    return buf;
}

VarRole role_from_name(const std::string& name) {
    return name.rfind("x[", 0) == 0 || name.rfind("y[", 0) == 0 ? VarRole::Decision : VarRole::Auxiliary;
}

std::string tag_from_row_name(const std::string& name) {
    const auto br = name.find('[');
    if (name.size() < 3 || name[0] != 'c' || br == std::string::npos || br < 2)
        return {};
    const std::string tag = name.substr(1, br - 1);
    for (char c : tag)
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.')
            return {};
    return tag;
}

std::string MpsNames::to_text() const {
    std::string s;
    for (const auto& [k, v] : columns)
        s += "C " + k + " " + v + "\n";
    for (const auto& [k, v] : rows)
        s += "R " + k + " " + v + "\n";
    return s;
}

MpsNames MpsNames::from_text(const std::string& text) {
    MpsNames n;
    std::istringstream is(text);
    std::string ln;
    while (std::getline(is, ln)) {
        if (ln.empty())
            continue;
        const auto a = ln.find(' ');
        const auto b = ln.find(' ', a + 1);
        if (a != 1 || b == std::string::npos || (ln[0] != 'C' && ln[0] != 'R'))
            throw DocumentError("name map: malformed line '" + ln + "'");
        (ln[0] == 'C' ? n.columns : n.rows)[ln.substr(a + 1, b - a - 1)] = ln.substr(b + 1);
    }
    return n;
}

MpsDocument emit_mps(const CanonicalModel& m, const std::string& name) {
    MpsDocument doc;
    const auto& vars = m.vars();
    const auto& rows = m.rows();

    std::vector<std::string> cname(vars.size()), rname(rows.size());
    std::set<std::string> used{kObjRow};
    auto assign = [&](const std::string& full, std::string gen, std::map<std::string, std::string>& map) {
        std::string s = fits(full) ? full : gen;
        if (!used.insert(s).second)
            throw std::runtime_error("MPS: short name collision on '" + s + "'");
        if (s != full)
            map[s] = full;
        return s;
    };
    for (std::size_t i = 0; i < vars.size(); ++i)
        cname[i] = assign(vars[i].name, mangled_column(static_cast<int>(i)), doc.names.columns);
    for (std::size_t i = 0; i < rows.size(); ++i)
        rname[i] = assign(rows[i].name, mangled_row(static_cast<int>(i)), doc.names.rows);

    std::vector<std::vector<std::pair<int, double>>> cols(vars.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& t : rows[r].terms)
            cols[static_cast<std::size_t>(t.var)].emplace_back(static_cast<int>(r), t.coef);

    std::string& out = doc.text;
    out += "NAME          " + name + "\n";
    out += "OBJSENSE\n    MAX\n";
    out += "ROWS\n";
    out += line("N", kObjRow);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const char* s = rows[r].sense == Sense::LE ? "L" : rows[r].sense == Sense::GE ? "G" : "E";
        out += line(s, rname[r]);
    }
    out += "COLUMNS\n";
    bool in_int = false;
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (!in_int) {
            out += line("", "MARKER", "'MARKER'", "", "'INTORG'");
            in_int = true;
        }
        bool any = false;
        if (vars[j].obj != 0) {
            out += line("", cname[j], kObjRow, mps_number(vars[j].obj));
            any = true;
        }
        for (const auto& [r, c] : cols[j]) {
            out += line("", cname[j], rname[static_cast<std::size_t>(r)], mps_number(c));
            any = true;
        }
        if (!any)
            out += line("", cname[j], kObjRow, "0");
    }
    if (in_int)
        out += line("", "MARKER", "'MARKER'", "", "'INTEND'");
    out += "RHS\n";
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].rhs != 0)
            out += line("", "RHS", rname[r], mps_number(rows[r].rhs));
    out += "BOUNDS\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const auto& v = vars[j];
        if (v.type == VarType::Binary) {
            out += line("BV", "BND", cname[j]);
            continue;
        }
        if (v.lb != 0)
            out += line("LO", "BND", cname[j], mps_number(v.lb));
        out += line("UP", "BND", cname[j], mps_number(v.ub));
    }
    out += "ENDATA\n";
    return doc;
}

CanonicalModel parse_mps(const std::string& text, const MpsNames& names) {
    enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };
    Section sec = Section::None;
    std::string obj_row;
    bool minimize = false;

    struct RowData {
        std::string name;
        Sense sense;
        double rhs = 0;
        std::vector<Term> terms;
    };
    std::vector<RowData> rows;
    std::map<std::string, int> row_index;
    struct ColData {
        std::string name;
        bool integer = false;
        bool binary = false;
        double lb = 0;
        double ub = 1e30;
        bool has_ub = false;
        double obj = 0;
    };
    std::vector<ColData> cols;
    std::map<std::string, int> col_index;
    bool in_int = false;

    auto full = [](const std::map<std::string, std::string>& m, const std::string& s) {
        auto it = m.find(s);
        return it == m.end() ? s : it->second;
    };

    std::istringstream is(text);
    std::string ln;
    int lineno = 0;
    while (std::getline(is, ln)) {
        ++lineno;
        if (!ln.empty() && ln.back() == '\r')
            ln.pop_back();
        if (ln.empty() || ln[0] == '*')
            continue;
        const auto tok = split_ws(ln);
        if (tok.empty())
            continue;
        auto fail = [&](const std::string& why) {
            throw DocumentError("MPS line " + std::to_string(lineno) + ": " + why);
        };
        if (ln[0] != ' ' && ln[0] != '\t') {
            const std::string& h = tok[0];
            if (h == "NAME")
                sec = Section::Name;
            else if (h == "OBJSENSE") {
                sec = Section::ObjSense;
                if (tok.size() > 1)
                    minimize = tok[1] == "MIN" || tok[1] == "MINIMIZE";
            } else if (h == "ROWS")
                sec = Section::Rows;
            else if (h == "COLUMNS")
                sec = Section::Columns;
            else if (h == "RHS")
                sec = Section::Rhs;
            else if (h == "BOUNDS")
                sec = Section::Bounds;
            else if (h == "ENDATA")
                sec = Section::End;
            else
                fail("unsupported section '" + h + "'");
            continue;
        }
        switch (sec) {
            case Section::ObjSense:
                minimize = tok[0] == "MIN" || tok[0] == "MINIMIZE";
                break;
            case Section::Rows: {
                if (tok.size() != 2)
                    fail("bad ROWS entry");
                if (tok[0] == "N") {
                    if (obj_row.empty())
                        obj_row = tok[1];
                    break;
                }
                Sense s = tok[0] == "L" ? Sense::LE : tok[0] == "G" ? Sense::GE : tok[0] == "E" ? Sense::EQ : Sense::LE;
                if (tok[0] != "L" && tok[0] != "G" && tok[0] != "E")
                    fail("bad row type '" + tok[0] + "'");
                row_index[tok[1]] = static_cast<int>(rows.size());
                rows.push_back({tok[1], s, 0, {}});
                break;
            }
            case Section::Columns: {
                if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                    const std::string& kind = tok.back();
                    if (kind == "'INTORG'")
                        in_int = true;
                    else if (kind == "'INTEND'")
                        in_int = false;
                    else
                        fail("bad marker");
                    break;
                }
                if (tok.size() != 3 && tok.size() != 5)
                    fail("bad COLUMNS entry");
                auto [it, fresh] = col_index.emplace(tok[0], static_cast<int>(cols.size()));
                if (fresh)
                    cols.push_back({tok[0], in_int, false, 0, 1e30, false, 0});
                const int j = it->second;
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    const double v = parse_number(tok[k + 1]);
                    if (tok[k] == obj_row) {
                        cols[static_cast<std::size_t>(j)].obj += v;
                        continue;
                    }
                    auto r = row_index.find(tok[k]);
                    if (r == row_index.end())
                        fail("unknown row '" + tok[k] + "'");
                    if (v != 0)
                        rows[static_cast<std::size_t>(r->second)].terms.push_back({j, v});
                }
                break;
            }
            case Section::Rhs: {
                if (tok.size() != 3 && tok.size() != 5)
                    fail("bad RHS entry");
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    if (tok[k] == obj_row)
                        continue;
                    auto r = row_index.find(tok[k]);
                    if (r == row_index.end())
                        fail("unknown row '" + tok[k] + "'");
                    rows[static_cast<std::size_t>(r->second)].rhs = parse_number(tok[k + 1]);
                }
                break;
            }
            case Section::Bounds: {
                if (tok.size() < 3)
                    fail("bad BOUNDS entry");
                auto c = col_index.find(tok[2]);
                if (c == col_index.end())
                    fail("unknown column '" + tok[2] + "'");
                auto& col = cols[static_cast<std::size_t>(c->second)];
                const std::string& t = tok[0];
                if (t == "BV") {
                    col.binary = true;
                    col.lb = 0;
                    col.ub = 1;
                    col.has_ub = true;
                } else if (tok.size() != 4) {
                    fail("missing bound value");
                } else if (t == "UP") {
                    col.ub = parse_number(tok[3]);
                    col.has_ub = true;
                } else if (t == "LO") {
                    col.lb = parse_number(tok[3]);
                } else if (t == "FX") {
                    col.lb = col.ub = parse_number(tok[3]);
                    col.has_ub = true;
                } else {
                    fail("unsupported bound type '" + t + "'");
                }
                break;
            }
            case Section::Name:
            case Section::None:
            case Section::End:
                fail("unexpected data line");
        }
    }
    if (sec != Section::End)
        throw DocumentError("MPS: missing ENDATA");

    CanonicalModel m;
    for (const auto& c : cols) {
        if (!c.integer)
            throw DocumentError("MPS: continuous column '" + c.name + "' is not supported");
        const std::string n = full(names.columns, c.name);
        const VarType type = c.binary ? VarType::Binary : VarType::Integer;
        const double ub = c.has_ub ? c.ub : (c.binary ? 1 : 1e30);
        m.add_var(n, type, c.lb, ub, minimize ? -c.obj : c.obj, role_from_name(n));
    }
    for (auto& r : rows) {
        const std::string n = full(names.rows, r.name);
        m.add_row(n, std::move(r.terms), r.sense, r.rhs, tag_from_row_name(n));
    }
    return m;
}

}  // namespace roster
