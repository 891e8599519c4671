#pragma once

// Fixed-format MPS exchange. Names that do not fit the 8-character fields
// are replaced by generated short names; the mapping is returned alongside.

#include "roster/canonical_model.hpp"

#include <map>
#include <string>

namespace roster {

struct MpsNames {
    std::map<std::string, std::string> columns;  // short -> full, only for mangled names
    std::map<std::string, std::string> rows;

    /// "C <short> <full>" / "R <short> <full>" lines.
    std::string to_text() const;
    static MpsNames from_text(const std::string& text);
};

struct MpsDocument {
    std::string text;
    MpsNames names;
};

MpsDocument emit_mps(const CanonicalModel& model, const std::string& name = "ROSTER");

/// Reads fixed or free MPS as written by emit_mps. `names` restores the full
/// variable and row names; family tags are recovered from row names.
CanonicalModel parse_mps(const std::string& text, const MpsNames& names = {});

/// Shortest decimal of at most 12 characters.
std::string mps_number(double x);

/// Short column name for variable index i ("C0000001" for i = 0).
std::string mangled_column(int i);
std::string mangled_row(int i);

/// Decision variables are the x and y assignment variables.
VarRole role_from_name(const std::string& name);
/// "c14.2[...]" -> "14.2"; empty when the name does not follow that pattern.
std::string tag_from_row_name(const std::string& name);

}  // namespace roster
