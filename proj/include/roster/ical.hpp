#pragma once

// iCalendar (RFC 5545) export of a physician's assignments.

#include "roster/derive.hpp"
#include "roster/model.hpp"
#include "roster/roster.hpp"

#include <string>

namespace roster {

/// One VEVENT per assigned duty or shift of `physician`, with floating local
/// times. `dtstamp` is a UTC stamp of the form YYYYMMDDTHHMMSSZ.
std::string roster_to_ics(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der,
                          const std::string& physician, const std::string& dtstamp);

/// Local date-time at `minutes` after midnight of the period's first day, as YYYYMMDDTHHMMSS.
std::string ics_local_time(const Date& period_start, int minutes);

/// Escapes TEXT values and folds content lines at 75 octets.
std::string ics_escape(const std::string& text);
std::string ics_fold(const std::string& line);

}  // namespace roster
