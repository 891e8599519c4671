#include "roster/ical.hpp"

#include "roster/errors.hpp"

#include <cstdio>
#include <map>

namespace roster {

std::string ics_local_time(const Date& period_start, int minutes) {
    const int days = minutes >= 0 ? minutes / kMinutesPerDay : -((-minutes + kMinutesPerDay - 1) / kMinutesPerDay);
    const int rem = minutes - days * kMinutesPerDay;
    const Date d = period_start + days;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02d%02d00", d.year(), d.month(), d.day(), rem / 60, rem % 60);
    return buf;
}

std::string ics_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case ';': out += "\\;"; break;
            case ',': out += "\\,"; break;
            case '\n': out += "\\n"; break;
            case '\r': break;
            default: out += c;
        }
    }
    return out;
}

std::string ics_fold(const std::string& line) {
    std::string out;
    std::size_t width = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const auto c = static_cast<unsigned char>(line[i]);
        // Never split a UTF-8 sequence.
        if (width >= 75 && (c & 0xC0) != 0x80) {
            out += "\r\n ";
            width = 1;
        }
        out += line[i];
        ++width;
    }
    return out + "\r\n";
}

std::string roster_to_ics(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der,
                          const std::string& physician, const std::string& dtstamp) {
    if (!der.physician_index.count(physician))
        throw DocumentError("unknown physician '" + physician + "'");
    std::map<std::string, std::string> labels;
    for (const auto& t : inst.duty_templates)
        labels[t.id] = t.label.empty() ? t.id : t.label;
    for (const auto& t : inst.shift_templates)
        labels[t.id] = t.label.empty() ? t.id : t.label;

    std::string out;
    out += ics_fold("BEGIN:VCALENDAR");
    out += ics_fold("VERSION:2.0");
    out += ics_fold("PRODID:-//roster//duty roster export//EN");
    out += ics_fold("CALSCALE:GREGORIAN");
    out += ics_fold("X-WR-CALNAME:" + ics_escape(inst.department + " " + physician));
    for (const auto& a : roster.assignments) {
        if (a.physician != physician)
            continue;
        auto it = der.activity_index.find(a.instance);
        if (it == der.activity_index.end())
            throw DocumentError("roster references unknown instance '" + a.instance + "'");
        const Activity& act = der.activities[static_cast<std::size_t>(it->second)];
        out += ics_fold("BEGIN:VEVENT");
        out += ics_fold("UID:" + ics_escape(act.id + "/" + physician + "/" + inst.department));
        out += ics_fold("DTSTAMP:" + dtstamp);
        out += ics_fold("DTSTART:" + ics_local_time(inst.period.start, act.start));
        out += ics_fold("DTEND:" + ics_local_time(inst.period.start, act.end));
        out += ics_fold("SUMMARY:" + ics_escape(labels[act.template_id]));
        out += ics_fold(std::string("CATEGORIES:") + (act.kind == ActivityKind::Duty ? "DUTY" : "SHIFT"));
        out += ics_fold("END:VEVENT");
    }
    out += ics_fold("END:VCALENDAR");
    return out;
}

}  // namespace roster
