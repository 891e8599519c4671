#pragma once

// Small hand-built instances shared by the unit tests.

#include "roster/model.hpp"

#include <string>

namespace roster::testing {

inline WeekdaySet all_days() { return WeekdaySet{}.set(); }

inline Physician make_physician(const std::string& id, double rate = 1.0) {
    Physician p;
    p.id = id;
    p.name = id;
    p.employment_rate = rate;
    return p;
}

inline DutyTemplate make_duty(const std::string& id, int start, int end, bool mandatory = true) {
    DutyTemplate t;
    t.id = id;
    t.label = id;
    t.weekdays = all_days();
    t.time = {start, end};
    t.mandatory = mandatory;
    return t;
}

inline ShiftTemplate make_shift(const std::string& id, int start, int end) {
    ShiftTemplate t;
    t.id = id;
    t.label = id;
    t.weekdays = all_days();
    t.time = {start, end};
    return t;
}

/// Period of `days` days starting Monday 2026-03-02 with the given physicians.
inline RosterInstance base_instance(int days, int physicians) {
    RosterInstance inst;
    inst.department = "Test";
    inst.period.start = Date(2026, 3, 2);
    inst.period.end = inst.period.start + (days - 1);
    for (int i = 1; i <= physicians; ++i)
        inst.physicians.push_back(make_physician("p" + std::to_string(i)));
    return inst;
}

}  // namespace roster::testing
