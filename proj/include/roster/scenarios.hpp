#pragma once

// Bundled synthetic department instances and the seeded tiny-instance
// generator used for oracle cross-checks. All generators are deterministic
// in their seed.

#include "roster/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace roster {

/// Names accepted by make_scenario.
std::vector<std::string> scenario_names();

/// Throws ConfigError for an unknown name.
RosterInstance make_scenario(const std::string& name, std::uint64_t seed = 1);

/// Two physicians, two mandatory duties on one day, nothing else.
RosterInstance two_by_two_instance();

/// About 35 physicians over 31 days: two daily night duties, two weekend day
/// duties, optional backups, five fixed wards, fairness and simultaneity pools.
RosterInstance internal_medicine_scenario(std::uint64_t seed = 1);

/// About 30 physicians per unit of `scale`: optional ICU/CPU/function duties,
/// weekly duty and shift blocks with continuity, weekly and weekend preferences.
RosterInstance cardiology_scenario(std::uint64_t seed = 1, int scale = 1);

/// About 50 physicians, 12 fixed wards, five nights and one late duty per day.
RosterInstance orthopedics_scenario(std::uint64_t seed = 1);

struct TinyLimits {
    int max_physicians = 4;
    int max_instances = 12;
    int min_free = 4;
    int max_free = 24;
};

/// Random instance with a random subset of features. Retries internally
/// until the instance validates, builds without clashes and stays within
/// the oracle's free-decision limit.
RosterInstance random_tiny_instance(std::uint64_t seed, const TinyLimits& limits = {});

}  // namespace roster
