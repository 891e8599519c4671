#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace roster {

/// Invalid or inconsistent department configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed instance, roster or report document.
class DocumentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fair pool whose members are absent on every pool-duty day.
class DegeneratePoolError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A manual assignment contradicts a hard rule; detected while building the model.
class BuildInfeasibleError : public std::runtime_error {
public:
    explicit BuildInfeasibleError(std::vector<std::string> clashes)
        : std::runtime_error(join(clashes)), clashes_(std::move(clashes)) {}
    const std::vector<std::string>& clashes() const { return clashes_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "infeasible manual assignments:";
        for (const auto& c : v)
            s += "\n  " + c;
        return s;
    }
    std::vector<std::string> clashes_;
};

/// Solver executable missing or not runnable.
class SolverEnvironmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solver output could not be understood.
class SolverProtocolError : public std::runtime_error {
public:
    SolverProtocolError(const std::string& what, std::string captured)
        : std::runtime_error(what), captured_(std::move(captured)) {}
    const std::string& captured() const { return captured_; }

private:
    std::string captured_;
};

/// Model exceeds what the exhaustive oracle will enumerate.
class OracleSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A binary variable came back fractional beyond tolerance.
class IntegralityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Optimistic concurrency check failed.
class VersionConflictError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace roster
