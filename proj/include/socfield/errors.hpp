#pragma once

#include <stdexcept>
#include <string>

namespace socfield {

/// Scenario text could not be parsed. `line` is 1-based, 0 if unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A configuration value violates a documented constraint. `field` names the offender.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, std::string msg)
        : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Population placement failed (density too high for the footprint).
class SeedingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulation-state invariant was violated. Carries tick and phase for diagnosis.
class IntegrityError : public std::runtime_error {
public:
    IntegrityError(std::string msg, long tick = -1, int phase = 0)
        : std::runtime_error("tick " + std::to_string(tick) + " phase k-" +
                             std::to_string(phase) + ": " + msg),
          tick_(tick), phase_(phase) {}
    long tick() const noexcept { return tick_; }
    int phase() const noexcept { return phase_; }

private:
    long tick_;
    int phase_;
};

} // namespace socfield
