#pragma once

#include <stdexcept>
#include <string>

namespace vls {

// Error taxonomy, one class per CLI exit code family:
// validation (bad parameters / domain violations), io (files and parsing),
// numeric (instability and other numerical failures).

class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Incidence angle at or beyond the detector's half-power semi-angle.
class field_of_view_error : public validation_error {
public:
    explicit field_of_view_error(const std::string& what) : validation_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

class parse_error : public io_error {
public:
    parse_error(const std::string& what, std::size_t line)
        : io_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// IIR coefficients with a pole on or outside the unit circle.
class stability_error : public numeric_error {
public:
    explicit stability_error(const std::string& what) : numeric_error(what) {}
};

}  // namespace vls
