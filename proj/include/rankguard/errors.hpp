#pragma once

#include <stdexcept>
#include <string>

namespace rankguard {

/// Base class for all library errors. exit_code() maps onto the CLI
/// taxonomy: 1 for data-dependent problems, 2 for schema/config problems.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 1; }
};

/// Malformed input: bad file contents, length mismatches, out-of-range
/// indices. Carries a location (file + row or JSON path) and field when known.
class SchemaError : public Error {
public:
    SchemaError(std::string file, std::string location, std::string field,
                const std::string& message)
        : Error(compose(file, location, field, message)),
          file_(std::move(file)),
          location_(std::move(location)),
          field_(std::move(field)) {}

    explicit SchemaError(const std::string& message)
        : SchemaError("", "", "", message) {}

    int exit_code() const override { return 2; }
    const std::string& file() const { return file_; }
    const std::string& location() const { return location_; }
    const std::string& field() const { return field_; }

private:
    static std::string compose(const std::string& file, const std::string& location,
                               const std::string& field, const std::string& message) {
        std::string out;
        if (!file.empty()) out += file + ": ";
        if (!location.empty()) out += location + ": ";
        if (!field.empty()) out += "field '" + field + "': ";
        return out + message;
    }

    std::string file_;
    std::string location_;
    std::string field_;
};

/// Invalid generator or estimator configuration.
class InvalidConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 2; }
};

/// A requested coordinate (architecture, run, split, ...) is absent.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// An operation received no data to work on.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Input is present but statistically degenerate (e.g. zero rank variance).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

}  // namespace rankguard
