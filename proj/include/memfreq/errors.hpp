#ifndef MEMFREQ_ERRORS_HPP
#define MEMFREQ_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace memfreq {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A frequency or other argument lies outside the domain of a model equation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Model parameters violate their invariants (negative, non-finite, ...).
class InvalidModel : public Error {
public:
    using Error::Error;
};

/// Too few (or too clustered) samples for a fit.
class InsufficientData : public Error {
public:
    using Error::Error;
};

class SizeMismatch : public Error {
public:
    using Error::Error;
};

/// An operation needs a device power model that the configuration omitted.
class MissingPowerModel : public Error {
public:
    explicit MissingPowerModel(const std::string& device)
        : Error("device '" + device + "' has no power model"), device_(device) {}

    const std::string& device() const noexcept { return device_; }

private:
    std::string device_;
};

/// Malformed input text. `line` is 1-based; 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input whose values break a domain invariant. `field` names the
/// offending field (a CSV column or a config path such as `device[0].mem_range`).
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what, std::size_t line = 0)
        : Error(format(field, what, line)), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& field, const std::string& what, std::size_t line) {
        std::string msg;
        if (line) msg += "line " + std::to_string(line) + ": ";
        msg += field + ": " + what;
        return msg;
    }

    std::string field_;
    std::size_t line_;
};

} // namespace memfreq

#endif // MEMFREQ_ERRORS_HPP
