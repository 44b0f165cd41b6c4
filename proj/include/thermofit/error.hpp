#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermofit {

// Coarse error classes; the CLI maps each one to its own exit status.
enum class ErrorCategory {
    InvalidArgument,
    DegenerateData,
    Numerical,
    Input,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what)
        : Error(ErrorCategory::InvalidArgument, what) {}
};

// Forward-rectangle discretization with Ts >= 2*tau puts the pole outside the unit circle.
class UnstableDiscretization : public Error {
public:
    explicit UnstableDiscretization(const std::string& what)
        : Error(ErrorCategory::InvalidArgument, what) {}
};

// Data shorter than the smoothing window.
class SeriesTooShort : public Error {
public:
    SeriesTooShort(std::size_t length, std::size_t window)
        : Error(ErrorCategory::InvalidArgument,
                "series of " + std::to_string(length) + " samples is shorter than the " +
                    std::to_string(window) + "-sample smoothing window"),
          length_(length), window_(window) {}

    std::size_t length() const noexcept { return length_; }
    std::size_t window() const noexcept { return window_; }

private:
    std::size_t length_;
    std::size_t window_;
};

class DegenerateData : public Error {
public:
    explicit DegenerateData(const std::string& what)
        : Error(ErrorCategory::DegenerateData, what) {}
};

// Damped normal equations that are singular, indefinite or produce non-finite values.
class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& what)
        : Error(ErrorCategory::Numerical, what) {}
};

class FileError : public Error {
public:
    explicit FileError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};

// Malformed CSV content. line() is 1-based; 0 when the problem is not tied to a line.
class CsvError : public Error {
public:
    CsvError(std::size_t line, const std::string& what)
        : Error(ErrorCategory::Input,
                line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace thermofit
