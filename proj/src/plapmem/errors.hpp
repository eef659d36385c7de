#pragma once

#include <stdexcept>
#include <string>

namespace plapmem {

/// Failure categories. The numeric values double as process exit codes.
enum class ErrorCode : int {
    Config = 2,
    Divergence = 3,
    LinearSolve = 4,
    Io = 5,
    NumericInput = 6,
    IllPosedStep = 7,
    OutOfRange = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCode::Config, what) {}
};

class OutOfRangeError : public Error {
public:
    explicit OutOfRangeError(const std::string& what) : Error(ErrorCode::OutOfRange, what) {}
};

class LinearSolveError : public Error {
public:
    explicit LinearSolveError(const std::string& what) : Error(ErrorCode::LinearSolve, what) {}
};

class IllPosedStepError : public Error {
public:
    explicit IllPosedStepError(const std::string& what) : Error(ErrorCode::IllPosedStep, what) {}
};

class NumericInputError : public Error {
public:
    explicit NumericInputError(const std::string& what) : Error(ErrorCode::NumericInput, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

/// Fixed-point iteration hit its cap. Carries enough context to report which
/// step failed and how the iteration was behaving when it gave up.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, int step, int iterations, double last_ratio)
        : Error(ErrorCode::Divergence, what),
          step_(step),
          iterations_(iterations),
          last_ratio_(last_ratio) {}

    int step() const noexcept { return step_; }
    int iterations() const noexcept { return iterations_; }
    double last_ratio() const noexcept { return last_ratio_; }

private:
    int step_;
    int iterations_;
    double last_ratio_;
};

}  // namespace plapmem
