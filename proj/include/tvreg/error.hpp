#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tvreg {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Input / data problems (bad files, bad columns, bad series). A CLI maps
// these to exit code 3.
// ---------------------------------------------------------------------------

class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& msg, long line)
        : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

// ---------------------------------------------------------------------------
// Numerical / estimation problems. A CLI maps these to exit code 4.
// ---------------------------------------------------------------------------

class NumericError : public Error {
public:
    using Error::Error;
};

class InvalidBandwidthError : public NumericError {
public:
    using NumericError::NumericError;
};

class InvalidParamsError : public NumericError {
public:
    using NumericError::NumericError;
};

class NotImplementedError : public NumericError {
public:
    using NumericError::NumericError;
};

// Local-linear design matrix is numerically singular at some evaluation point
// (bandwidth too small for the sample size).
class SingularDesignError : public NumericError {
public:
    SingularDesignError(const std::string& msg, double x)
        : NumericError(msg + " at x=" + std::to_string(x)), x_(x) {}
    double x() const noexcept { return x_; }

private:
    double x_;
};

// Local-constant denominator vanished (e.g. all-zero residuals in a window).
class DegenerateDenominatorError : public NumericError {
public:
    DegenerateDenominatorError(const std::string& msg, double x)
        : NumericError(msg + " at x=" + std::to_string(x)), x_(x) {}
    double x() const noexcept { return x_; }

private:
    double x_;
};

class DegenerateSeriesError : public NumericError {
public:
    using NumericError::NumericError;
};

// More than half of the cross-validation centers were unusable for one
// candidate bandwidth.
class InfeasibleBandwidthError : public NumericError {
public:
    using NumericError::NumericError;
};

// Every candidate bandwidth was infeasible.
class NoFeasibleBandwidthError : public NumericError {
public:
    using NumericError::NumericError;
};

// Optimizer ran out of budget; carries the best iterate found so far.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& msg, std::vector<double> best, double value)
        : NumericError(msg), best_(std::move(best)), value_(value) {}
    const std::vector<double>& best_point() const noexcept { return best_; }
    double best_value() const noexcept { return value_; }

private:
    std::vector<double> best_;
    double value_;
};

// A violated internal invariant; indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace tvreg
