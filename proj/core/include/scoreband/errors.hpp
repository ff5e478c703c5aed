#ifndef SCOREBAND_ERRORS_HPP
#define SCOREBAND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scoreband {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation (bad model
// parameters, probabilities outside [0,1], and similar).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Input data contains NaN or infinity where finite reals are required.
class NonFiniteInput : public DomainError {
public:
    explicit NonFiniteInput(const std::string& what) : DomainError(what) {}
};

// Bandwidth must be strictly positive.
class NonPositiveBandwidth : public DomainError {
public:
    explicit NonPositiveBandwidth(const std::string& what) : DomainError(what) {}
};

// Operation requires a minimum sample size (n >= 3 throughout).
class SampleTooSmall : public DomainError {
public:
    explicit SampleTooSmall(const std::string& what) : DomainError(what) {}
};

// Adaptive quadrature could not reach the requested tolerance in budget.
class QuadratureNonconvergence : public Error {
public:
    explicit QuadratureNonconvergence(const std::string& what) : Error(what) {}
};

// Evaluation point outside the curve's grid range.
class OutOfGrid : public Error {
public:
    explicit OutOfGrid(const std::string& what) : Error(what) {}
};

// Malformed text input (data files, configs); carries a 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line) : Error(what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

}  // namespace scoreband

#endif
