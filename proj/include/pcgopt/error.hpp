#ifndef PCGOPT_ERROR_HPP
#define PCGOPT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pcgopt {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied parameter is outside its valid range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not continue (nonpositive pivot, indefinite
/// operator, non-convergence, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Incomplete factorization hit a nonpositive pivot.
class BreakdownError : public NumericalError {
 public:
  BreakdownError(const std::string& what, std::size_t row)
      : NumericalError(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace pcgopt

#endif  // PCGOPT_ERROR_HPP
