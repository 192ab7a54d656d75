#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttcast {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions do not line up (affine, hadamard, checkpoint loads ...).
class ShapeError : public Error {
public:
  using Error::Error;
};

// Input outside an operation's domain (empty softmax, log of a nonpositive
// value, degenerate series ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// API or command-line misuse.
class UsageError : public Error {
public:
  using Error::Error;
};

// Bad input data: CSV parse failures, duplicate cells, rejected corridors.
class DataError : public Error {
public:
  using Error::Error;
};

// Checkpoint container damaged or truncated.
class ChecksumError : public DataError {
public:
  using DataError::DataError;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& msg, std::size_t epoch, double learning_rate,
                  double last_finite_loss)
      : Error(msg), epoch(epoch), learning_rate(learning_rate),
        last_finite_loss(last_finite_loss) {}

  std::size_t epoch;
  double learning_rate;
  double last_finite_loss;
};

}  // namespace ttcast
