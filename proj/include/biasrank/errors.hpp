#pragma once

#include <stdexcept>

namespace biasrank {

// Base class of every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Input file could not be parsed; message names the line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Pipeline stage invoked out of order (raw -> deduplicated -> identified).
class StageOrderError : public Error {
 public:
  using Error::Error;
};

// Too few items for the requested number of rounds.
class BudgetInfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConfigError : public Error {
 public:
  using Error::Error;
};

// Replay judge has no stored judgment for the requested input.
class ReplayMissError : public Error {
 public:
  using Error::Error;
};

// Judge produced no usable answer within the retry limit.
class JudgeProtocolError : public Error {
 public:
  using Error::Error;
};

// Network-level failure talking to a remote judge; retriable.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Cohen's kappa is undefined when chance agreement is exactly 1.
class UndefinedKappaError : public Error {
 public:
  using Error::Error;
};

}  // namespace biasrank
