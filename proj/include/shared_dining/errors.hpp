#pragma once

#include <stdexcept>
#include <string>

namespace shared_dining {

// Base of every error raised by the library. Division by a zero field element
// is reported separately as std::domain_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// More participants than the field has non-zero evaluation points.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A message or payload has the wrong length (including empty).
class LengthError : public Error {
 public:
  using Error::Error;
};

// Fewer shares than the threshold.
class ThresholdError : public Error {
 public:
  using Error::Error;
};

// Malformed arguments: duplicate share indices, mismatched lengths, bad sets.
class InputError : public Error {
 public:
  using Error::Error;
};

// A group or experiment configuration violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A protocol step could not complete, e.g. a message is missing.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Truncated or inconsistent framed / wire data.
class FramingError : public Error {
 public:
  using Error::Error;
};

// The anonymity probe found a state that an honest transcript cannot produce.
class ProbeError : public Error {
 public:
  using Error::Error;
};

}  // namespace shared_dining
