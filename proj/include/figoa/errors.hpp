#pragma once

#include <stdexcept>
#include <string>

namespace figoa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Hash input is empty or not a multiple of the 64-byte block size.
class MisalignedInput : public Error {
public:
  using Error::Error;
};

/// Declared total length disagrees with absorbed bytes plus tail.
class LengthMismatch : public Error {
public:
  using Error::Error;
};

/// Serialized hash state is malformed.
class BadStateEncoding : public Error {
public:
  using Error::Error;
};

/// Packet ends before a declared length is satisfied.
class Truncated : public Error {
public:
  using Error::Error;
};

/// Top-level or field type code is not recognized.
class UnknownType : public Error {
public:
  using Error::Error;
};

/// A decoded packet violates a structural invariant.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

/// MTU cannot accommodate a fragment header plus one data block.
class MtuTooSmall : public Error {
public:
  using Error::Error;
};

/// Reassembly attempted with bytes still missing.
class Incomplete : public Error {
public:
  using Error::Error;
};

/// Signature scheme id is not supported.
class UnsupportedScheme : public Error {
public:
  using Error::Error;
};

/// Simulation topology fails validation.
class InvalidTopology : public Error {
public:
  using Error::Error;
};

/// Simulation config file cannot be parsed.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace figoa
