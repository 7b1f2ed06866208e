#pragma once

#include <stdexcept>
#include <string>

namespace evgrip {

enum class Err {
  UnsortedEvents,
  CoordinateOutOfRange,
  IoFailure,
  BadMagic,
  UnsupportedVersion,
  TruncatedRecord,
  NonMonotonicTimestamp,
  InvalidPolarity,
  ZeroWindow,
  EmptyGeometry,
  NoContact,
  NonFiniteError,
  NegativeForce,
  NonPositiveDt,
  GeometryMismatch,
  PayloadTooLarge,
  UnknownType,
  LengthMismatch,
  InvalidPayload,
  RoleConflict,
  HandshakeTimeout,
  UnexpectedMessage,
  ProtocolError,
  ConfigInvalid,
  NetworkFailure,
  MaskFailure,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what),
        code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace evgrip
