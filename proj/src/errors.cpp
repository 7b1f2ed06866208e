#include "evgrip/errors.hpp"

namespace evgrip {

const char* err_name(Err e) {
  switch (e) {
    case Err::UnsortedEvents: return "UnsortedEvents";
    case Err::CoordinateOutOfRange: return "CoordinateOutOfRange";
    case Err::IoFailure: return "IoFailure";
    case Err::BadMagic: return "BadMagic";
    case Err::UnsupportedVersion: return "UnsupportedVersion";
    case Err::TruncatedRecord: return "TruncatedRecord";
    case Err::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case Err::InvalidPolarity: return "InvalidPolarity";
    case Err::ZeroWindow: return "ZeroWindow";
    case Err::EmptyGeometry: return "EmptyGeometry";
    case Err::NoContact: return "NoContact";
    case Err::NonFiniteError: return "NonFiniteError";
    case Err::NegativeForce: return "NegativeForce";
    case Err::NonPositiveDt: return "NonPositiveDt";
    case Err::GeometryMismatch: return "GeometryMismatch";
    case Err::PayloadTooLarge: return "PayloadTooLarge";
    case Err::UnknownType: return "UnknownType";
    case Err::LengthMismatch: return "LengthMismatch";
    case Err::InvalidPayload: return "InvalidPayload";
    case Err::RoleConflict: return "RoleConflict";
    case Err::HandshakeTimeout: return "HandshakeTimeout";
    case Err::UnexpectedMessage: return "UnexpectedMessage";
    case Err::ProtocolError: return "ProtocolError";
    case Err::ConfigInvalid: return "ConfigInvalid";
    case Err::NetworkFailure: return "NetworkFailure";
    case Err::MaskFailure: return "MaskFailure";
  }
  return "UnknownError";
}

}  // namespace evgrip
