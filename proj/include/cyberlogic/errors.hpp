#pragma once

#include <stdexcept>
#include <string>

namespace cyberlogic {

enum class ErrorCode {
  UnknownAuthority,
  NestingLimitExceeded,
  SelfDelegation,
  ClockRegression,
  TimestampMismatch,
  UnknownCountry,
  UnknownVisa,
  EmptyQueryList,
  NotConsulate,
  NoMatchingDemand,
  NotOfficer,
  NotCurrentTime,
  BadFixture,
  BadLedgerFile,
};

const char* error_code_name(ErrorCode code);

struct EngineError : std::runtime_error {
  EngineError(ErrorCode c, const std::string& what)
      : std::runtime_error(std::string(error_code_name(c)) + ": " + what), code(c) {}
  ErrorCode code;
};

}  // namespace cyberlogic
