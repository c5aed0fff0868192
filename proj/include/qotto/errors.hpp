#pragma once

#include <stdexcept>
#include <string>

namespace qotto {

// Base of every library error. kind() is the stable error name that the CLI
// echoes in its messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define QOTTO_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

QOTTO_DEFINE_ERROR(NonPhysicalState);
QOTTO_DEFINE_ERROR(InvalidTemperature);
QOTTO_DEFINE_ERROR(DegenerateScale);
QOTTO_DEFINE_ERROR(UndefinedTimescale);
QOTTO_DEFINE_ERROR(NoContraction);
QOTTO_DEFINE_ERROR(InvalidSigma);
QOTTO_DEFINE_ERROR(InfeasibleSchedule);
QOTTO_DEFINE_ERROR(InvalidArgument);
QOTTO_DEFINE_ERROR(ClosureViolation);

#undef QOTTO_DEFINE_ERROR

// Configuration errors carry a 1-based line number (0 when not tied to a line).
class ParseError : public Error {
 public:
  ParseError(int line, std::string key, const std::string& message)
      : Error("ParseError", format(line, key, message)), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(int line, const std::string& key, const std::string& message) {
    std::string out = "line " + std::to_string(line);
    if (!key.empty()) out += " key '" + key + "'";
    return out + ": " + message;
  }
  int line_;
  std::string key_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& message)
      : Error("ValidationError", (key.empty() ? message : key + ": " + message)),
        key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace qotto
