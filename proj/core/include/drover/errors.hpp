#pragma once

#include <stdexcept>
#include <string>

namespace drover {

// Stable error categories, mapped 1:1 to CLI exit codes.
enum class ErrorCode : int {
    config_parse = 2,
    config_invalid = 3,
    model_runtime = 4,
    shooting_failed = 5,
    io_failed = 6,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

class ConfigParseError : public Error {
  public:
    explicit ConfigParseError(const std::string& message)
        : Error(ErrorCode::config_parse, message) {}
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& message)
        : Error(ErrorCode::config_invalid, message) {}
};

// Runtime failures of the model itself: collision-like separations,
// non-finite states, malformed control schedules.
class ModelError : public Error {
  public:
    explicit ModelError(const std::string& message)
        : Error(ErrorCode::model_runtime, message) {}
};

class ShootingError : public Error {
  public:
    explicit ShootingError(const std::string& message)
        : Error(ErrorCode::shooting_failed, message) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& message)
        : Error(ErrorCode::io_failed, message) {}
};

}  // namespace drover
