#pragma once

#include <stdexcept>
#include <string>

namespace sanisim {

// Every failure mode raised by the simulator stack. Kind names are stable
// strings: they appear verbatim in trace reports and in the C API.
enum class ErrorKind {
    InvalidGeometry,
    IndexOutOfRange,
    BlockRetired,
    NopExceeded,
    NoReachableLevel,
    RegionOutOfBounds,
    LengthMismatch,
    NotPrimitive,
    CapacityExceeded,
    MaskInfeasible,
    PulseBudgetExhausted,
    MaskInfeasibleAndFallbackFailed,
    Unmapped,
    ReadFail,
    DeviceFull,
    NoVictim,
    ParseError,
    ConfigError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace sanisim
