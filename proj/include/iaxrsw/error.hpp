#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iaxrsw {

enum class Errc {
    // packet_codecs
    TooShort,
    UnsupportedVersion,
    CsrcPresent,
    InvalidHeader,
    NotMediaFrame,
    ZeroCallNumber,
    // framing
    NonIntegralRate,
    InvalidProfile,
    UnknownCodec,
    // translator
    InvalidCallNumber,
    CallNumberMismatch,
    SsrcMismatch,
    PayloadSizeMismatch,
    NonIntegralTimestamp,
    // simnet / metrics
    InvalidConfig,
    EmptyTrace,
    CausalityViolation,
    IoFailure,
    // udp_gateway
    BindFailure,
    NotRunning,
};

std::string_view to_string(Errc code) noexcept;

/// Typed failure raised by every module. `code()` is stable; `what()` is
/// free-form context for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    explicit Error(Errc code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace iaxrsw
