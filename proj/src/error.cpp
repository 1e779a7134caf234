#include "iaxrsw/error.hpp"

namespace iaxrsw {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::TooShort: return "TooShort";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::CsrcPresent: return "CsrcPresent";
    case Errc::InvalidHeader: return "InvalidHeader";
    case Errc::NotMediaFrame: return "NotMediaFrame";
    case Errc::ZeroCallNumber: return "ZeroCallNumber";
    case Errc::NonIntegralRate: return "NonIntegralRate";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::UnknownCodec: return "UnknownCodec";
    case Errc::InvalidCallNumber: return "InvalidCallNumber";
    case Errc::CallNumberMismatch: return "CallNumberMismatch";
    case Errc::SsrcMismatch: return "SsrcMismatch";
    case Errc::PayloadSizeMismatch: return "PayloadSizeMismatch";
    case Errc::NonIntegralTimestamp: return "NonIntegralTimestamp";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::EmptyTrace: return "EmptyTrace";
    case Errc::CausalityViolation: return "CausalityViolation";
    case Errc::IoFailure: return "IoFailure";
    case Errc::BindFailure: return "BindFailure";
    case Errc::NotRunning: return "NotRunning";
    }
    return "Unknown";
}

} // namespace iaxrsw
