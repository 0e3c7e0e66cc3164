#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace amenlab {

enum class Errc {
    invalid_dimension,
    invalid_constant,
    invalid_input,
    incompatible_windows,
    incompatible_middle,
    invalid_family,
    stage_exhausted,
    not_periodic,
    parse_error,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::invalid_constant: return "invalid-constant";
    case Errc::invalid_input: return "invalid-input";
    case Errc::incompatible_windows: return "incompatible-windows";
    case Errc::incompatible_middle: return "incompatible-middle";
    case Errc::invalid_family: return "invalid-family";
    case Errc::stage_exhausted: return "stage-exhausted";
    case Errc::not_periodic: return "not-periodic";
    case Errc::parse_error: return "parse-error";
    }
    return "unknown";
}

/// Exception carrying a machine-readable error code alongside the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace amenlab
