#ifndef MCDE_ERRORS_HPP
#define MCDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcde {

enum class Errc {
    UnknownLabel,
    UnknownAtom,
    NonPositiveOrder,
    MixedComplex,
    SeedNotVanishing,
    SeedVanishes,
    NoConditions,
    SlotCapExceeded,
    InvalidBounds,
    Overflow,
    Io,
};

/// Engine-level precondition or domain failure.
class EngineError : public std::runtime_error {
public:
    EngineError(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::UnknownLabel: return "unknown label";
        case Errc::UnknownAtom: return "unknown atom";
        case Errc::NonPositiveOrder: return "non-positive order";
        case Errc::MixedComplex: return "mixed complex";
        case Errc::SeedNotVanishing: return "seed does not vanish";
        case Errc::SeedVanishes: return "seed vanishes";
        case Errc::NoConditions: return "no conditions declared";
        case Errc::SlotCapExceeded: return "slot cap exceeded";
        case Errc::InvalidBounds: return "invalid bounds";
        case Errc::Overflow: return "arithmetic overflow";
        case Errc::Io: return "i/o failure";
    }
    return "error";
}

} // namespace mcde

#endif
