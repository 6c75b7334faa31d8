#pragma once

#include <stdexcept>
#include <string>

namespace fqmag {

// Base error carrying a stable short code; what() is "<Code>: <detail>".
// CLI maps any Error to exit status 2 and prints what().
class Error : public std::runtime_error {
public:
    Error(const std::string& code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(code) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define FQMAG_ERROR(Name)                                                  \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& detail) : Error(#Name, detail) {} \
    }

FQMAG_ERROR(CharTwo);
FQMAG_ERROR(NotPrime);
FQMAG_ERROR(TooLarge);
FQMAG_ERROR(TrivialTwist);
FQMAG_ERROR(DimensionMismatch);
FQMAG_ERROR(BadSpec);
FQMAG_ERROR(SizeMismatch);
FQMAG_ERROR(OddDimension);
FQMAG_ERROR(MissingSphere);
FQMAG_ERROR(EmptySphere);
FQMAG_ERROR(RoundingOverflow);
FQMAG_ERROR(DegenerateSet);
FQMAG_ERROR(BadDimension);
FQMAG_ERROR(HypothesisFail);
FQMAG_ERROR(ZeroRadius);
FQMAG_ERROR(ConfigInvalid);

#undef FQMAG_ERROR

} // namespace fqmag
