#ifndef JTS_ERRORS_HPP
#define JTS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jts {

/**
 * @brief Base class for all named failures of the library.
 *
 * code() returns the stable failure name used in CLI messages and JSON
 * diagnostics; what() carries the human-readable detail.
 */
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define JTS_DEFINE_ERROR(Name)                                    \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& detail)                  \
            : Error(#Name, detail) {}                             \
    }

JTS_DEFINE_ERROR(DimensionTooSmall);
JTS_DEFINE_ERROR(ConvergenceFailure);
JTS_DEFINE_ERROR(PoleProximity);
JTS_DEFINE_ERROR(DivisionByZero);
JTS_DEFINE_ERROR(IndeterminateInterlacing);
JTS_DEFINE_ERROR(WrongMode);
JTS_DEFINE_ERROR(NonPositiveTau);
JTS_DEFINE_ERROR(NormalizationFailure);
JTS_DEFINE_ERROR(SpectrumMismatch);
JTS_DEFINE_ERROR(BreakdownBelowTolerance);
JTS_DEFINE_ERROR(NumericalBlowup);
JTS_DEFINE_ERROR(IllConditionedFit);
JTS_DEFINE_ERROR(ParseError);

#undef JTS_DEFINE_ERROR

} // namespace jts

#endif // JTS_ERRORS_HPP
