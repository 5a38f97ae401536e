#pragma once

#include <stdexcept>
#include <string>

namespace fcrystal {

// Domain errors map to CLI exit code 2, precision errors to exit code 3.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class PrecisionError : public DomainError {
public:
    explicit PrecisionError(const std::string& what) : DomainError("PrecisionLoss", what) {}
};

#define FCRYSTAL_DOMAIN_ERROR(Name)                                          \
    class Name : public DomainError {                                        \
    public:                                                                  \
        explicit Name(const std::string& what) : DomainError(#Name, what) {} \
    }

FCRYSTAL_DOMAIN_ERROR(InvalidParams);
FCRYSTAL_DOMAIN_ERROR(ExtensionBudgetExceeded);
FCRYSTAL_DOMAIN_ERROR(NotDominant);
FCRYSTAL_DOMAIN_ERROR(NotInGroup);
FCRYSTAL_DOMAIN_ERROR(NotIntegral);
FCRYSTAL_DOMAIN_ERROR(NotInDoubleCoset);
FCRYSTAL_DOMAIN_ERROR(NotOrdinary);
FCRYSTAL_DOMAIN_ERROR(BigCellFailure);
FCRYSTAL_DOMAIN_ERROR(NotNormalForm);
FCRYSTAL_DOMAIN_ERROR(NotLiftOfF);
FCRYSTAL_DOMAIN_ERROR(NotAdapted);
FCRYSTAL_DOMAIN_ERROR(BadIndices);
FCRYSTAL_DOMAIN_ERROR(DifferentFibers);
FCRYSTAL_DOMAIN_ERROR(ParseError);

#undef FCRYSTAL_DOMAIN_ERROR

}  // namespace fcrystal
