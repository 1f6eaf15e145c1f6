#pragma once

#include <stdexcept>
#include <string>

namespace mixrate {

// Exit-code class carried by every library error.
enum class ErrorClass { Config = 2, Numerical = 3, Internal = 4 };

class Error : public std::runtime_error {
public:
    Error(std::string name, ErrorClass cls, const std::string& msg)
        : std::runtime_error(name + ": " + msg), name_(std::move(name)), cls_(cls) {}
    const std::string& name() const { return name_; }
    ErrorClass error_class() const { return cls_; }

private:
    std::string name_;
    ErrorClass cls_;
};

#define MIXRATE_ERROR(Name, Cls)                                            \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& msg) : Error(#Name, Cls, msg) {}   \
    };

MIXRATE_ERROR(InvalidSpec, ErrorClass::Config)
MIXRATE_ERROR(InvalidParameter, ErrorClass::Config)
MIXRATE_ERROR(DegenerateCertificate, ErrorClass::Config)
MIXRATE_ERROR(InconsistentData, ErrorClass::Config)
MIXRATE_ERROR(NotMixing, ErrorClass::Config)
MIXRATE_ERROR(NotCoprime, ErrorClass::Config)
MIXRATE_ERROR(NotIntegrable, ErrorClass::Config)
MIXRATE_ERROR(NotMeanZero, ErrorClass::Config)
MIXRATE_ERROR(NotPositive, ErrorClass::Config)
MIXRATE_ERROR(NotDominated, ErrorClass::Config)
MIXRATE_ERROR(NotYetValid, ErrorClass::Config)
MIXRATE_ERROR(UseMixingPath, ErrorClass::Config)
MIXRATE_ERROR(NotInB, ErrorClass::Numerical)
MIXRATE_ERROR(NoConvergence, ErrorClass::Numerical)
MIXRATE_ERROR(ErrorBudgetExceeded, ErrorClass::Numerical)
MIXRATE_ERROR(CouplingBroken, ErrorClass::Numerical)
MIXRATE_ERROR(NoFeasibleRate, ErrorClass::Numerical)
MIXRATE_ERROR(IOError, ErrorClass::Numerical)
MIXRATE_ERROR(InternalError, ErrorClass::Internal)

#undef MIXRATE_ERROR

}  // namespace mixrate
