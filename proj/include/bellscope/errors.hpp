#ifndef BELLSCOPE_ERRORS_HPP
#define BELLSCOPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bellscope
{

// Input violates a documented precondition (range, normalization, Hermiticity).
class validation_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Operand dimensions are incompatible.
class shape_error : public validation_error
{
public:
    using validation_error::validation_error;
};

// Requested dimension exceeds the supported cap.
class sizing_error : public validation_error
{
public:
    using validation_error::validation_error;
};

// Operators declared Classical do not commute.
class regime_violation : public validation_error
{
public:
    using validation_error::validation_error;
};

} // namespace bellscope

#endif
