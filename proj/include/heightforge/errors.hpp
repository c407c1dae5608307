#pragma once

#include <stdexcept>
#include <string>

namespace heightforge {

// Bad arguments: non-prime moduli, zero inputs, mismatched fields.
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Inputs that are well formed but degenerate for the operation (common roots, singular curves).
struct degenerate_input_error : std::domain_error {
    using std::domain_error::domain_error;
};

// The computation is legitimate but outside what is implemented (additive reduction, etc).
struct unsupported_case_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Model fails the p-minimality certificate.
struct non_minimal_model_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A point reduces to the singular point; the local height needs residual accounting.
struct residual_required_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Coordinate growth would exceed the configured digit budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Series failed to converge inside the iteration cap.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct search_exhausted_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an identity that must hold does not. Always a bug.
struct invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace heightforge
