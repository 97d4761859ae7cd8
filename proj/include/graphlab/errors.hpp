#pragma once

#include <stdexcept>
#include <string>

namespace graphlab {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// phi'(0) >= 0: the increment law is critical or supercritical, no tilting root.
class no_root_error : public error {
public:
    using error::error;
};

// beta construction would place negative mass at -1 (T too large for m*P(eta=-1)).
class invalid_mass_error : public error {
public:
    using error::error;
};

// An exact DP / convolution would exceed the configured state budget.
class support_too_large_error : public error {
public:
    using error::error;
};

// Havel-Hakimi failed: no simple graph realizes the degree sequence.
class not_graphical_error : public error {
public:
    using error::error;
};

// Rejection sampler hit its attempt budget without producing a simple graph.
class attempts_exhausted_error : public error {
public:
    using error::error;
};

// An operation precondition does not hold for the given input.
class precondition_error : public error {
public:
    using error::error;
};

// Malformed experiment configuration. The message names the offending field.
class config_error : public error {
public:
    using error::error;
};

} // namespace graphlab
