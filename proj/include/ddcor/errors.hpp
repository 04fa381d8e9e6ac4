#pragma once

#include <stdexcept>
#include <string>

namespace ddcor {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few observations for the requested statistic.
class insufficient_sample_error : public error {
public:
    using error::error;
};

/// Non-finite entries or mismatched shapes in input data.
class invalid_data_error : public error {
public:
    using error::error;
};

/// All-equal conditioning variable where the statistic is undefined.
class degenerate_response_error : public error {
public:
    using error::error;
};

/// All rows of the sample equal; scale-dependent quantities undefined.
class degenerate_sample_error : public error {
public:
    using error::error;
};

/// Estimated variance is zero; the asymptotic test statistic is undefined.
class degenerate_variance_error : public error {
public:
    using error::error;
};

/// Out-of-range method parameter (bandwidth, sigma_sq, permutation count...).
class invalid_parameter_error : public error {
public:
    using error::error;
};

/// Dimensionality constraint violated (e.g. univariate-only method).
class invalid_dimension_error : public error {
public:
    using error::error;
};

/// Generic precondition failure on caller-supplied structures.
class invalid_input_error : public error {
public:
    using error::error;
};

/// Bad run configuration (unknown keys, missing columns, bad flag values).
class config_error : public error {
public:
    using error::error;
};

/// Malformed input file.
class parse_error : public error {
public:
    using error::error;
};

} // namespace ddcor
