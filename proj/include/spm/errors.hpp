#pragma once

#include <stdexcept>
#include <string>

namespace spm {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Triangulation input has all points on one line; callers typically fall
// back to knn_graph.
class collinear_input : public error {
public:
    using error::error;
};

// Two points with identical coordinates where distinct points are required.
class duplicate_points : public error {
public:
    using error::error;
};

// The quadratic objective vanished (W annihilates vec(X)); the multiplicative
// update is undefined at alpha = 0.
class degenerate_objective : public error {
public:
    using error::error;
};

// A solver iterate produced a non-finite entry.
class non_finite_entry : public error {
public:
    using error::error;
};

class dimension_mismatch : public error {
public:
    using error::error;
};

class invalid_argument : public error {
public:
    using error::error;
};

// Instance-file parsing/validation failure; the message names the field.
class parse_error : public error {
public:
    using error::error;
};

} // namespace spm
