#pragma once

#include <stdexcept>
#include <string>

namespace mcdim {

// Numeric-regime failures. The CLI maps this family to exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct pole_error : numeric_error {
    using numeric_error::numeric_error;
};
struct branch_point_error : numeric_error {
    using numeric_error::numeric_error;
};
struct ambiguous_root_error : numeric_error {
    using numeric_error::numeric_error;
};
struct convergence_error : numeric_error {
    using numeric_error::numeric_error;
};
struct regime_error : numeric_error {
    using numeric_error::numeric_error;
};
struct bracket_error : numeric_error {
    using numeric_error::numeric_error;
};
struct duplicate_point_error : numeric_error {
    using numeric_error::numeric_error;
};
struct degenerate_fit_error : numeric_error {
    using numeric_error::numeric_error;
};

// I/O failures. CLI exit code 4. Config errors use std::invalid_argument (exit 2).
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mcdim
