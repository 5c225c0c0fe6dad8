#pragma once

#include <stdexcept>
#include <string>

namespace forge {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text; carries the 1-based line where parsing stopped.
class parse_error : public error {
public:
    parse_error(const std::string& msg, int line)
        : error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Structurally invalid data: bad indices, length mismatches, non-manifold surfaces.
class validation_error : public error {
public:
    using error::error;
};

// Cell types the pipeline cannot model (anything but linear tetrahedra).
class unsupported_cell_error : public error {
public:
    using error::error;
};

// Tensor / layer shape incompatibilities.
class dim_error : public error {
public:
    using error::error;
};

// Non-finite values where finite ones are required.
class numeric_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

}  // namespace forge
