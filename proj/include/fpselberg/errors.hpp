#pragma once

#include <stdexcept>
#include <string>

namespace fpsel {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A factorial argument left [0, p).
class out_of_range_error : public error {
public:
    out_of_range_error(long long argument, const std::string& what)
        : error(what), argument_(argument) {}
    long long argument() const noexcept { return argument_; }

private:
    long long argument_;
};

class precondition_violation : public error {
public:
    using error::error;
};

/// A dense tensor or sparse expansion would exceed the configured budget.
class capacity_exceeded : public error {
public:
    using error::error;
};

class index_out_of_caps : public error {
public:
    using error::error;
};

class invalid_exponent : public error {
public:
    using error::error;
};

class negative_exponent : public error {
public:
    using error::error;
};

class not_allowable : public error {
public:
    using error::error;
};

/// A numerator or denominator factor of a contiguous-relation product vanishes mod p.
class zero_factor : public error {
public:
    using error::error;
};

class no_path : public error {
public:
    using error::error;
};

} // namespace fpsel
