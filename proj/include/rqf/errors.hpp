#pragma once

#include <stdexcept>
#include <string>

namespace rqf {

/// Invalid argument supplied by the caller (maps to CLI exit code 2).
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured work budget (trial division, |N| for norm forms) was exceeded.
class budget_exceeded : public std::runtime_error {
public:
    explicit budget_exceeded(const std::string& what)
        : std::runtime_error("budget exceeded: " + what) {}
};

/// Floating evaluation did not land close enough to an integer.
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant failed. Always a bug or a false mathematical premise
/// (maps to CLI exit code 3).
class consistency_error : public std::logic_error {
public:
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace rqf
