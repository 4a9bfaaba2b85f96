#pragma once

#include <stdexcept>
#include <string>

namespace twistcube {

/// Malformed or out-of-range user input (bad token, index, shape, file record).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A consistency check failed that should hold for any valid input
/// (non-closed composite, non-commuting face, D*D != 0 on a built complex).
class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace twistcube
