#pragma once

#include <stdexcept>
#include <string>

namespace bellcheck {

/// Malformed or unusable user input (files, configuration, flags).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bellcheck
