#pragma once

#include <stdexcept>
#include <string>

namespace sdflow {

/// Invalid user input: config keys, file contents, inconsistent dimensions.
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Breakdown at run time: non-finite fields, solver stagnation, step runaway.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sdflow
