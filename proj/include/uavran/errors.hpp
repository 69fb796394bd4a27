#pragma once

#include <stdexcept>
#include <string>

namespace uavran {

/// A model parameter is out of its domain (bad efficiency, unknown RIS bit width, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Scenario, weather or instance input failed validation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested computation is too large for an exhaustive method.
class SizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace uavran
