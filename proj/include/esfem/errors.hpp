#pragma once

#include <stdexcept>
#include <string>

namespace esfem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate level set gradients, failed projections, degenerate triangles.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Linear solver breakdown or residual above tolerance.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appearing during a simulation.
class BlowUpError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent problem or experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace esfem
