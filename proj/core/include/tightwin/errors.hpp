#pragma once

#include <stdexcept>
#include <string>

namespace tightwin {

/// Base class for all tightwin-specific failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input vectors/matrices do not match the lattice geometry.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The frame-operator diagonal has a (near-)zero entry: the window misses an
/// entire residue class modulo the hop and cannot be projected to a tight one.
class ZeroFrameDiagonal : public Error {
public:
    using Error::Error;
};

/// A tight window was required but the tightness test failed.
class NotTight : public Error {
public:
    using Error::Error;
};

/// A base point expected on the product-of-spheres manifold is off it.
class OffManifoldError : public Error {
public:
    using Error::Error;
};

/// The Newton system could not be solved to tolerance.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Retraction hit a block with w_l + v_l == 0 (step of pathological length).
class ZeroBlock : public Error {
public:
    using Error::Error;
};

/// A NewtonSystem snapshot was used with a different base point.
class StaleSystem : public Error {
public:
    using Error::Error;
};

/// A vector failed the tangent-space membership check.
class NotTangent : public Error {
public:
    using Error::Error;
};

/// The dense symmetric eigensolver did not converge.
class EigenSolverFailure : public Error {
public:
    using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A file was readable but does not match its documented schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace tightwin
