#pragma once

#include <stdexcept>
#include <string>

namespace metaori {

enum class ErrorKind {
    InvalidParams,
    DegeneratePattern,
    InfeasibleFold,
    ClosureFailure,
    InfeasibleHeight,
    SelfIntersection,
    OutOfDomain,
    GeometryConflict,
    WrapFailure,
    FitError,
    AlignmentError,
    InvalidMesh,
    EmptyMesh,
    ParseError,
    TruncatedFile,
    ModelDomain,
    NoConvergence,
    DomainMismatch,
    OpenCavity,
    DegenerateVolumeMap,
    NoEquilibrium,
    NotBistable,
    SchemaError,
    UnitError,
    InvariantError,
    BadPath,
    IoError
};

inline const char* kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DegeneratePattern: return "DegeneratePattern";
    case ErrorKind::InfeasibleFold: return "InfeasibleFold";
    case ErrorKind::ClosureFailure: return "ClosureFailure";
    case ErrorKind::InfeasibleHeight: return "InfeasibleHeight";
    case ErrorKind::SelfIntersection: return "SelfIntersection";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::GeometryConflict: return "GeometryConflict";
    case ErrorKind::WrapFailure: return "WrapFailure";
    case ErrorKind::FitError: return "FitError";
    case ErrorKind::AlignmentError: return "AlignmentError";
    case ErrorKind::InvalidMesh: return "InvalidMesh";
    case ErrorKind::EmptyMesh: return "EmptyMesh";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::ModelDomain: return "ModelDomain";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::OpenCavity: return "OpenCavity";
    case ErrorKind::DegenerateVolumeMap: return "DegenerateVolumeMap";
    case ErrorKind::NoEquilibrium: return "NoEquilibrium";
    case ErrorKind::NotBistable: return "NotBistable";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnitError: return "UnitError";
    case ErrorKind::InvariantError: return "InvariantError";
    case ErrorKind::BadPath: return "BadPath";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg)
{
    if (!cond) fail(kind, msg);
}

} // namespace metaori
