#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entlab {

enum class ErrorCode {
    ZeroNorm,
    NotHermitian,
    NotPSD,
    TraceNotOne,
    NotNormalized,
    DimensionMismatch,
    NotPSDResult,
    NotUnitNorm,
    DivergentElement,
    InvalidArgument,
    StateExplosion,
    GridAliasing,
    InsufficientData,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroNorm: return "ZeroNorm";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::TraceNotOne: return "TraceNotOne";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotPSDResult: return "NotPSDResult";
        case ErrorCode::NotUnitNorm: return "NotUnitNorm";
        case ErrorCode::DivergentElement: return "DivergentElement";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::StateExplosion: return "StateExplosion";
        case ErrorCode::GridAliasing: return "GridAliasing";
        case ErrorCode::InsufficientData: return "InsufficientData";
    }
    return "Unknown";
}

// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// beta_ij = rho_after_ij / rho_before_ij has a zero denominator with a nonzero numerator.
class DivergentElementError : public Error {
public:
    DivergentElementError(std::size_t row, std::size_t col)
        : Error(ErrorCode::DivergentElement,
                "element (" + std::to_string(row) + "," + std::to_string(col) + ") diverges"),
          row_(row), col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

class StateExplosionError : public Error {
public:
    StateExplosionError(double reached_time, std::size_t terms)
        : Error(ErrorCode::StateExplosion,
                "term count " + std::to_string(terms) + " exceeded cap at tau=" +
                    std::to_string(reached_time)),
          reached_time_(reached_time), terms_(terms) {}

    // Last time for which a complete state was available.
    double reached_time() const noexcept { return reached_time_; }
    std::size_t terms() const noexcept { return terms_; }

private:
    double reached_time_;
    std::size_t terms_;
};

class GridAliasingError : public Error {
public:
    GridAliasingError(double phase_per_cell, double suggested_dk)
        : Error(ErrorCode::GridAliasing,
                "phase advance per k-cell " + std::to_string(phase_per_cell) +
                    " exceeds pi; use dk <= " + std::to_string(suggested_dk)),
          suggested_dk_(suggested_dk) {}

    double suggested_dk() const noexcept { return suggested_dk_; }

private:
    double suggested_dk_;
};

}  // namespace entlab
