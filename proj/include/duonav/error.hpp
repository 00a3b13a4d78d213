#pragma once

#include <stdexcept>
#include <string>

namespace duonav {

enum class ErrorCode {
    invalid_argument,
    degenerate_input,
    unsatisfiable,
    no_path,
    io,
    parse,
    divergence,
    runtime,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::degenerate_input: return "degenerate_input";
        case ErrorCode::unsatisfiable: return "unsatisfiable";
        case ErrorCode::no_path: return "no_path";
        case ErrorCode::io: return "io";
        case ErrorCode::parse: return "parse";
        case ErrorCode::divergence: return "divergence";
        case ErrorCode::runtime: return "runtime";
    }
    return "unknown";
}

}  // namespace duonav
