#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace percolab {

// Malformed GraphSpec (bad parameters, unsupported combination).
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A VertexId that does not belong to the given graph.
struct InvalidVertexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejected byte string in VertexId::decode.
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A truncation, front or exploration grew past its configured cap.
struct CapExceededError : std::runtime_error {
    uint64_t reached;
    explicit CapExceededError(const std::string& what, uint64_t n)
        : std::runtime_error(what), reached(n) {}
};

// Requested integral does not converge in this dimension.
struct DivergentIntegralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bisection interval does not bracket the target.
struct NonBracketingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad experiment configuration (unknown key, missing parameter, bad value).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace percolab
