#pragma once

#include <stdexcept>
#include <string>

namespace qcw {

// Caller passed values outside an operation's contract (mismatched lengths,
// out-of-range parameters, malformed keys).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Operation invoked in a state it does not support (measuring a consumed
// qubit, extracting under a hiding key).
struct UsageError : std::logic_error {
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// Session/harness wiring is inconsistent (eavesdropper tap on a protocol
// without an eavesdropper role, schedule table mismatch).
struct ConfigError : std::logic_error {
    explicit ConfigError(const std::string& what) : std::logic_error(what) {}
};

// Serialized input cannot be decoded (truncated record, bad field).
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// A recorded message schedule breaks a protocol's ordering rules; the
// message should name the offending round.
struct SessionError : std::runtime_error {
    explicit SessionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qcw
