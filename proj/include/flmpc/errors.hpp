#pragma once

#include <stdexcept>
#include <string>

namespace flmpc {

/// Root of the error hierarchy. Every protocol or harness failure maps to
/// exactly one subclass so the CLI can assign stable exit codes.
class Error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ArityError : public Error {
    using Error::Error;
};

class DomainError : public Error {
    using Error::Error;
};

class ThreadingError : public Error {
    using Error::Error;
};

class IncompleteCallError : public Error {
    using Error::Error;
};

class TapeViolationError : public Error {
    using Error::Error;
};

class InsufficientClientsError : public Error {
    using Error::Error;
};

class SelectionError : public Error {
    using Error::Error;
};

// Signals that the field modulus is too small for the data being encoded.
class OverflowError : public Error {
    using Error::Error;
};

class ConfigError : public Error {
    using Error::Error;
};

class DatasetError : public Error {
    using Error::Error;
};

class IncompleteRoundError : public Error {
    using Error::Error;
};

class BudgetError : public Error {
    using Error::Error;
};

class UnsupportedCorruptionError : public Error {
    using Error::Error;
};

class TranscriptError : public Error {
    using Error::Error;
};

} // namespace flmpc
