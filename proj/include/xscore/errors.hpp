#pragma once

#include <stdexcept>
#include <string>

namespace xscore {

// Base for everything thrown by the library on bad input or blown budgets.
// The CLI maps these onto process exit codes; see tools/xscore_main.cpp.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or ill-formed input text/JSON (also structurally broken
// circuits and trees: dangling ids, non-total branch maps, cycles).
struct ParseError : Error {
    using Error::Error;
};

// Well-formed input that violates an operation's precondition, e.g.
// model counting on an uncertified circuit or conditioning on an event
// with zero probability mass.
struct PreconditionError : Error {
    using Error::Error;
};

// An enumeration or size cap was hit before the answer was found.
struct CapExceededError : Error {
    using Error::Error;
};

} // namespace xscore
