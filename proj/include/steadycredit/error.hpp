#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steadycredit {

enum class ErrorKind {
    Parse,         // malformed CSV / config text
    Gap,           // non-contiguous quarters
    Invariant,     // a domain invariant was violated
    ColumnAbsent,  // an optional column required by the operation is missing
    Domain,        // argument outside the operation's precondition
    Numeric,       // solver failed to bracket / converge
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Gap: return "gap";
        case ErrorKind::Invariant: return "invariant";
        case ErrorKind::ColumnAbsent: return "column absent";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Numeric: return "numeric";
    }
    return "unknown";
}

/// Single exception type for the library; `kind()` lets callers (and the CLI)
/// discriminate without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace steadycredit
