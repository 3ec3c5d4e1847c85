#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jniflow {

/// Input could not be parsed (malformed XML, bad list file, ...).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input was parseable but unusable as configured (missing positions,
/// missing language attribute, unreadable path, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Identity of a data-flow graph node. Two keys are equal iff all four
/// fields are equal.
struct NodeKey {
    std::string var_name;
    std::string function_name;
    std::string file_name;
    int defined_position = 0;

    auto operator<=>(const NodeKey&) const = default;

    /// "file:function:var:line", the label format used by every exporter.
    std::string label() const;
};

enum class SinkCategory {
    Input,
    Memory,
    Output,
    Utility,
    BufferAccess,
};

std::string_view to_string(SinkCategory c);

enum class BoundIssueKind {
    IndexedAccessUnchecked,
    BufferAssignNoSizeCheck,
    BufferAssignUnguarded,
    MemFnNoSizeGuard,
};

std::string_view to_string(BoundIssueKind k);

/// Non-fatal findings collected along the pipeline (unresolved callees,
/// FFI link failures, duplicate symbols, ...). Order is the deterministic
/// order of discovery.
struct Diagnostic {
    std::string category;
    std::string message;
    std::string file;
    int line = 0;
};

struct Diagnostics {
    std::vector<Diagnostic> entries;

    void add(std::string category, std::string message, std::string file = {},
             int line = 0) {
        entries.push_back(
            {std::move(category), std::move(message), std::move(file), line});
    }
};

}  // namespace jniflow
