#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "jniflow/ast.hpp"
#include "jniflow/core.hpp"

namespace jniflow {

enum class SymbolKind { Class, Struct, Function, Field, Parameter };

std::string_view to_string(SymbolKind kind);

struct Symbol {
    std::string name;
    std::optional<std::string> type;  // nullopt = unresolved
    SymbolKind kind = SymbolKind::Class;
    int parent = -1;  // index into SymbolTable::symbols, -1 = top level
    std::string file;
    int line = 0;
    int arity = -1;  // parameter count for functions
};

/// Whole-project type pre-pass. Duplicate fully qualified names stay in the
/// table (multimap) and are reported through diagnostics, not treated as
/// fatal.
class SymbolTable {
public:
    std::vector<Symbol> symbols;
    std::multimap<std::string, int> by_name;
    std::map<std::string, int> by_qualified_name;

    const Symbol* find_qualified(const std::string& qualified) const;
    std::string qualified_name(int index) const;

    /// Ids of symbols whose parent is `parent_index`.
    std::vector<int> children_of(int parent_index) const;

    /// Innermost-scope type lookup: fields of `context` win over
    /// project-wide candidates; candidates from `file_hint` win over the
    /// rest. Returns nullopt instead of failing.
    std::optional<std::string> resolve_type(
        std::string_view name, std::optional<int> context = std::nullopt,
        std::string_view file_hint = {}) const;

    /// True when a function with this (terminal) name is defined anywhere
    /// in the project.
    bool has_function_named(std::string_view name) const;

    std::optional<int> find_class(std::string_view name) const;
};

SymbolTable collect_symbols(std::span<const AstUnit> units,
                            Diagnostics& diagnostics);

}  // namespace jniflow
