#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jniflow/ast.hpp"
#include "jniflow/core.hpp"
#include "jniflow/symbols.hpp"

namespace jniflow {

// --- tracked values ----------------------------------------------------------

struct ValueUnknown {
    bool operator==(const ValueUnknown&) const = default;
};
struct ValueInt {
    long value = 0;
    bool operator==(const ValueInt&) const = default;
};
struct ValueBufferSize {
    long size = 0;
    bool operator==(const ValueBufferSize&) const = default;
};
struct ValueRef {
    NodeKey key;
    bool operator==(const ValueRef&) const = default;
};

/// Integer-only value model: a literal, a buffer extent, a reference to
/// another node's value, or unknown.
using ValueInfo = std::variant<ValueUnknown, ValueInt, ValueBufferSize, ValueRef>;

std::string value_to_string(const ValueInfo& value);

/// Value re-definition recorded while walking a function body. References
/// stay by name until the whole-project profile map exists.
struct RawValueEvent {
    enum class Kind { Int, Name, FieldRef, SizeOf, Unknown };
    int line = 0;
    Kind kind = Kind::Unknown;
    long int_value = 0;
    std::string name;    // Name: variable; FieldRef/SizeOf: field / buffer
    std::string object;  // FieldRef: object the field is read from
};

struct ValueEvent {
    int line = 0;
    ValueInfo value;
};

// --- slice profiles ----------------------------------------------------------

/// A call that receives the sliced variable as an argument.
struct CFunctionUse {
    std::string callee_name;  // terminal segment
    int arg_position = 0;     // 0-based
    std::optional<std::string> arg_type;
    int call_line = 0;
    int call_arg_count = 0;
};

/// Field value flowing into a local: `local = obj->field`.
struct FieldRead {
    std::string object;
    std::string field;
    int line = 0;
};

struct ProfileKey {
    std::string file_name;
    std::string function_name;
    std::string var_name;
    auto operator<=>(const ProfileKey&) const = default;
};

/// Forward slice record for one identifier of one function (or one field
/// of one class, with the reserved field-scope function name).
struct SliceProfile {
    std::string file_name;
    std::string function_name;
    std::string var_name;
    std::optional<std::string> type_name;  // nullopt = unresolved
    int defined_position = 1;
    std::vector<int> used_positions;
    std::vector<std::string> dependent_vars;  // data-dependent on this var
    std::vector<CFunctionUse> c_functions;
    ValueInfo value = ValueUnknown{};  // at the definition site

    std::vector<RawValueEvent> raw_events;  // later assignments, by line
    std::vector<ValueEvent> events;         // raw_events after resolution
    std::vector<FieldRead> field_reads;

    const AstUnit* unit = nullptr;
    const AstNode* function_node = nullptr;  // null for field scope
    bool is_parameter = false;
    int param_index = -1;
    bool is_implicit = false;  // assigned but never declared

    NodeKey key() const {
        return NodeKey{var_name, function_name, file_name, defined_position};
    }
    ProfileKey profile_key() const {
        return ProfileKey{file_name, function_name, var_name};
    }
};

using SliceProfileMap = std::map<ProfileKey, SliceProfile>;

/// Reserved function-name marker for class/struct field profiles.
std::string field_scope_name(std::string_view class_name);
bool is_field_scope(std::string_view function_name);

/// Profiles for every parameter, declared variable, assigned-but-undeclared
/// local, and class field of one unit.
SliceProfileMap build_slice_profiles(const AstUnit& unit,
                                     const SymbolTable& symbols);

/// Value captured at a declaration: integer literal initializer, explicit
/// array extent, everything else unknown.
ValueInfo initial_value(const AstNode& decl);

/// Calls inside `stmt` that take `var` as an argument, with the 0-based
/// position. `var_type` is echoed into the use record.
std::vector<CFunctionUse> extract_cfunctions(
    const AstNode& stmt, std::string_view var,
    std::optional<std::string> var_type = std::nullopt);

/// Keeps the existing profile when both sides define the same key.
void merge_profiles(SliceProfileMap& into, SliceProfileMap&& fragment);

/// One profile per line, fields pipe-separated, sorted by key.
std::string dump_profiles(const SliceProfileMap& profiles);

/// Finds the first assignment inside `stmt` and classifies its right-hand
/// side (literal / single name / field read / size expression / unknown).
std::optional<RawValueEvent> classify_assignment(const AstNode& stmt);

/// Variable reads in a subtree: first segment of qualified names, callee
/// names and type names excluded. Document order, duplicates kept.
std::vector<std::string> variable_occurrences(const AstNode& node);

/// Unqualified, unindexed assignment target of an expression, if any.
std::optional<std::string> simple_assign_target(const AstNode& expr);

/// "JniYuvOperator*" / "std::vector<int>&" -> bare class name.
std::string strip_to_class_name(std::string type);

/// `sizeof(x)`, `x.size()`, `x.length()` -> "x".
std::optional<std::string> size_reference_target(const AstNode& call);

/// Heuristic: pointer, array, or well-known buffer container type.
bool looks_like_buffer(const std::optional<std::string>& type);

/// Buffer by type, or by a declared array extent (srcML keeps `[64]` on
/// the declarator, not the type).
bool is_buffer_profile(const SliceProfile& profile);

}  // namespace jniflow
