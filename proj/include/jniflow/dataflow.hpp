#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <tuple>

#include "jniflow/slicer.hpp"

namespace jniflow {

enum class EdgeReason { ArgPass, FfiLink, DVar, Assign };

std::string_view to_string(EdgeReason reason);

struct Edge {
    NodeKey from;
    NodeKey to;
    EdgeReason reason = EdgeReason::DVar;
    auto operator<=>(const Edge&) const = default;
};

/// Where a sink candidate was observed and what the statement looks like.
struct SinkSite {
    enum class Shape { IndexedAccess, BufferAssign, LibraryCall };
    SinkCategory category = SinkCategory::BufferAccess;
    Shape shape = Shape::IndexedAccess;
    int line = 0;
    const AstNode* stmt = nullptr;    // nearest statement-like ancestor
    const AstNode* access = nullptr;  // indexed name / call / assignment expr
    bool is_write = false;

    std::string buffer_var;               // the accessed buffer (node's var)
    std::vector<std::string> index_vars;  // IndexedAccess
    std::string assign_lhs, assign_rhs;   // BufferAssign
    std::string callee;                   // LibraryCall
    std::string dest_var;                 // LibraryCall: first argument
    std::vector<std::string> size_arg_vars;  // LibraryCall: length argument
};

struct GraphNode {
    const SliceProfile* profile = nullptr;
    bool is_source_candidate = false;
    std::vector<SinkSite> sink_sites;
};

class DataFlowGraph {
public:
    std::map<NodeKey, GraphNode> nodes;
    std::set<Edge> edges;

    void add_node(const NodeKey& key, const SliceProfile* profile);
    bool add_edge(const NodeKey& from, const NodeKey& to, EdgeReason reason);
    bool has_edge(const NodeKey& from, const NodeKey& to,
                  EdgeReason reason) const;
    bool has_any_edge(const NodeKey& from, const NodeKey& to) const;

    const GraphNode* find(const NodeKey& key) const;
    const SliceProfile* profile_of(const NodeKey& key) const;

    /// Sorted successor keys; built lazily, invalidated by add_edge.
    const std::vector<NodeKey>& out_neighbors(const NodeKey& key) const;
    const std::vector<NodeKey>& in_neighbors(const NodeKey& key) const;

private:
    mutable bool adjacency_fresh_ = false;
    mutable std::map<NodeKey, std::vector<NodeKey>> out_;
    mutable std::map<NodeKey, std::vector<NodeKey>> in_;
    void refresh_adjacency() const;
};

/// Per-method override of the JNI naming convention, covering natives
/// registered at run time. Line format: `qualified.Class.method = c_name`.
struct FfiOverrides {
    std::map<std::string, std::string> by_method;

    static FfiOverrides load(const std::filesystem::path& path);
    const std::string* lookup(const std::string& qualified_method) const;
};

struct ProjectContext {
    std::span<const AstUnit> units;
    std::span<const FunctionInfo> functions;
    const SymbolTable* symbols = nullptr;
    const FfiOverrides* overrides = nullptr;
};

/// JNI static-binding name for a native method. Dots separate package
/// segments; underscores inside segments escape to "_1".
std::string link_ffi(std::string_view package_name, std::string_view class_name,
                     std::string_view method_name);

/// Inverse of link_ffi: (package, class, method) when `name` follows the
/// convention.
std::optional<std::tuple<std::string, std::string, std::string>> demangle_ffi(
    std::string_view name);

/// Parameter profile of the JNI function receiving Java-side argument
/// `java_arg_position` (the two leading env/receiver parameters are
/// skipped). Null plus a diagnostic when arities do not line up.
const SliceProfile* map_ffi_arguments(int java_arg_position,
                                      const FunctionInfo& jni_function,
                                      const SliceProfileMap& profiles,
                                      Diagnostics& diagnostics);

struct CalleeQuery {
    std::string callee_name;
    int arg_position = 0;
    std::optional<std::string> arg_type;
    int call_arg_count = 0;
    std::string caller_file;
    bool caller_is_java = true;
};

/// Parameter profile at `arg_position` of a matching callee: name, arity
/// and per-position type must agree (unresolved matches anything), and the
/// callee lives on the caller's side of the language fence. Ties prefer
/// the caller's file, then the smallest file name, with a diagnostics note.
const SliceProfile* find_callee_profile(const CalleeQuery& query,
                                        const SliceProfileMap& profiles,
                                        std::span<const FunctionInfo> functions,
                                        Diagnostics* diagnostics = nullptr);

/// Classifies one assignment to profile.var_name, appends the resulting
/// value event, and returns it. Literal -> IntLiteral, single variable ->
/// RefTo, anything else -> Unknown.
ValueInfo update_value(SliceProfile& profile, const AstNode& assign_stmt,
                       const SliceProfileMap& profiles);

/// Combines all slice profiles into one graph: argument passing, FFI
/// links from Java native declarations into C/C++ JNI functions, and
/// data-dependence edges. Also resolves every profile's pending value
/// events. Deterministic for a fixed input set.
DataFlowGraph analyse_slices(SliceProfileMap& profiles,
                             const ProjectContext& context,
                             Diagnostics& diagnostics);

/// Graph in DOT syntax, nodes labeled "file:function:var:line".
std::string to_dot(const DataFlowGraph& graph);

}  // namespace jniflow
