#pragma once

#include <filesystem>
#include <set>

#include "jniflow/dataflow.hpp"

namespace jniflow {

/// One entry of the curated external-input API list.
struct SourceFnSpec {
    std::string qualified_name;  // dotted, at least one dot
    int param_count = 0;

    std::string terminal() const;
    auto operator<=>(const SourceFnSpec&) const = default;
};

/// Parses `qualified.Name/paramCount` lines; `#` comments and blank lines
/// are ignored. Malformed lines raise ConfigError naming the line number.
std::vector<SourceFnSpec> load_source_list(const std::filesystem::path& file);
std::vector<SourceFnSpec> parse_source_list(std::string_view text,
                                            const std::string& origin);

/// Sink function names for the four library-call categories.
struct SinkLists {
    std::set<std::string> input;
    std::set<std::string> memory;
    std::set<std::string> output;
    std::set<std::string> utility;

    static SinkLists builtin();
    /// Reads input.txt / memory.txt / output.txt / utility.txt from `dir`;
    /// a missing file falls back to the builtin set for that category.
    static SinkLists load_dir(const std::filesystem::path& dir);

    std::optional<SinkCategory> category_of_call(const std::string& callee) const;
};

/// Source-to-sink result of the path finder. The first node is the Java
/// source, the last the C/C++ sink, consecutive nodes are edge-connected,
/// and at least one hop is an FfiLink.
struct Path {
    std::vector<NodeKey> nodes;
    NodeKey source_node;
    NodeKey sink_node;
    SinkCategory sink_category = SinkCategory::BufferAccess;
    int sink_line = 0;  // line of the sink access itself
};

/// Marks Java nodes receiving data from calls that match the source list
/// (local calls and arity mismatches filtered out) and from parameters of
/// callback-style methods whose name and arity match a spec. Returns the
/// marked keys in sorted order.
std::vector<NodeKey> match_sources(DataFlowGraph& graph,
                                   std::span<const AstUnit> units,
                                   const std::vector<SourceFnSpec>& specs,
                                   const SliceProfileMap& profiles,
                                   const SymbolTable& symbols,
                                   Diagnostics& diagnostics);

/// Category of the sink observable for `node` inside `stmt_context`, none
/// when the statement touches no configured sink and no buffer access.
/// Never classifies Java-side nodes.
std::optional<SinkCategory> classify_sink(const NodeKey& node,
                                          const AstNode& stmt_context,
                                          const SinkLists& lists,
                                          const SliceProfileMap& profiles);

/// Walks every C/C++ unit and attaches sink sites to graph nodes. Within
/// one statement a read access shadows write accesses of the same
/// statement (the read faults first).
std::vector<NodeKey> mark_sinks(DataFlowGraph& graph,
                                std::span<const AstUnit> units,
                                const SinkLists& lists,
                                const SliceProfileMap& profiles);

/// Lexicographically smallest among the shortest from->to walks, as node
/// keys; nullopt when unreachable.
std::optional<std::vector<NodeKey>> shortest_path(const DataFlowGraph& graph,
                                                  const NodeKey& from,
                                                  const NodeKey& to);

/// Up to `max_paths_per_pair` simple paths per (source, sink) pair; the
/// default emits only the BFS-shortest one. Paths without an FfiLink hop
/// are discarded.
std::vector<Path> find_paths(const DataFlowGraph& graph,
                             const std::vector<NodeKey>& sources,
                             const std::vector<NodeKey>& sinks,
                             int max_paths_per_pair = 1);

}  // namespace jniflow
