#pragma once

#include "jniflow/source_sink.hpp"

namespace jniflow {

struct VulnerableInfo {
    BoundIssueKind kind = BoundIssueKind::IndexedAccessUnchecked;
};
struct GuardedInfo {
    int guard_line = 0;  // within the sink's enclosing function
};
struct InconclusiveInfo {
    std::string reason;
};

/// Outcome of the bound-check analysis for one path. Guarded paths are
/// filtered from the warning set; everything else is reported.
struct Verdict {
    std::variant<VulnerableInfo, GuardedInfo, InconclusiveInfo> outcome =
        InconclusiveInfo{};
    int sink_line = 0;  // the site this verdict talks about
    SinkCategory category = SinkCategory::BufferAccess;

    bool is_vulnerable() const {
        return std::holds_alternative<VulnerableInfo>(outcome);
    }
    bool is_guarded() const {
        return std::holds_alternative<GuardedInfo>(outcome);
    }
    bool is_inconclusive() const {
        return std::holds_alternative<InconclusiveInfo>(outcome);
    }
    BoundIssueKind kind() const { return std::get<VulnerableInfo>(outcome).kind; }
    int guard_line() const { return std::get<GuardedInfo>(outcome).guard_line; }
    const std::string& reason() const {
        return std::get<InconclusiveInfo>(outcome).reason;
    }
};

/// Value of `profile` as observed at `at_line`: the latest re-definition
/// before that line, with reference chains followed (depth-capped, cycles
/// collapse to Unknown).
ValueInfo backtrack_value(const SliceProfile& profile, int at_line,
                          const SliceProfileMap& profiles, int chain_cap = 32);

/// Decides whether the path's sink access is protected by an adequate
/// bound check inside the sink's enclosing function. When the buffer size
/// and the index bound both resolve to integers a strict `max < size` test
/// decides; otherwise a conditional tying an index/length variable to the
/// buffer's size expression is required.
Verdict analyze_path(const Path& path, const DataFlowGraph& graph,
                     const AstUnit& sink_unit, const SliceProfileMap& profiles,
                     int value_chain_cap = 32);

}  // namespace jniflow
