#include "jniflow/core.hpp"

namespace jniflow {

std::string NodeKey::label() const {
    return file_name + ":" + function_name + ":" + var_name + ":" +
           std::to_string(defined_position);
}

std::string_view to_string(SinkCategory c) {
    switch (c) {
        case SinkCategory::Input: return "Input";
        case SinkCategory::Memory: return "Memory";
        case SinkCategory::Output: return "Output";
        case SinkCategory::Utility: return "Utility";
        case SinkCategory::BufferAccess: return "BufferAccess";
    }
    return "?";
}

std::string_view to_string(BoundIssueKind k) {
    switch (k) {
        case BoundIssueKind::IndexedAccessUnchecked:
            return "IndexedAccessUnchecked";
        case BoundIssueKind::BufferAssignNoSizeCheck:
            return "BufferAssignNoSizeCheck";
        case BoundIssueKind::BufferAssignUnguarded:
            return "BufferAssignUnguarded";
        case BoundIssueKind::MemFnNoSizeGuard:
            return "MemFnNoSizeGuard";
    }
    return "?";
}

}  // namespace jniflow
