#include <algorithm>
#include <set>

#include "jniflow/buffer_analyzer.hpp"

namespace jniflow {

ValueInfo backtrack_value(const SliceProfile& profile, int at_line,
                          const SliceProfileMap& profiles, int chain_cap) {
    const SliceProfile* cur = &profile;
    std::set<NodeKey> visited;
    for (int depth = 0; depth <= chain_cap; ++depth) {
        if (!visited.insert(cur->key()).second) return ValueUnknown{};
        ValueInfo value = cur->value;
        for (const ValueEvent& event : cur->events) {
            if (event.line > at_line) break;
            value = event.value;
        }
        if (const auto* ref = std::get_if<ValueRef>(&value)) {
            auto it = profiles.find(ProfileKey{ref->key.file_name,
                                               ref->key.function_name,
                                               ref->key.var_name});
            if (it == profiles.end()) return ValueUnknown{};
            cur = &it->second;
            continue;
        }
        return value;
    }
    return ValueUnknown{};
}

namespace {

std::optional<long> as_number(const ValueInfo& value) {
    if (const auto* i = std::get_if<ValueInt>(&value)) return i->value;
    if (const auto* b = std::get_if<ValueBufferSize>(&value)) return b->size;
    return std::nullopt;
}

std::string trim_copy(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<long> parse_long(const std::string& text) {
    if (text.empty()) return std::nullopt;
    size_t used = 0;
    try {
        long v = std::stol(text, &used, 10);
        if (used == text.size()) return v;
    } catch (...) {
    }
    return std::nullopt;
}

struct ConditionInfo {
    const AstNode* node = nullptr;
    int line = 0;
    std::vector<std::string> vars;
    std::set<std::string> size_refs;  // buffers whose size the condition uses
    std::vector<long> literals;
};

class PathAnalyzer {
public:
    PathAnalyzer(const Path& path, const DataFlowGraph& graph,
                 const SliceProfileMap& profiles, int chain_cap)
        : path_(path), graph_(graph), profiles_(profiles), cap_(chain_cap) {}

    Verdict run(const AstUnit& sink_unit) {
        const GraphNode* node = graph_.find(path_.sink_node);
        if (!node || !node->profile)
            return inconclusive("sink node is missing from the graph",
                                path_.sink_line);
        sink_profile_ = node->profile;
        const AstNode* fn = sink_profile_->function_node;
        if (!fn) {
            // fall back to the unit when the profile lost its context
            for (const FunctionInfo& candidate : functions_of(sink_unit))
                if (candidate.name == path_.sink_node.function_name)
                    fn = candidate.node;
        }
        if (node->sink_sites.empty() || !fn)
            return inconclusive("sink statement context missing",
                                path_.sink_line);
        collect_conditions(*fn);

        std::optional<Verdict> worst;
        for (const SinkSite& site : node->sink_sites) {
            Verdict verdict = analyze_site(site);
            if (!worst || rank(verdict) > rank(*worst)) worst = verdict;
        }
        return *worst;
    }

private:
    static int rank(const Verdict& v) {
        if (v.is_vulnerable()) return 3;
        if (v.is_inconclusive()) return 2;
        return 1;
    }

    Verdict inconclusive(std::string reason, int line,
                         SinkCategory category = SinkCategory::BufferAccess) {
        Verdict v;
        v.outcome = InconclusiveInfo{std::move(reason)};
        v.sink_line = line;
        v.category = category;
        return v;
    }

    const SliceProfile* local(const std::string& var) const {
        auto it = profiles_.find(ProfileKey{path_.sink_node.file_name,
                                            path_.sink_node.function_name, var});
        return it == profiles_.end() ? nullptr : &it->second;
    }

    void collect_conditions(const AstNode& fn) {
        walk(fn, [&](const AstNode& node) {
            switch (node.kind) {
                case NodeKind::Function:
                case NodeKind::FunctionDecl:
                    if (&node != &fn) return false;
                    return true;
                case NodeKind::Condition: {
                    ConditionInfo info;
                    info.node = &node;
                    info.line = node.line;
                    info.vars = variable_occurrences(node);
                    walk(node, [&](const AstNode& n) {
                        if (n.kind == NodeKind::Call) {
                            if (auto target = size_reference_target(n))
                                info.size_refs.insert(*target);
                        }
                        if (n.kind == NodeKind::Literal) {
                            if (auto v = parse_long(trim_copy(n.text)))
                                info.literals.push_back(*v);
                        }
                        return true;
                    });
                    // variables holding a sizeof(...) result act as aliases
                    for (const std::string& var : info.vars) {
                        if (const SliceProfile* p = local(var)) {
                            const RawValueEvent* latest = nullptr;
                            for (const RawValueEvent& raw : p->raw_events) {
                                if (raw.line > info.line) break;
                                latest = &raw;
                            }
                            if (latest &&
                                latest->kind == RawValueEvent::Kind::SizeOf)
                                info.size_refs.insert(latest->name);
                        }
                    }
                    conditions_.push_back(std::move(info));
                    return true;
                }
                default:
                    return true;
            }
        });
        std::stable_sort(conditions_.begin(), conditions_.end(),
                         [](const ConditionInfo& a, const ConditionInfo& b) {
                             return a.line < b.line;
                         });
    }

    Verdict analyze_site(const SinkSite& site) {
        switch (site.shape) {
            case SinkSite::Shape::IndexedAccess:
                return analyze_indexed(site);
            case SinkSite::Shape::BufferAssign:
                return analyze_assign(site);
            case SinkSite::Shape::LibraryCall:
                return analyze_call(site);
        }
        return inconclusive("unknown sink shape", site.line, site.category);
    }

    std::optional<long> backtrack_number(const std::string& var, int line) {
        const SliceProfile* p = local(var);
        if (!p) return std::nullopt;
        return as_number(backtrack_value(*p, line, profiles_, cap_));
    }

    /// Upper bound the loop condition enforces on `var`, when the access
    /// sits inside that loop: `var < B` -> B-1, `var <= B` -> B.
    std::optional<std::pair<long, int>> loop_bound(const std::string& var,
                                                   const AstNode& access) {
        for (const AstNode* p = access.parent; p; p = p->parent) {
            if (p->kind == NodeKind::Function) break;
            if (p->kind != NodeKind::ForLoop && p->kind != NodeKind::WhileLoop)
                continue;
            const AstNode* condition = nullptr;
            walk(*p, [&](const AstNode& n) {
                if (n.kind == NodeKind::Condition && !condition) {
                    condition = &n;
                    return false;
                }
                return n.kind != NodeKind::Block;
            });
            if (!condition) continue;
            const AstNode* expr = condition->first_child(NodeKind::Expr);
            if (!expr || expr->children.size() < 3) continue;
            const AstNode& lhs = *expr->children[0];
            const AstNode& op_node = *expr->children[1];
            if (lhs.kind != NodeKind::Name || lhs.has_child(NodeKind::Name) ||
                trim_copy(lhs.text) != var)
                continue;
            if (op_node.kind != NodeKind::Operator) continue;
            std::string op = trim_copy(op_node.text);
            if (op != "<" && op != "<=") continue;
            std::optional<long> bound;
            if (expr->children.size() == 3) {
                const AstNode& rhs = *expr->children[2];
                if (rhs.kind == NodeKind::Literal)
                    bound = parse_long(trim_copy(rhs.text));
                else if (rhs.kind == NodeKind::Name &&
                         !rhs.has_child(NodeKind::Name))
                    bound = backtrack_number(trim_copy(rhs.text),
                                             condition->line);
            }
            if (!bound) return std::nullopt;
            return std::make_pair(op == "<" ? *bound - 1 : *bound,
                                  condition->line);
        }
        return std::nullopt;
    }

    Verdict analyze_indexed(const SinkSite& site) {
        const std::string& buffer = site.buffer_var;
        std::optional<long> size;
        if (const SliceProfile* p = local(buffer))
            size = as_number(backtrack_value(*p, site.line, profiles_, cap_));

        // integer tier: a resolved bound decides outright
        std::optional<long> index_max;
        int bound_line = site.line;
        const AstNode* index_expr =
            site.access ? [&]() -> const AstNode* {
                const AstNode* idx = site.access->first_child(NodeKind::Index);
                return idx ? idx->first_child(NodeKind::Expr) : nullptr;
            }()
                        : nullptr;
        if (index_expr && site.index_vars.empty() &&
            index_expr->children.size() == 1 &&
            index_expr->children[0]->kind == NodeKind::Literal) {
            index_max = parse_long(trim_copy(index_expr->children[0]->text));
        } else if (site.index_vars.size() == 1 && site.access) {
            const std::string& var = site.index_vars.front();
            if (auto bound = loop_bound(var, *site.access)) {
                index_max = bound->first;
                bound_line = bound->second;
            } else if (auto value = backtrack_number(var, site.line)) {
                index_max = value;
            }
        }
        if (size && index_max) {
            if (*index_max < *size) {
                Verdict v;
                v.outcome = GuardedInfo{bound_line};
                v.sink_line = site.line;
                v.category = site.category;
                return v;
            }
            Verdict v;
            v.outcome = VulnerableInfo{BoundIssueKind::IndexedAccessUnchecked};
            v.sink_line = site.line;
            v.category = site.category;
            return v;
        }

        // syntactic tier: a condition tying an index variable to the
        // buffer's size expression
        for (const ConditionInfo& cond : conditions_) {
            if (cond.line > site.line) break;
            bool mentions_index =
                std::any_of(site.index_vars.begin(), site.index_vars.end(),
                            [&](const std::string& v) {
                                return std::find(cond.vars.begin(),
                                                 cond.vars.end(),
                                                 v) != cond.vars.end();
                            });
            if (!mentions_index) continue;
            bool size_match = cond.size_refs.count(buffer) > 0;
            if (!size_match && size) {
                for (long lit : cond.literals)
                    if (lit == *size) size_match = true;
                for (const std::string& var : cond.vars) {
                    if (var == buffer) continue;
                    if (std::find(site.index_vars.begin(),
                                  site.index_vars.end(),
                                  var) != site.index_vars.end())
                        continue;
                    if (auto v = backtrack_number(var, cond.line);
                        v && *v == *size)
                        size_match = true;
                }
            }
            if (size_match) {
                Verdict v;
                v.outcome = GuardedInfo{cond.line};
                v.sink_line = site.line;
                v.category = site.category;
                return v;
            }
        }
        Verdict v;
        v.outcome = VulnerableInfo{BoundIssueKind::IndexedAccessUnchecked};
        v.sink_line = site.line;
        v.category = site.category;
        return v;
    }

    Verdict analyze_assign(const SinkSite& site) {
        const ConditionInfo* full = nullptr;
        const ConditionInfo* partial = nullptr;
        for (const ConditionInfo& cond : conditions_) {
            if (cond.line > site.line) break;
            bool lhs = cond.size_refs.count(site.assign_lhs) > 0;
            bool rhs = cond.size_refs.count(site.assign_rhs) > 0;
            if (lhs && rhs) {
                full = &cond;
                break;
            }
            if ((lhs || rhs) && !partial) partial = &cond;
        }
        Verdict v;
        v.sink_line = site.line;
        v.category = site.category;
        if (full)
            v.outcome = GuardedInfo{full->line};
        else if (partial)
            v.outcome = VulnerableInfo{BoundIssueKind::BufferAssignUnguarded};
        else
            v.outcome = VulnerableInfo{BoundIssueKind::BufferAssignNoSizeCheck};
        return v;
    }

    Verdict analyze_call(const SinkSite& site) {
        if (site.dest_var.empty())
            return inconclusive(
                "cannot determine the destination buffer of '" + site.callee +
                    "'",
                site.line, site.category);
        for (const ConditionInfo& cond : conditions_) {
            if (cond.line > site.line) break;
            if (!cond.size_refs.count(site.dest_var)) continue;
            bool covers_length =
                site.size_arg_vars.empty() ||
                std::any_of(site.size_arg_vars.begin(),
                            site.size_arg_vars.end(),
                            [&](const std::string& v) {
                                return std::find(cond.vars.begin(),
                                                 cond.vars.end(),
                                                 v) != cond.vars.end();
                            });
            if (covers_length) {
                Verdict v;
                v.outcome = GuardedInfo{cond.line};
                v.sink_line = site.line;
                v.category = site.category;
                return v;
            }
        }
        Verdict v;
        v.outcome = VulnerableInfo{BoundIssueKind::MemFnNoSizeGuard};
        v.sink_line = site.line;
        v.category = site.category;
        return v;
    }

    const Path& path_;
    const DataFlowGraph& graph_;
    const SliceProfileMap& profiles_;
    int cap_;
    const SliceProfile* sink_profile_ = nullptr;
    std::vector<ConditionInfo> conditions_;
};

}  // namespace

Verdict analyze_path(const Path& path, const DataFlowGraph& graph,
                     const AstUnit& sink_unit, const SliceProfileMap& profiles,
                     int value_chain_cap) {
    PathAnalyzer analyzer(path, graph, profiles, value_chain_cap);
    return analyzer.run(sink_unit);
}

}  // namespace jniflow
