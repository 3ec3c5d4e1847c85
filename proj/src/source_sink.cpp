#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "jniflow/source_sink.hpp"

namespace jniflow {

namespace {

std::string trim_copy(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const SliceProfile* profile_for(const SliceProfileMap& profiles,
                                const std::string& file,
                                const std::string& function,
                                const std::string& var) {
    auto it = profiles.find(ProfileKey{file, function, var});
    return it == profiles.end() ? nullptr : &it->second;
}

const SliceProfile* profile_for_key(const SliceProfileMap& profiles,
                                    const NodeKey& key) {
    return profile_for(profiles, key.file_name, key.function_name,
                       key.var_name);
}

/// Nearest enclosing statement-like node: expression statement,
/// declaration statement, or a loop / branch condition.
const AstNode* stmt_anchor(const AstNode& node) {
    for (const AstNode* p = &node; p; p = p->parent) {
        switch (p->kind) {
            case NodeKind::ExprStmt:
            case NodeKind::DeclStmt:
            case NodeKind::Condition:
                return p;
            default:
                break;
        }
        if (p->parent &&
            (p->parent->kind == NodeKind::Block ||
             (p->parent->kind == NodeKind::Unknown &&
              p->parent->tag == "block_content")))
            return p;
    }
    return &node;
}

}  // namespace

std::string SourceFnSpec::terminal() const {
    size_t dot = qualified_name.rfind('.');
    return dot == std::string::npos ? qualified_name
                                    : qualified_name.substr(dot + 1);
}

std::vector<SourceFnSpec> parse_source_list(std::string_view text,
                                            const std::string& origin) {
    std::vector<SourceFnSpec> specs;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string entry = trim_copy(line);
        if (entry.empty() || entry[0] == '#') continue;
        size_t slash = entry.rfind('/');
        std::string where = origin + ":" + std::to_string(line_no);
        if (slash == std::string::npos)
            throw ConfigError(where + ": expected 'qualified.Name/paramCount'");
        std::string name = trim_copy(entry.substr(0, slash));
        std::string count = trim_copy(entry.substr(slash + 1));
        if (name.find('.') == std::string::npos)
            throw ConfigError(where +
                              ": source function name must be qualified "
                              "(contain a '.')");
        int params;
        try {
            size_t used = 0;
            params = std::stoi(count, &used);
            if (used != count.size() || params < 0) throw std::exception();
        } catch (...) {
            throw ConfigError(where + ": parameter count '" + count +
                              "' is not a non-negative integer");
        }
        specs.push_back(SourceFnSpec{std::move(name), params});
    }
    return specs;
}

std::vector<SourceFnSpec> load_source_list(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ConfigError("cannot read source list '" + file.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_source_list(buf.str(), file.string());
}

SinkLists SinkLists::builtin() {
    SinkLists lists;
    lists.input = {"scanf",  "fscanf", "sscanf", "vscanf", "vfscanf",
                   "vsscanf", "fread",  "getc",   "fgetc",  "getchar",
                   "gets",   "fgets",  "getline", "read"};
    lists.memory = {"memcpy",  "memmove", "memset",  "strcpy", "strncpy",
                    "strcat",  "strncat", "strxfrm", "bcopy",  "wmemcpy",
                    "wmemmove"};
    lists.output = {"printf",  "fprintf",  "sprintf", "snprintf", "vprintf",
                    "vfprintf", "vsprintf", "vsnprintf", "putc",  "fputc",
                    "putchar", "puts",     "fputs",   "fwrite"};
    lists.utility = {"realpath", "getwd", "getcwd", "getopt", "getpass"};
    return lists;
}

namespace {

std::set<std::string> load_name_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ConfigError("cannot read sink list '" + file.string() + "'");
    std::set<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        std::string name = trim_copy(line);
        if (!name.empty() && name[0] != '#') names.insert(name);
    }
    return names;
}

}  // namespace

SinkLists SinkLists::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("sink list directory '" + dir.string() +
                          "' does not exist");
    SinkLists lists = builtin();
    auto maybe = [&](const char* name, std::set<std::string>& into) {
        std::filesystem::path file = dir / name;
        if (std::filesystem::exists(file)) into = load_name_file(file);
    };
    maybe("input.txt", lists.input);
    maybe("memory.txt", lists.memory);
    maybe("output.txt", lists.output);
    maybe("utility.txt", lists.utility);
    return lists;
}

std::optional<SinkCategory> SinkLists::category_of_call(
    const std::string& callee) const {
    if (input.count(callee)) return SinkCategory::Input;
    if (memory.count(callee)) return SinkCategory::Memory;
    if (output.count(callee)) return SinkCategory::Output;
    if (utility.count(callee)) return SinkCategory::Utility;
    return std::nullopt;
}

// --- source matching ---------------------------------------------------------

namespace {

struct CallSite {
    const AstNode* call = nullptr;
    std::string terminal;
    std::string receiver;
    int arg_count = 0;
    const FunctionInfo* enclosing = nullptr;
};

void collect_calls(const FunctionInfo& fn, std::vector<CallSite>& out) {
    if (!fn.node) return;
    for (const auto& child : fn.node->children) {
        walk(*child, [&](const AstNode& node) {
            switch (node.kind) {
                case NodeKind::Function:
                case NodeKind::FunctionDecl:
                case NodeKind::Class:
                case NodeKind::Struct:
                    return false;
                case NodeKind::Call: {
                    const AstNode* name = node.first_child(NodeKind::Name);
                    if (!name) return true;
                    CallSite site;
                    site.call = &node;
                    site.terminal = terminal_name(*name);
                    site.receiver = receiver_of(*name);
                    for (const auto& c : node.children) {
                        if (c->kind != NodeKind::ArgumentList) continue;
                        if (const std::string* t = c->attribute("type");
                            t && *t == "generic")
                            continue;
                        for (const auto& a : c->children)
                            if (a->kind == NodeKind::Argument) ++site.arg_count;
                        break;
                    }
                    site.enclosing = &fn;
                    out.push_back(std::move(site));
                    return true;
                }
                default:
                    return true;
            }
        });
    }
}

/// SDK calls are never local: a bare call to a project function, a call
/// through `this`, or a call whose receiver resolves to a project class
/// that defines the method is local.
bool is_local_call(const CallSite& site, const SymbolTable& symbols,
                   const SliceProfileMap& profiles) {
    if (site.receiver.empty()) return symbols.has_function_named(site.terminal);
    if (site.receiver == "this") return true;
    if (site.receiver.find_first_of(".->:") != std::string::npos) return false;

    std::string class_name;
    if (auto cls = symbols.find_class(site.receiver)) {
        class_name = site.receiver;  // static call through the class name
    } else if (const SliceProfile* recv = profile_for(
                   profiles, site.enclosing->unit->file_name,
                   site.enclosing->name, site.receiver)) {
        if (!recv->type_name) return false;
        class_name = strip_to_class_name(*recv->type_name);
    } else {
        return false;
    }
    auto cls = symbols.find_class(class_name);
    if (!cls) return false;
    for (int child : symbols.children_of(*cls)) {
        const Symbol& s = symbols.symbols[child];
        if (s.kind == SymbolKind::Function && s.name == site.terminal)
            return true;
    }
    return false;
}

/// The variable receiving or carrying the call's data: the assignment or
/// initialization target plus every buffer-typed single-name argument.
std::vector<const SliceProfile*> data_carriers(const CallSite& site,
                                               const SliceProfileMap& profiles) {
    std::vector<const SliceProfile*> carriers;
    const std::string& file = site.enclosing->unit->file_name;
    const std::string& function = site.enclosing->name;

    // x = stream.read(...) / byte[] x = stream.read(...)
    for (const AstNode* p = site.call->parent; p; p = p->parent) {
        if (p->kind == NodeKind::Expr) {
            if (auto target = simple_assign_target(*p)) {
                if (const SliceProfile* prof =
                        profile_for(profiles, file, function, *target))
                    carriers.push_back(prof);
                break;
            }
        } else if (p->kind == NodeKind::Init && p->parent &&
                   p->parent->kind == NodeKind::Decl) {
            std::string var = declared_name(*p->parent);
            if (const SliceProfile* prof =
                    profile_for(profiles, file, function, var))
                carriers.push_back(prof);
            break;
        } else if (p->kind != NodeKind::Call && p->kind != NodeKind::Name &&
                   p->kind != NodeKind::Argument &&
                   p->kind != NodeKind::ArgumentList) {
            break;
        }
    }

    for (const auto& child : site.call->children) {
        if (child->kind != NodeKind::ArgumentList) continue;
        if (const std::string* t = child->attribute("type");
            t && *t == "generic")
            continue;
        for (const auto& arg : child->children) {
            if (arg->kind != NodeKind::Argument) continue;
            for (const std::string& var : variable_occurrences(*arg)) {
                const SliceProfile* prof =
                    profile_for(profiles, file, function, var);
                if (prof && is_buffer_profile(*prof)) carriers.push_back(prof);
            }
        }
    }
    return carriers;
}

}  // namespace

std::vector<NodeKey> match_sources(DataFlowGraph& graph,
                                   std::span<const AstUnit> units,
                                   const std::vector<SourceFnSpec>& specs,
                                   const SliceProfileMap& profiles,
                                   const SymbolTable& symbols,
                                   Diagnostics& diagnostics) {
    std::set<NodeKey> marked;
    auto mark = [&](const SliceProfile* profile) {
        if (!profile) return;
        NodeKey key = profile->key();
        auto it = graph.nodes.find(key);
        if (it == graph.nodes.end()) return;
        it->second.is_source_candidate = true;
        marked.insert(key);
    };

    for (const AstUnit& unit : units) {
        if (unit.language != Language::Java) continue;
        std::vector<FunctionInfo> functions = functions_of(unit);

        for (const FunctionInfo& fn : functions) {
            // callback-style entry points: name and arity match a spec
            if (fn.body_present && !fn.is_native) {
                for (const SourceFnSpec& spec : specs) {
                    if (spec.terminal() != fn.name) continue;
                    if (spec.param_count !=
                        static_cast<int>(fn.parameters.size()))
                        continue;
                    for (const FunctionParam& param : fn.parameters) {
                        const SliceProfile* prof = profile_for(
                            profiles, unit.file_name, fn.name, param.name);
                        if (prof && is_buffer_profile(*prof)) mark(prof);
                    }
                }
            }

            std::vector<CallSite> calls;
            collect_calls(fn, calls);
            for (const CallSite& site : calls) {
                for (const SourceFnSpec& spec : specs) {
                    if (spec.terminal() != site.terminal) continue;
                    if (site.arg_count != spec.param_count) continue;
                    if (is_local_call(site, symbols, profiles)) {
                        diagnostics.add(
                            "source-filter",
                            "call to '" + site.terminal +
                                "' matches source '" + spec.qualified_name +
                                "' but is a local call",
                            unit.file_name, site.call->line);
                        continue;
                    }
                    for (const SliceProfile* carrier :
                         data_carriers(site, profiles))
                        mark(carrier);
                }
            }
        }
    }
    return {marked.begin(), marked.end()};
}

// --- sink marking ------------------------------------------------------------

namespace {

/// Size/length argument of a library call: the trailing count parameter
/// of the functions that take one.
const AstNode* size_argument(const AstNode& call, const std::string& callee) {
    static const std::set<std::string> length_last = {
        "memcpy",  "memmove", "memset",  "strncpy", "strncat", "snprintf",
        "fread",   "fwrite",  "bcopy",   "wmemcpy", "wmemmove"};
    if (!length_last.count(callee)) return nullptr;
    const AstNode* last = nullptr;
    int count = 0;
    for (const auto& child : call.children) {
        if (child->kind != NodeKind::ArgumentList) continue;
        if (const std::string* t = child->attribute("type");
            t && *t == "generic")
            continue;
        for (const auto& arg : child->children)
            if (arg->kind == NodeKind::Argument) {
                last = arg.get();
                ++count;
            }
        break;
    }
    return count >= 2 ? last : nullptr;
}

std::string first_argument_var(const AstNode& call) {
    for (const auto& child : call.children) {
        if (child->kind != NodeKind::ArgumentList) continue;
        if (const std::string* t = child->attribute("type");
            t && *t == "generic")
            continue;
        for (const auto& arg : child->children) {
            if (arg->kind != NodeKind::Argument) continue;
            const AstNode* expr = arg->first_child(NodeKind::Expr);
            if (!expr || expr->children.size() != 1 ||
                expr->children[0]->kind != NodeKind::Name ||
                expr->children[0]->has_child(NodeKind::Name) ||
                expr->children[0]->has_child(NodeKind::Index))
                return {};
            std::string text = expr->children[0]->text;
            return trim_copy(text);
        }
        break;
    }
    return {};
}

struct SinkMarker {
    DataFlowGraph& graph;
    const SinkLists& lists;
    const SliceProfileMap& profiles;
    const AstUnit& unit;
    const FunctionInfo& fn;
    std::set<NodeKey>& marked;

    const SliceProfile* local(const std::string& var) const {
        return profile_for(profiles, unit.file_name, fn.name, var);
    }

    void add_site(const SliceProfile* profile, SinkSite site) {
        if (!profile) return;
        NodeKey key = profile->key();
        auto it = graph.nodes.find(key);
        if (it == graph.nodes.end()) return;
        it->second.sink_sites.push_back(std::move(site));
        marked.insert(key);
    }

    void mark_indexed_accesses() {
        std::vector<IndexAccess> accesses = index_accesses_of(*fn.node);
        std::map<const AstNode*, std::vector<const IndexAccess*>> by_stmt;
        for (const IndexAccess& access : accesses) {
            if (!access.name_node) continue;
            by_stmt[stmt_anchor(*access.name_node)].push_back(&access);
        }
        for (auto& [stmt, group] : by_stmt) {
            bool has_read = std::any_of(
                group.begin(), group.end(),
                [](const IndexAccess* a) { return a->mode == AccessMode::Read; });
            for (const IndexAccess* access : group) {
                // within one statement the read faults before the write
                if (has_read && access->mode == AccessMode::Write) continue;
                const SliceProfile* profile = local(access->buffer_name);
                if (!profile) continue;
                SinkSite site;
                site.category = SinkCategory::BufferAccess;
                site.shape = SinkSite::Shape::IndexedAccess;
                site.line = access->line;
                site.stmt = stmt;
                site.access = access->name_node;
                site.is_write = access->mode == AccessMode::Write;
                site.buffer_var = access->buffer_name;
                if (access->index_expr)
                    for (const std::string& var :
                         variable_occurrences(*access->index_expr))
                        if (var != access->buffer_name)
                            site.index_vars.push_back(var);
                add_site(profile, std::move(site));
            }
        }
    }

    void mark_buffer_assigns(const AstNode& node) {
        if (node.kind != NodeKind::Expr) return;
        auto target = simple_assign_target(node);
        if (!target) return;
        auto rhs = classify_assignment(node);
        if (!rhs || rhs->kind != RawValueEvent::Kind::Name) return;
        const SliceProfile* lhs_prof = local(*target);
        const SliceProfile* rhs_prof = local(rhs->name);
        if (!lhs_prof || !rhs_prof) return;
        if (!is_buffer_profile(*lhs_prof) || !is_buffer_profile(*rhs_prof))
            return;
        SinkSite site;
        site.category = SinkCategory::BufferAccess;
        site.shape = SinkSite::Shape::BufferAssign;
        site.line = node.line;
        site.stmt = stmt_anchor(node);
        site.access = &node;
        site.buffer_var = rhs->name;  // the read side
        site.assign_lhs = *target;
        site.assign_rhs = rhs->name;
        add_site(rhs_prof, std::move(site));
    }

    void mark_library_calls(const AstNode& node) {
        if (node.kind != NodeKind::Call) return;
        const AstNode* name = node.first_child(NodeKind::Name);
        if (!name) return;
        std::string callee = terminal_name(*name);
        auto category = lists.category_of_call(callee);
        if (!category) return;

        std::string dest = first_argument_var(node);
        std::vector<std::string> size_vars;
        if (const AstNode* size_arg = size_argument(node, callee))
            size_vars = variable_occurrences(*size_arg);

        std::set<std::string> seen;
        for (const auto& child : node.children) {
            if (child->kind != NodeKind::ArgumentList) continue;
            if (const std::string* t = child->attribute("type");
                t && *t == "generic")
                continue;
            for (const auto& arg : child->children) {
                if (arg->kind != NodeKind::Argument) continue;
                for (const std::string& var : variable_occurrences(*arg)) {
                    if (seen.count(var)) continue;
                    seen.insert(var);
                    const SliceProfile* profile = local(var);
                    if (!profile || !is_buffer_profile(*profile)) continue;
                    SinkSite site;
                    site.category = *category;
                    site.shape = SinkSite::Shape::LibraryCall;
                    site.line = node.line;
                    site.stmt = stmt_anchor(node);
                    site.access = &node;
                    site.buffer_var = var;
                    site.callee = callee;
                    site.dest_var = dest;
                    site.size_arg_vars = size_vars;
                    add_site(profile, std::move(site));
                }
            }
        }
    }

    void run() {
        mark_indexed_accesses();
        for (const auto& child : fn.node->children) {
            if (child->kind == NodeKind::ParameterList) continue;
            walk(*child, [&](const AstNode& node) {
                switch (node.kind) {
                    case NodeKind::Function:
                    case NodeKind::FunctionDecl:
                    case NodeKind::Class:
                    case NodeKind::Struct:
                        return false;
                    default:
                        mark_buffer_assigns(node);
                        mark_library_calls(node);
                        return true;
                }
            });
        }
    }
};

}  // namespace

std::vector<NodeKey> mark_sinks(DataFlowGraph& graph,
                                std::span<const AstUnit> units,
                                const SinkLists& lists,
                                const SliceProfileMap& profiles) {
    std::set<NodeKey> marked;
    for (const AstUnit& unit : units) {
        if (!is_native_side(unit.language)) continue;
        for (const FunctionInfo& fn : functions_of(unit)) {
            if (!fn.body_present) continue;
            SinkMarker marker{graph, lists, profiles, unit, fn, marked};
            marker.run();
        }
    }
    for (const NodeKey& key : marked) {
        auto& sites = graph.nodes.at(key).sink_sites;
        std::stable_sort(sites.begin(), sites.end(),
                         [](const SinkSite& a, const SinkSite& b) {
                             return std::tie(a.line, a.category) <
                                    std::tie(b.line, b.category);
                         });
    }
    return {marked.begin(), marked.end()};
}

std::optional<SinkCategory> classify_sink(const NodeKey& node,
                                          const AstNode& stmt_context,
                                          const SinkLists& lists,
                                          const SliceProfileMap& profiles) {
    const SliceProfile* profile = profile_for_key(profiles, node);
    if (profile && profile->unit && profile->unit->language == Language::Java)
        return std::nullopt;

    std::optional<SinkCategory> category;
    walk(stmt_context, [&](const AstNode& n) {
        if (category) return false;
        if (n.kind != NodeKind::Call) return true;
        const AstNode* name = n.first_child(NodeKind::Name);
        if (!name) return true;
        auto cat = lists.category_of_call(terminal_name(*name));
        if (!cat) return true;
        for (const auto& child : n.children) {
            if (child->kind != NodeKind::ArgumentList) continue;
            for (const auto& arg : child->children) {
                if (arg->kind != NodeKind::Argument) continue;
                for (const std::string& var : variable_occurrences(*arg))
                    if (var == node.var_name) category = cat;
            }
        }
        return true;
    });
    if (category) return category;

    for (const IndexAccess& access : index_accesses_of(stmt_context))
        if (access.buffer_name == node.var_name)
            return SinkCategory::BufferAccess;

    // buffer-to-buffer assignment
    std::optional<SinkCategory> assign;
    walk(stmt_context, [&](const AstNode& n) {
        if (assign || n.kind != NodeKind::Expr) return !assign;
        auto target = simple_assign_target(n);
        auto rhs = classify_assignment(n);
        if (!target || !rhs || rhs->kind != RawValueEvent::Kind::Name)
            return true;
        if (*target != node.var_name && rhs->name != node.var_name) return true;
        const SliceProfile* lhs_prof =
            profile_for(profiles, node.file_name, node.function_name, *target);
        const SliceProfile* rhs_prof =
            profile_for(profiles, node.file_name, node.function_name, rhs->name);
        if (lhs_prof && rhs_prof && is_buffer_profile(*lhs_prof) &&
            is_buffer_profile(*rhs_prof))
            assign = SinkCategory::BufferAccess;
        return true;
    });
    return assign;
}

// --- path finding ------------------------------------------------------------

std::optional<std::vector<NodeKey>> shortest_path(const DataFlowGraph& graph,
                                                  const NodeKey& from,
                                                  const NodeKey& to) {
    if (!graph.find(from) || !graph.find(to)) return std::nullopt;
    std::map<NodeKey, int> dist_from;
    std::deque<NodeKey> queue{from};
    dist_from[from] = 0;
    while (!queue.empty()) {
        NodeKey cur = queue.front();
        queue.pop_front();
        for (const NodeKey& next : graph.out_neighbors(cur)) {
            if (dist_from.count(next)) continue;
            dist_from[next] = dist_from[cur] + 1;
            queue.push_back(next);
        }
    }
    auto to_it = dist_from.find(to);
    if (to_it == dist_from.end()) return std::nullopt;
    int total = to_it->second;

    std::map<NodeKey, int> dist_to;
    queue.push_back(to);
    dist_to[to] = 0;
    while (!queue.empty()) {
        NodeKey cur = queue.front();
        queue.pop_front();
        for (const NodeKey& prev : graph.in_neighbors(cur)) {
            if (dist_to.count(prev)) continue;
            dist_to[prev] = dist_to[cur] + 1;
            queue.push_back(prev);
        }
    }

    // out_neighbors is sorted, so the greedy reconstruction picks the
    // lexicographically smallest among all shortest walks
    std::vector<NodeKey> path{from};
    NodeKey cur = from;
    while (cur != to) {
        bool advanced = false;
        for (const NodeKey& next : graph.out_neighbors(cur)) {
            auto df = dist_from.find(next);
            auto dt = dist_to.find(next);
            if (df == dist_from.end() || dt == dist_to.end()) continue;
            if (df->second == dist_from[cur] + 1 &&
                dt->second == total - df->second) {
                path.push_back(next);
                cur = next;
                advanced = true;
                break;
            }
        }
        if (!advanced) return std::nullopt;  // inconsistent graph
    }
    return path;
}

namespace {

bool contains_ffi_hop(const DataFlowGraph& graph,
                      const std::vector<NodeKey>& nodes) {
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        if (graph.has_edge(nodes[i], nodes[i + 1], EdgeReason::FfiLink))
            return true;
    return false;
}

void enumerate_simple_paths(const DataFlowGraph& graph, const NodeKey& from,
                            const NodeKey& to, size_t limit,
                            std::vector<std::vector<NodeKey>>& out) {
    std::vector<NodeKey> path{from};
    std::set<NodeKey> on_path{from};
    long budget = 200000;

    std::function<void(const NodeKey&)> dfs = [&](const NodeKey& cur) {
        if (--budget < 0 || out.size() >= limit) return;
        if (cur == to) {
            out.push_back(path);
            return;
        }
        for (const NodeKey& next : graph.out_neighbors(cur)) {
            if (on_path.count(next)) continue;
            path.push_back(next);
            on_path.insert(next);
            dfs(next);
            path.pop_back();
            on_path.erase(next);
        }
    };
    dfs(from);
}

}  // namespace

std::vector<Path> find_paths(const DataFlowGraph& graph,
                             const std::vector<NodeKey>& sources,
                             const std::vector<NodeKey>& sinks,
                             int max_paths_per_pair) {
    std::vector<NodeKey> ordered_sources = sources;
    std::vector<NodeKey> ordered_sinks = sinks;
    std::sort(ordered_sources.begin(), ordered_sources.end());
    std::sort(ordered_sinks.begin(), ordered_sinks.end());

    std::vector<Path> result;
    for (const NodeKey& source : ordered_sources) {
        for (const NodeKey& sink : ordered_sinks) {
            if (source == sink) continue;
            const GraphNode* sink_node = graph.find(sink);
            if (!sink_node || sink_node->sink_sites.empty()) continue;

            std::vector<std::vector<NodeKey>> walks;
            if (max_paths_per_pair <= 1) {
                if (auto walk = shortest_path(graph, source, sink))
                    walks.push_back(std::move(*walk));
            } else {
                enumerate_simple_paths(graph, source, sink, 4096, walks);
                std::sort(walks.begin(), walks.end(),
                          [](const auto& a, const auto& b) {
                              if (a.size() != b.size())
                                  return a.size() < b.size();
                              return a < b;
                          });
                if (walks.size() > static_cast<size_t>(max_paths_per_pair))
                    walks.resize(static_cast<size_t>(max_paths_per_pair));
            }

            for (auto& walk : walks) {
                if (!contains_ffi_hop(graph, walk)) continue;
                Path path;
                path.nodes = std::move(walk);
                path.source_node = source;
                path.sink_node = sink;
                const SinkSite& first = sink_node->sink_sites.front();
                path.sink_category = first.category;
                path.sink_line = first.line;
                result.push_back(std::move(path));
            }
        }
    }
    return result;
}

}  // namespace jniflow
