#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "jniflow/dataflow.hpp"

namespace jniflow {

std::string_view to_string(EdgeReason reason) {
    switch (reason) {
        case EdgeReason::ArgPass: return "ArgPass";
        case EdgeReason::FfiLink: return "FfiLink";
        case EdgeReason::DVar: return "DVar";
        case EdgeReason::Assign: return "Assign";
    }
    return "?";
}

void DataFlowGraph::add_node(const NodeKey& key, const SliceProfile* profile) {
    auto [it, inserted] = nodes.emplace(key, GraphNode{});
    if (inserted || !it->second.profile) it->second.profile = profile;
}

bool DataFlowGraph::add_edge(const NodeKey& from, const NodeKey& to,
                             EdgeReason reason) {
    if (!nodes.count(from) || !nodes.count(to)) return false;
    adjacency_fresh_ = false;
    return edges.insert(Edge{from, to, reason}).second;
}

bool DataFlowGraph::has_edge(const NodeKey& from, const NodeKey& to,
                             EdgeReason reason) const {
    return edges.count(Edge{from, to, reason}) > 0;
}

bool DataFlowGraph::has_any_edge(const NodeKey& from, const NodeKey& to) const {
    auto it = edges.lower_bound(Edge{from, to, EdgeReason::ArgPass});
    return it != edges.end() && it->from == from && it->to == to;
}

const GraphNode* DataFlowGraph::find(const NodeKey& key) const {
    auto it = nodes.find(key);
    return it == nodes.end() ? nullptr : &it->second;
}

const SliceProfile* DataFlowGraph::profile_of(const NodeKey& key) const {
    const GraphNode* node = find(key);
    return node ? node->profile : nullptr;
}

void DataFlowGraph::refresh_adjacency() const {
    if (adjacency_fresh_) return;
    out_.clear();
    in_.clear();
    for (const auto& [key, node] : nodes) {
        out_[key];
        in_[key];
    }
    for (const Edge& edge : edges) {
        out_[edge.from].push_back(edge.to);
        in_[edge.to].push_back(edge.from);
    }
    auto dedupe = [](std::vector<NodeKey>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    for (auto& [key, v] : out_) dedupe(v);
    for (auto& [key, v] : in_) dedupe(v);
    adjacency_fresh_ = true;
}

const std::vector<NodeKey>& DataFlowGraph::out_neighbors(
    const NodeKey& key) const {
    refresh_adjacency();
    static const std::vector<NodeKey> empty;
    auto it = out_.find(key);
    return it == out_.end() ? empty : it->second;
}

const std::vector<NodeKey>& DataFlowGraph::in_neighbors(
    const NodeKey& key) const {
    refresh_adjacency();
    static const std::vector<NodeKey> empty;
    auto it = in_.find(key);
    return it == in_.end() ? empty : it->second;
}

// --- FFI naming --------------------------------------------------------------

namespace {

void append_escaped(std::string& out, std::string_view segment) {
    for (char c : segment) {
        if (c == '_')
            out += "_1";
        else
            out += c;
    }
}

std::string trim_copy(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string link_ffi(std::string_view package_name, std::string_view class_name,
                     std::string_view method_name) {
    std::string out = "Java";
    size_t begin = 0;
    while (begin < package_name.size()) {
        size_t dot = package_name.find('.', begin);
        if (dot == std::string_view::npos) dot = package_name.size();
        out += '_';
        append_escaped(out, package_name.substr(begin, dot - begin));
        begin = dot + 1;
    }
    out += '_';
    append_escaped(out, class_name);
    out += '_';
    append_escaped(out, method_name);
    return out;
}

std::optional<std::tuple<std::string, std::string, std::string>> demangle_ffi(
    std::string_view name) {
    if (!name.starts_with("Java_")) return std::nullopt;
    name.remove_prefix(5);
    std::vector<std::string> segments(1);
    for (size_t i = 0; i < name.size(); ++i) {
        if (name[i] != '_') {
            segments.back() += name[i];
        } else if (i + 1 < name.size() && name[i + 1] == '1') {
            segments.back() += '_';
            ++i;
        } else {
            segments.emplace_back();
        }
    }
    if (segments.size() < 2) return std::nullopt;
    for (const std::string& s : segments)
        if (s.empty()) return std::nullopt;
    std::string method = segments.back();
    std::string cls = segments[segments.size() - 2];
    std::string package;
    for (size_t i = 0; i + 2 < segments.size(); ++i) {
        if (!package.empty()) package += '.';
        package += segments[i];
    }
    return std::make_tuple(package, cls, method);
}

FfiOverrides FfiOverrides::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read JNI mapping file '" + path.string() + "'");
    FfiOverrides overrides;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim_copy(line);
        if (text.empty() || text[0] == '#') continue;
        size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'qualified.Class.method = c_function'");
        std::string method = trim_copy(text.substr(0, eq));
        std::string target = trim_copy(text.substr(eq + 1));
        if (method.empty() || target.empty())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'qualified.Class.method = c_function'");
        overrides.by_method[method] = target;
    }
    return overrides;
}

const std::string* FfiOverrides::lookup(
    const std::string& qualified_method) const {
    auto it = by_method.find(qualified_method);
    return it == by_method.end() ? nullptr : &it->second;
}

// --- profile lookup helpers --------------------------------------------------

namespace {

std::string last_cpp_segment(const std::string& name) {
    size_t pos = name.rfind("::");
    return pos == std::string::npos ? name : name.substr(pos + 2);
}

const SliceProfile* find_field_profile(const SliceProfileMap& profiles,
                                       const std::string& class_name,
                                       const std::string& field) {
    const std::string scope = field_scope_name(class_name);
    const SliceProfile* best = nullptr;
    for (const auto& [key, profile] : profiles) {
        if (key.function_name != scope || key.var_name != field) continue;
        if (!best || key.file_name < best->file_name) best = &profile;
    }
    return best;
}

const SliceProfile* find_local(const SliceProfileMap& profiles,
                               const std::string& file,
                               const std::string& function,
                               const std::string& var) {
    auto it = profiles.find(ProfileKey{file, function, var});
    return it == profiles.end() ? nullptr : &it->second;
}

/// Resolve a by-name reference from inside `context`: same function,
/// then a field of a class declared in the same file.
const SliceProfile* resolve_named(const SliceProfileMap& profiles,
                                  const SliceProfile& context,
                                  const std::string& name) {
    if (const SliceProfile* p = find_local(profiles, context.file_name,
                                           context.function_name, name))
        return p;
    for (const auto& [key, profile] : profiles) {
        if (key.file_name != context.file_name) continue;
        if (!is_field_scope(key.function_name)) continue;
        if (key.var_name == name) return &profile;
    }
    return nullptr;
}

const SliceProfile* resolve_field_read(const SliceProfileMap& profiles,
                                       const SliceProfile& context,
                                       const std::string& object,
                                       const std::string& field) {
    const SliceProfile* obj = find_local(profiles, context.file_name,
                                         context.function_name, object);
    if (!obj || !obj->type_name) return nullptr;
    std::string cls = strip_to_class_name(*obj->type_name);
    if (cls.empty()) return nullptr;
    return find_field_profile(profiles, cls, field);
}

ValueInfo resolve_raw_event(const RawValueEvent& raw, const SliceProfile& owner,
                            const SliceProfileMap& profiles) {
    switch (raw.kind) {
        case RawValueEvent::Kind::Int:
            return ValueInt{raw.int_value};
        case RawValueEvent::Kind::Name:
            if (const SliceProfile* p = resolve_named(profiles, owner, raw.name))
                return ValueRef{p->key()};
            return ValueUnknown{};
        case RawValueEvent::Kind::FieldRef:
            if (const SliceProfile* p =
                    resolve_field_read(profiles, owner, raw.object, raw.name))
                return ValueRef{p->key()};
            return ValueUnknown{};
        case RawValueEvent::Kind::SizeOf:
            // the alias holds the referenced buffer's size
            if (const SliceProfile* p = resolve_named(profiles, owner, raw.name))
                return ValueRef{p->key()};
            return ValueUnknown{};
        case RawValueEvent::Kind::Unknown:
            break;
    }
    return ValueUnknown{};
}

bool type_matches(const std::optional<std::string>& arg,
                  const std::string& param) {
    if (!arg || param.empty()) return true;  // unresolved matches anything
    return *arg == param;
}

}  // namespace

const SliceProfile* find_callee_profile(const CalleeQuery& query,
                                        const SliceProfileMap& profiles,
                                        std::span<const FunctionInfo> functions,
                                        Diagnostics* diagnostics) {
    std::vector<const FunctionInfo*> candidates;
    for (const FunctionInfo& fn : functions) {
        if (!fn.unit) continue;
        bool fn_is_java = fn.unit->language == Language::Java;
        if (fn_is_java != query.caller_is_java) continue;
        if (fn.name != query.callee_name &&
            last_cpp_segment(fn.name) != query.callee_name)
            continue;
        if (static_cast<int>(fn.parameters.size()) != query.call_arg_count)
            continue;
        if (query.arg_position >= static_cast<int>(fn.parameters.size()))
            continue;
        if (!type_matches(query.arg_type,
                          fn.parameters[query.arg_position].type))
            continue;
        candidates.push_back(&fn);
    }
    if (candidates.empty()) return nullptr;
    std::sort(candidates.begin(), candidates.end(),
              [&](const FunctionInfo* a, const FunctionInfo* b) {
                  bool a_local = a->unit->file_name == query.caller_file;
                  bool b_local = b->unit->file_name == query.caller_file;
                  if (a_local != b_local) return a_local;
                  if (a->unit->file_name != b->unit->file_name)
                      return a->unit->file_name < b->unit->file_name;
                  return a->line < b->line;
              });
    if (candidates.size() > 1 && diagnostics)
        diagnostics->add("ambiguous-callee",
                         "call to '" + query.callee_name + "' matches " +
                             std::to_string(candidates.size()) +
                             " definitions; picking '" +
                             candidates[0]->unit->file_name + "'",
                         query.caller_file);
    const FunctionInfo* chosen = candidates[0];
    const std::string& param =
        chosen->parameters[static_cast<size_t>(query.arg_position)].name;
    return find_local(profiles, chosen->unit->file_name, chosen->name, param);
}

const SliceProfile* map_ffi_arguments(int java_arg_position,
                                      const FunctionInfo& jni_function,
                                      const SliceProfileMap& profiles,
                                      Diagnostics& diagnostics) {
    int jni_position = java_arg_position + 2;  // env + receiver come first
    if (jni_position >= static_cast<int>(jni_function.parameters.size())) {
        diagnostics.add(
            "ffi-arity",
            "JNI function '" + jni_function.name + "' has " +
                std::to_string(jni_function.parameters.size()) +
                " parameters; cannot map Java argument " +
                std::to_string(java_arg_position),
            jni_function.unit ? jni_function.unit->file_name : "",
            jni_function.line);
        return nullptr;
    }
    const std::string& param =
        jni_function.parameters[static_cast<size_t>(jni_position)].name;
    return find_local(profiles, jni_function.unit->file_name, jni_function.name,
                      param);
}

ValueInfo update_value(SliceProfile& profile, const AstNode& assign_stmt,
                       const SliceProfileMap& profiles) {
    ValueInfo resolved = ValueUnknown{};
    int line = assign_stmt.line;
    if (auto raw = classify_assignment(assign_stmt)) {
        resolved = resolve_raw_event(*raw, profile, profiles);
        line = raw->line;
    }
    profile.events.push_back(ValueEvent{line, resolved});
    std::stable_sort(profile.events.begin(), profile.events.end(),
                     [](const ValueEvent& a, const ValueEvent& b) {
                         return a.line < b.line;
                     });
    return resolved;
}

// --- Algorithm: combine slice profiles into one graph ------------------------

namespace {

bool is_jni_callback_name(const std::string& callee) {
    if (callee.rfind("Call", 0) == 0 &&
        callee.find("Method") != std::string::npos)
        return true;
    return callee == "NewObject" || callee == "NewObjectArray";
}

struct FunctionIndex {
    std::map<std::pair<std::string, std::string>, const FunctionInfo*> by_key;
    std::map<std::string, std::vector<const FunctionInfo*>> natives_by_class;

    explicit FunctionIndex(std::span<const FunctionInfo> functions) {
        for (const FunctionInfo& fn : functions) {
            if (!fn.unit) continue;
            by_key.emplace(std::make_pair(fn.unit->file_name, fn.name), &fn);
            if (fn.is_native) natives_by_class[fn.qualified_class_name]
                .push_back(&fn);
        }
    }

    const FunctionInfo* find(const std::string& file,
                             const std::string& function) const {
        auto it = by_key.find(std::make_pair(file, function));
        return it == by_key.end() ? nullptr : it->second;
    }
};

}  // namespace

DataFlowGraph analyse_slices(SliceProfileMap& profiles,
                             const ProjectContext& context,
                             Diagnostics& diagnostics) {
    FunctionIndex index(context.functions);

    // duplicate native names in one class would need the overload suffix
    // convention, which is not supported
    for (const auto& [cls, natives] : index.natives_by_class) {
        std::map<std::string, int> names;
        for (const FunctionInfo* fn : natives) ++names[fn->name];
        for (const auto& [name, count] : names)
            if (count > 1)
                diagnostics.add("jni-overload",
                                "class '" + cls + "' declares " +
                                    std::to_string(count) + " native methods "
                                    "named '" + name +
                                    "'; overloaded natives are not linked");
    }

    // resolve pending value events now that the whole project is in view
    for (auto& [key, profile] : profiles) {
        profile.events.clear();
        for (const RawValueEvent& raw : profile.raw_events)
            profile.events.push_back(
                ValueEvent{raw.line, resolve_raw_event(raw, profile, profiles)});
    }

    DataFlowGraph graph;
    for (const auto& [key, profile] : profiles)
        graph.add_node(profile.key(), &profile);

    std::deque<ProfileKey> worklist;
    std::set<ProfileKey> visited;
    for (const auto& [key, profile] : profiles) worklist.push_back(key);

    auto enqueue = [&](const SliceProfile* target) {
        if (target && !visited.count(target->profile_key()))
            worklist.push_back(target->profile_key());
    };

    while (!worklist.empty()) {
        ProfileKey current = worklist.front();
        worklist.pop_front();
        if (!visited.insert(current).second) continue;
        const SliceProfile& profile = profiles.at(current);
        bool caller_is_java =
            profile.unit && profile.unit->language == Language::Java;

        // argument passing into project functions
        for (const CFunctionUse& use : profile.c_functions) {
            if (!caller_is_java && is_jni_callback_name(use.callee_name)) {
                diagnostics.add("jni-callback",
                                "call into the JVM ('" + use.callee_name +
                                    "') is not modeled as a data-flow edge",
                                profile.file_name, use.call_line);
                continue;
            }
            CalleeQuery query{use.callee_name, use.arg_position, use.arg_type,
                              use.call_arg_count, profile.file_name,
                              caller_is_java};
            const SliceProfile* callee =
                find_callee_profile(query, profiles, context.functions,
                                    &diagnostics);
            if (!callee) {
                diagnostics.add("unresolved-callee",
                                "no project definition matches call to '" +
                                    use.callee_name + "' (arity " +
                                    std::to_string(use.call_arg_count) + ")",
                                profile.file_name, use.call_line);
                continue;
            }
            graph.add_edge(profile.key(), callee->key(), EdgeReason::ArgPass);
            enqueue(callee);
        }

        // Java native declaration: cross the FFI fence
        const FunctionInfo* enclosing_fn =
            index.find(profile.file_name, profile.function_name);
        if (profile.is_parameter && enclosing_fn && enclosing_fn->is_native &&
            caller_is_java) {
            std::string qualified = enclosing_fn->qualified_class_name.empty()
                                        ? enclosing_fn->name
                                        : enclosing_fn->qualified_class_name +
                                              "." + enclosing_fn->name;
            std::string target_name;
            if (context.overrides) {
                if (const std::string* mapped =
                        context.overrides->lookup(qualified))
                    target_name = *mapped;
            }
            if (target_name.empty()) {
                std::string package;
                std::string cls = enclosing_fn->qualified_class_name;
                if (size_t dot = cls.rfind('.'); dot != std::string::npos) {
                    package = cls.substr(0, dot);
                    cls = cls.substr(dot + 1);
                }
                target_name = link_ffi(package, cls, enclosing_fn->name);
            }

            std::vector<const FunctionInfo*> targets;
            for (const FunctionInfo& fn : context.functions)
                if (fn.unit && is_native_side(fn.unit->language) &&
                    fn.body_present && fn.name == target_name)
                    targets.push_back(&fn);
            std::sort(targets.begin(), targets.end(),
                      [](const FunctionInfo* a, const FunctionInfo* b) {
                          return a->unit->file_name < b->unit->file_name;
                      });
            if (targets.empty()) {
                diagnostics.add("ffi-link",
                                "no C/C++ function named '" + target_name +
                                    "' for native method '" + qualified + "'",
                                profile.file_name, enclosing_fn->line);
            } else {
                if (targets.size() > 1)
                    diagnostics.add("ffi-link",
                                    "'" + target_name + "' is defined in " +
                                        std::to_string(targets.size()) +
                                        " files; picking '" +
                                        targets[0]->unit->file_name + "'");
                const SliceProfile* jni_param = map_ffi_arguments(
                    profile.param_index, *targets[0], profiles, diagnostics);
                if (jni_param) {
                    graph.add_edge(profile.key(), jni_param->key(),
                                   EdgeReason::FfiLink);
                    enqueue(jni_param);
                }
            }
        }

        // data dependence
        for (const std::string& dvar : profile.dependent_vars) {
            const SliceProfile* dep = resolve_named(profiles, profile, dvar);
            if (!dep) continue;
            bool pure_copy = false;
            for (const RawValueEvent& raw : dep->raw_events)
                if (raw.kind == RawValueEvent::Kind::Name &&
                    raw.name == profile.var_name)
                    pure_copy = true;
            graph.add_edge(profile.key(), dep->key(),
                           pure_copy ? EdgeReason::Assign : EdgeReason::DVar);
            enqueue(dep);
        }

        // values read out of class fields flow from the field profile
        for (const FieldRead& read : profile.field_reads) {
            const SliceProfile* field =
                resolve_field_read(profiles, profile, read.object, read.field);
            if (!field) continue;
            graph.add_edge(field->key(), profile.key(), EdgeReason::DVar);
            enqueue(field);
        }
    }

    return graph;
}

std::string to_dot(const DataFlowGraph& graph) {
    std::ostringstream out;
    out << "digraph dataflow {\n";
    out << "  node [shape=box, fontname=\"monospace\"];\n";
    std::map<NodeKey, int> ids;
    int next = 0;
    for (const auto& [key, node] : graph.nodes) {
        ids[key] = next;
        out << "  n" << next << " [label=\"" << key.label() << "\"";
        if (node.is_source_candidate) out << ", color=blue";
        if (!node.sink_sites.empty()) out << ", color=red";
        out << "];\n";
        ++next;
    }
    for (const Edge& edge : graph.edges)
        out << "  n" << ids.at(edge.from) << " -> n" << ids.at(edge.to)
            << " [label=\"" << to_string(edge.reason) << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace jniflow
