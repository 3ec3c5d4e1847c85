#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "jniflow/slicer.hpp"

namespace jniflow {

namespace {

std::string trimmed(const std::string& text) {
    size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    size_t end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

std::optional<long> parse_int(std::string_view text) {
    if (text.empty()) return std::nullopt;
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                     value, 10);
    if (ec != std::errc() || ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

std::optional<long> literal_int(const AstNode& literal) {
    return parse_int(trimmed(literal.text));
}

bool is_name_leaf(const AstNode& node) {
    return node.kind == NodeKind::Name && !node.has_child(NodeKind::Name);
}

const AstNode* last_name_leaf(const AstNode& name_node) {
    const AstNode* last = nullptr;
    walk(name_node, [&](const AstNode& n) {
        if (is_name_leaf(n)) last = &n;
        return true;
    });
    return last;
}

const AstNode* climb_name_wrappers(const AstNode& node) {
    const AstNode* cur = &node;
    while (cur->parent && cur->parent->kind == NodeKind::Name)
        cur = cur->parent;
    return cur;
}

/// Identifier a name leaf stands for when it reads a variable: the first
/// segment of a qualified name, never a callee, never a type name.
std::optional<std::string> occurrence_var(const AstNode& leaf) {
    if (!is_name_leaf(leaf)) return std::nullopt;
    std::string text = trimmed(leaf.text);
    if (text.empty()) return std::nullopt;
    if (enclosing(leaf, NodeKind::Type)) return std::nullopt;
    if (leaf.parent && leaf.parent->kind == NodeKind::Name &&
        leaf.parent->first_child(NodeKind::Name) != &leaf)
        return std::nullopt;
    const AstNode* top = climb_name_wrappers(leaf);
    if (top->parent && top->parent->kind == NodeKind::Call &&
        top->parent->first_child(NodeKind::Name) == top &&
        last_name_leaf(*top) == &leaf)
        return std::nullopt;  // the function being invoked
    return text;
}

void collect_occurrences(const AstNode& node, std::vector<std::string>& out) {
    walk(node, [&](const AstNode& n) {
        if (auto var = occurrence_var(n)) out.push_back(*var);
        return true;
    });
}

struct QualifiedRead {
    std::string object;
    std::string field;
};

/// "obj.field" / "obj->field" with exactly two segments.
std::optional<QualifiedRead> qualified_read(const AstNode& name_node) {
    if (name_node.kind != NodeKind::Name) return std::nullopt;
    std::vector<const AstNode*> segments;
    for (const auto& child : name_node.children)
        if (child->kind == NodeKind::Name) segments.push_back(child.get());
    if (segments.size() != 2) return std::nullopt;
    if (name_node.has_child(NodeKind::Index) ||
        name_node.has_child(NodeKind::ArgumentList))
        return std::nullopt;
    return QualifiedRead{terminal_name(*segments[0]), terminal_name(*segments[1])};
}

void collect_qualified_reads(const AstNode& node,
                             std::vector<std::pair<QualifiedRead, int>>& out) {
    walk(node, [&](const AstNode& n) {
        if (n.kind != NodeKind::Name) return true;
        if (enclosing(n, NodeKind::Type)) return true;
        if (auto read = qualified_read(n)) {
            const AstNode* top = climb_name_wrappers(n);
            bool callee = top->parent && top->parent->kind == NodeKind::Call &&
                          top->parent->first_child(NodeKind::Name) == top;
            if (!callee) out.emplace_back(*read, n.line);
            return false;
        }
        return true;
    });
}

bool is_assign_op(std::string_view op) {
    static constexpr std::string_view ops[] = {
        "=",  "+=", "-=",  "*=",  "/=", "%=",
        "&=", "|=", "^=", "<<=", ">>="};
    return std::find(std::begin(ops), std::end(ops), op) != std::end(ops);
}

struct AssignView {
    const AstNode* expr = nullptr;
    const AstNode* target = nullptr;  // outermost target <name>
    std::string op;
    size_t rhs_begin = 0;  // index into expr->children
    bool target_indexed = false;
    bool target_simple = false;
    std::string target_var;  // first segment
};

std::optional<AssignView> assignment_of(const AstNode& expr) {
    if (expr.kind != NodeKind::Expr) return std::nullopt;
    AssignView view;
    view.expr = &expr;
    for (size_t i = 0; i < expr.children.size(); ++i) {
        const AstNode& child = *expr.children[i];
        if (child.kind == NodeKind::Name && !view.target) {
            view.target = &child;
            continue;
        }
        if (child.kind == NodeKind::Operator) {
            std::string op = trimmed(child.text);
            if (is_assign_op(op)) {
                if (!view.target) return std::nullopt;
                view.op = std::move(op);
                view.rhs_begin = i + 1;
                break;
            }
        }
    }
    if (view.op.empty()) return std::nullopt;
    const AstNode& target = *view.target;
    view.target_indexed = target.has_child(NodeKind::Index);
    bool qualified = target.has_child(NodeKind::Name);
    if (qualified) {
        const AstNode* first = target.first_child(NodeKind::Name);
        view.target_var = terminal_name(*first);
        view.target_simple = false;
        // "buf[i] = x" parses as a name wrapping a name and an index
        if (view.target_indexed && !qualified_read(target)) {
            // keep first-segment var; still an indexed element write
        }
    } else {
        view.target_var = trimmed(target.text);
        view.target_simple = !view.target_indexed;
    }
    if (qualified && !view.target_indexed) view.target_var.clear();  // field write
    return view;
}

/// `x++` / `++x` with a simple name.
std::optional<std::string> incr_target(const AstNode& expr) {
    if (expr.kind != NodeKind::Expr) return std::nullopt;
    const AstNode* name = nullptr;
    bool has_incr = false;
    for (const auto& child : expr.children) {
        if (child->kind == NodeKind::Name) {
            if (name) return std::nullopt;
            name = child.get();
        } else if (child->kind == NodeKind::Operator) {
            std::string op = trimmed(child->text);
            if (op == "++" || op == "--")
                has_incr = true;
            else if (!op.empty())
                return std::nullopt;
        } else if (child->kind != NodeKind::Literal) {
            return std::nullopt;
        }
    }
    if (!has_incr || !name || name->has_child(NodeKind::Name) ||
        name->has_child(NodeKind::Index))
        return std::nullopt;
    return trimmed(name->text);
}

const AstNode* call_argument_list(const AstNode& call) {
    for (const auto& child : call.children) {
        if (child->kind != NodeKind::ArgumentList) continue;
        if (const std::string* t = child->attribute("type");
            t && *t == "generic")
            continue;
        return child.get();
    }
    return nullptr;
}

RawValueEvent classify_rhs(const AstNode& expr, size_t begin, int line) {
    RawValueEvent event;
    event.line = line;
    event.kind = RawValueEvent::Kind::Unknown;

    std::vector<const AstNode*> parts;
    for (size_t i = begin; i < expr.children.size(); ++i)
        parts.push_back(expr.children[i].get());

    if (parts.size() == 1 && parts[0]->kind == NodeKind::Literal) {
        if (auto v = literal_int(*parts[0])) {
            event.kind = RawValueEvent::Kind::Int;
            event.int_value = *v;
        }
        return event;
    }
    if (parts.size() == 2 && parts[0]->kind == NodeKind::Operator &&
        trimmed(parts[0]->text) == "-" && parts[1]->kind == NodeKind::Literal) {
        if (auto v = literal_int(*parts[1])) {
            event.kind = RawValueEvent::Kind::Int;
            event.int_value = -*v;
        }
        return event;
    }
    if (parts.size() == 1 && parts[0]->kind == NodeKind::Name) {
        const AstNode& name = *parts[0];
        if (name.has_child(NodeKind::Index)) return event;
        if (auto read = qualified_read(name)) {
            event.kind = RawValueEvent::Kind::FieldRef;
            event.object = read->object;
            event.name = read->field;
            return event;
        }
        if (!name.has_child(NodeKind::Name)) {
            event.kind = RawValueEvent::Kind::Name;
            event.name = trimmed(name.text);
            return event;
        }
        return event;
    }
    // sizeof(x) possibly behind a cast: exactly one call in the subtree
    std::vector<const AstNode*> calls;
    for (const AstNode* part : parts)
        walk(*part, [&](const AstNode& n) {
            if (n.kind == NodeKind::Call) calls.push_back(&n);
            return true;
        });
    if (calls.size() == 1) {
        if (auto target = size_reference_target(*calls[0])) {
            event.kind = RawValueEvent::Kind::SizeOf;
            event.name = *target;
        }
    }
    return event;
}

}  // namespace

std::vector<std::string> variable_occurrences(const AstNode& node) {
    std::vector<std::string> out;
    collect_occurrences(node, out);
    return out;
}

std::optional<std::string> simple_assign_target(const AstNode& expr) {
    auto view = assignment_of(expr);
    if (!view || !view->target_simple) return std::nullopt;
    return view->target_var;
}

std::string strip_to_class_name(std::string type) {
    if (size_t lt = type.find('<'); lt != std::string::npos) type.resize(lt);
    while (!type.empty() &&
           (type.back() == '*' || type.back() == '&' || type.back() == ' '))
        type.pop_back();
    if (size_t pos = type.rfind("::"); pos != std::string::npos)
        type = type.substr(pos + 2);
    if (size_t dot = type.rfind('.'); dot != std::string::npos)
        type = type.substr(dot + 1);
    return type;
}

std::optional<RawValueEvent> classify_assignment(const AstNode& stmt) {
    std::optional<RawValueEvent> result;
    walk(stmt, [&](const AstNode& node) {
        if (result) return false;
        if (node.kind != NodeKind::Expr) return true;
        auto view = assignment_of(node);
        if (!view) return true;
        if (view->op == "=") {
            result = classify_rhs(node, view->rhs_begin, node.line);
        } else {
            RawValueEvent compound;
            compound.line = node.line;
            result = compound;
        }
        if (result->kind == RawValueEvent::Kind::Name &&
            result->name == view->target_var)
            result->kind = RawValueEvent::Kind::Unknown;
        return false;
    });
    return result;
}

std::string value_to_string(const ValueInfo& value) {
    if (std::holds_alternative<ValueUnknown>(value)) return "unknown";
    if (const auto* i = std::get_if<ValueInt>(&value))
        return "int(" + std::to_string(i->value) + ")";
    if (const auto* b = std::get_if<ValueBufferSize>(&value))
        return "bufsize(" + std::to_string(b->size) + ")";
    const auto& ref = std::get<ValueRef>(value);
    return "ref(" + ref.key.label() + ")";
}

std::string field_scope_name(std::string_view class_name) {
    return "<fields:" + std::string(class_name) + ">";
}

bool is_field_scope(std::string_view function_name) {
    return function_name.starts_with("<fields:");
}

std::optional<std::string> size_reference_target(const AstNode& call) {
    if (call.kind != NodeKind::Call) return std::nullopt;
    const AstNode* name = call.first_child(NodeKind::Name);
    if (!name) return std::nullopt;
    std::string callee = terminal_name(*name);
    const AstNode* args = call_argument_list(call);
    int argc = 0;
    const AstNode* first_arg = nullptr;
    if (args)
        for (const auto& a : args->children)
            if (a->kind == NodeKind::Argument) {
                if (++argc == 1) first_arg = a.get();
            }
    if (callee == "sizeof" && argc == 1 && first_arg) {
        const AstNode* expr = first_arg->first_child(NodeKind::Expr);
        if (!expr) return std::nullopt;
        if (expr->children.size() == 1 &&
            expr->children[0]->kind == NodeKind::Name &&
            !expr->children[0]->has_child(NodeKind::Name))
            return trimmed(expr->children[0]->text);
        return std::nullopt;
    }
    if ((callee == "size" || callee == "length") && argc == 0) {
        std::string receiver = receiver_of(*name);
        if (!receiver.empty() && receiver.find_first_of(".->:") == std::string::npos)
            return receiver;
    }
    return std::nullopt;
}

bool is_buffer_profile(const SliceProfile& profile) {
    return looks_like_buffer(profile.type_name) ||
           std::holds_alternative<ValueBufferSize>(profile.value);
}

bool looks_like_buffer(const std::optional<std::string>& type) {
    if (!type) return false;
    const std::string& t = *type;
    if (t.find('*') != std::string::npos || t.find('[') != std::string::npos)
        return true;
    for (std::string_view container :
         {"vector", "ByteBuffer", "ByteBuf", "Array"})
        if (t.find(container) != std::string::npos) return true;
    return false;
}

ValueInfo initial_value(const AstNode& decl) {
    // explicit array extent on the declarator
    if (const AstNode* name = declared_name_node(decl)) {
        if (const AstNode* index = name->first_child(NodeKind::Index)) {
            if (const AstNode* expr = index->first_child(NodeKind::Expr)) {
                if (expr->children.size() == 1 &&
                    expr->children[0]->kind == NodeKind::Literal) {
                    if (auto v = literal_int(*expr->children[0]); v && *v >= 0)
                        return ValueBufferSize{*v};
                }
            }
        }
    }
    const AstNode* init = decl.first_child(NodeKind::Init);
    if (!init) return ValueUnknown{};
    const AstNode* expr = init->first_child(NodeKind::Expr);
    if (!expr) return ValueUnknown{};
    if (expr->children.size() == 1 &&
        expr->children[0]->kind == NodeKind::Literal) {
        if (auto v = literal_int(*expr->children[0])) return ValueInt{*v};
        return ValueUnknown{};
    }
    // new byte[n]
    bool has_new = false;
    for (const auto& child : expr->children)
        if (child->kind == NodeKind::Operator && trimmed(child->text) == "new")
            has_new = true;
    if (has_new) {
        std::optional<long> extent;
        walk(*expr, [&](const AstNode& n) {
            if (n.kind == NodeKind::Index) {
                if (const AstNode* e = n.first_child(NodeKind::Expr)) {
                    if (e->children.size() == 1 &&
                        e->children[0]->kind == NodeKind::Literal)
                        extent = literal_int(*e->children[0]);
                }
                return false;
            }
            return true;
        });
        if (extent && *extent >= 0) return ValueBufferSize{*extent};
    }
    return ValueUnknown{};
}

std::vector<CFunctionUse> extract_cfunctions(const AstNode& stmt,
                                             std::string_view var,
                                             std::optional<std::string> var_type) {
    std::vector<CFunctionUse> result;
    walk(stmt, [&](const AstNode& node) {
        if (node.kind != NodeKind::Call) return true;
        const AstNode* name = node.first_child(NodeKind::Name);
        const AstNode* args = call_argument_list(node);
        if (!name || !args) return true;
        int argc = 0;
        for (const auto& a : args->children)
            if (a->kind == NodeKind::Argument) ++argc;
        int position = 0;
        for (const auto& a : args->children) {
            if (a->kind != NodeKind::Argument) continue;
            std::vector<std::string> vars;
            collect_occurrences(*a, vars);
            if (std::find(vars.begin(), vars.end(), var) != vars.end()) {
                result.push_back(CFunctionUse{terminal_name(*name), position,
                                              var_type, node.line, argc});
                break;
            }
            ++position;
        }
        return true;
    });
    return result;
}

namespace {

class FunctionSlicer {
public:
    FunctionSlicer(const AstUnit& unit, const SymbolTable& symbols,
                   const FunctionInfo& fn, SliceProfileMap& out)
        : unit_(unit), symbols_(symbols), fn_(fn), out_(out) {
        if (const AstNode* cls = enclosing(*fn.node, NodeKind::Class))
            class_ctx_ = class_symbol(*cls);
        else if (const AstNode* st = enclosing(*fn.node, NodeKind::Struct))
            class_ctx_ = class_symbol(*st);
    }

    void run() {
        add_parameter_profiles();
        add_declaration_profiles();
        add_implicit_profiles();
        record_flows();
        finalize();
    }

private:
    std::optional<int> class_symbol(const AstNode& cls) const {
        if (const AstNode* name = cls.first_child(NodeKind::Name))
            return symbols_.find_class(terminal_name(*name));
        return std::nullopt;
    }

    SliceProfile* find(const std::string& var) {
        auto it = local_.find(var);
        return it == local_.end() ? nullptr : &out_.at(it->second);
    }

    std::optional<std::string> resolved_type(const std::string& declared,
                                             const std::string& var) const {
        if (!declared.empty()) return declared;
        return symbols_.resolve_type(var, class_ctx_, unit_.file_name);
    }

    SliceProfile& add_profile(std::string var, std::optional<std::string> type,
                              int line) {
        SliceProfile profile;
        profile.file_name = unit_.file_name;
        profile.function_name = fn_.name;
        profile.var_name = var;
        profile.type_name = std::move(type);
        profile.defined_position = line;
        profile.unit = &unit_;
        profile.function_node = fn_.node;
        ProfileKey key = profile.profile_key();
        auto [it, inserted] = out_.emplace(key, std::move(profile));
        local_.emplace(std::move(var), key);
        return it->second;
    }

    void add_parameter_profiles() {
        const AstNode* params = fn_.node->first_child(NodeKind::ParameterList);
        if (!params) return;
        int position = 0;
        for (const auto& param : params->children) {
            if (param->kind != NodeKind::Parameter) continue;
            const AstNode* decl = param->first_child(NodeKind::Decl);
            if (!decl) continue;
            std::string var = declared_name(*decl);
            if (var.empty()) continue;
            std::string declared;
            if (const AstNode* type = decl->first_child(NodeKind::Type))
                declared = canonical_type(*type);
            SliceProfile& profile =
                add_profile(var, resolved_type(declared, var), decl->line);
            profile.is_parameter = true;
            profile.param_index = position;
            profile.value = initial_value(*decl);
            if (const AstNode* name = declared_name_node(*decl))
                definition_names_.insert(name);
            ++position;
        }
    }

    // Declarations anywhere in the body, loop headers included; nested
    // functions and local classes are separate scopes.
    void walk_body(const std::function<bool(const AstNode&)>& fn) const {
        for (const auto& child : fn_.node->children) {
            if (child->kind == NodeKind::ParameterList) continue;
            walk(*child, [&](const AstNode& n) {
                switch (n.kind) {
                    case NodeKind::Function:
                    case NodeKind::FunctionDecl:
                    case NodeKind::Class:
                    case NodeKind::Struct:
                        return false;
                    default:
                        return fn(n);
                }
            });
        }
    }

    void add_declaration_profiles() {
        walk_body([&](const AstNode& node) {
            if (node.kind != NodeKind::Decl) return true;
            if (node.parent && node.parent->kind == NodeKind::Parameter)
                return true;
            if (enclosing(node, NodeKind::Type)) return true;
            std::string var = declared_name(node);
            if (var.empty() || local_.count(var)) return true;
            std::string declared;
            if (const AstNode* type = node.first_child(NodeKind::Type))
                declared = canonical_type(*type);
            SliceProfile& profile =
                add_profile(var, resolved_type(declared, var), node.line);
            profile.value = initial_value(node);
            decl_nodes_.emplace_back(&node, profile.profile_key());
            if (const AstNode* name = declared_name_node(node))
                definition_names_.insert(name);
            return true;
        });
    }

    // A variable assigned but never declared in scope still gets a
    // profile; undeclared receivers in callback-style code stay trackable.
    void add_implicit_profiles() {
        walk_body([&](const AstNode& node) {
            auto view = assignment_of(node);
            if (!view || !view->target_simple) return true;
            if (local_.count(view->target_var)) return true;
            SliceProfile& profile = add_profile(
                view->target_var,
                symbols_.resolve_type(view->target_var, class_ctx_,
                                      unit_.file_name),
                node.line);
            profile.is_implicit = true;
            return true;
        });
    }

    void add_dependents(const AstNode& rhs_holder, size_t begin,
                        const std::string& target) {
        std::vector<std::string> vars;
        for (size_t i = begin; i < rhs_holder.children.size(); ++i)
            collect_occurrences(*rhs_holder.children[i], vars);
        for (const std::string& var : vars) {
            if (var == target) continue;
            SliceProfile* profile = find(var);
            if (!profile) continue;
            auto& dvars = profile->dependent_vars;
            if (std::find(dvars.begin(), dvars.end(), target) == dvars.end())
                dvars.push_back(target);
        }
    }

    void add_field_reads(const AstNode& rhs_holder, size_t begin,
                         SliceProfile& target) {
        std::vector<std::pair<QualifiedRead, int>> reads;
        for (size_t i = begin; i < rhs_holder.children.size(); ++i)
            collect_qualified_reads(*rhs_holder.children[i], reads);
        for (auto& [read, line] : reads)
            target.field_reads.push_back(
                FieldRead{read.object, read.field, line});
    }

    void record_flows() {
        walk_body([&](const AstNode& node) {
            if (auto var = occurrence_var(node)) {
                if (SliceProfile* profile = find(*var)) {
                    if (!definition_names_.count(climb_name_wrappers(node)))
                        profile->used_positions.push_back(node.line);
                }
            }
            if (node.kind == NodeKind::Expr) record_expr(node);
            if (node.kind == NodeKind::Decl) record_decl(node);
            if (node.kind == NodeKind::Call) record_call(node);
            return true;
        });
    }

    void record_expr(const AstNode& expr) {
        if (auto incr = incr_target(expr)) {
            if (SliceProfile* profile = find(*incr)) {
                RawValueEvent event;
                event.line = expr.line;
                event.kind = RawValueEvent::Kind::Unknown;
                profile->raw_events.push_back(event);
            }
            return;
        }
        auto view = assignment_of(expr);
        if (!view) return;
        if (view->target_simple) {
            SliceProfile* profile = find(view->target_var);
            if (!profile) return;
            RawValueEvent event;
            event.line = expr.line;
            if (view->op == "=")
                event = classify_rhs(expr, view->rhs_begin, expr.line);
            if (event.kind == RawValueEvent::Kind::Name &&
                event.name == view->target_var)
                event.kind = RawValueEvent::Kind::Unknown;  // x = x ...
            profile->raw_events.push_back(event);
            add_dependents(expr, view->rhs_begin, view->target_var);
            add_field_reads(expr, view->rhs_begin, *profile);
            return;
        }
        if (view->target_indexed && !view->target_var.empty()) {
            // element write: data flows into the buffer, size unchanged
            add_dependents(expr, view->rhs_begin, view->target_var);
        }
    }

    void record_decl(const AstNode& decl) {
        if (decl.parent && decl.parent->kind == NodeKind::Parameter) return;
        if (enclosing(decl, NodeKind::Type)) return;
        std::string var = declared_name(decl);
        SliceProfile* profile = find(var);
        if (!profile) return;
        if (const AstNode* init = decl.first_child(NodeKind::Init)) {
            if (const AstNode* expr = init->first_child(NodeKind::Expr)) {
                if (std::holds_alternative<ValueUnknown>(profile->value)) {
                    RawValueEvent event = classify_rhs(*expr, 0, decl.line);
                    if (event.kind != RawValueEvent::Kind::Unknown)
                        profile->raw_events.push_back(event);
                }
                add_dependents(*init, 0, var);
                add_field_reads(*init, 0, *profile);
            }
        }
        // constructor-style initialization: vector<unsigned char> copy(src);
        if (const AstNode* args = decl.first_child(NodeKind::ArgumentList)) {
            if (const std::string* t = args->attribute("type");
                !t || *t != "generic") {
                for (const auto& arg : args->children) {
                    if (arg->kind != NodeKind::Argument) continue;
                    add_dependents(*arg, 0, var);
                }
                add_field_reads(*args, 0, *profile);
            }
        }
    }

    void record_call(const AstNode& call) {
        const AstNode* name = call.first_child(NodeKind::Name);
        const AstNode* args = call_argument_list(call);
        if (!name || !args) return;
        std::string callee = terminal_name(*name);
        int argc = 0;
        for (const auto& a : args->children)
            if (a->kind == NodeKind::Argument) ++argc;
        std::set<std::string> recorded;
        int position = 0;
        for (const auto& arg : args->children) {
            if (arg->kind != NodeKind::Argument) continue;
            std::vector<std::string> vars;
            collect_occurrences(*arg, vars);
            for (const std::string& var : vars) {
                if (recorded.count(var)) continue;
                SliceProfile* profile = find(var);
                if (!profile) continue;
                profile->c_functions.push_back(CFunctionUse{
                    callee, position, profile->type_name, call.line, argc});
                recorded.insert(var);
            }
            ++position;
        }
    }

    void finalize() {
        for (auto& [var, key] : local_) {
            SliceProfile& profile = out_.at(key);
            auto& used = profile.used_positions;
            std::sort(used.begin(), used.end());
            used.erase(std::unique(used.begin(), used.end()), used.end());
            auto& events = profile.raw_events;
            std::stable_sort(events.begin(), events.end(),
                             [](const RawValueEvent& a, const RawValueEvent& b) {
                                 return a.line < b.line;
                             });
        }
    }

    const AstUnit& unit_;
    const SymbolTable& symbols_;
    const FunctionInfo& fn_;
    SliceProfileMap& out_;
    std::map<std::string, ProfileKey> local_;
    std::set<const AstNode*> definition_names_;
    std::vector<std::pair<const AstNode*, ProfileKey>> decl_nodes_;
    std::optional<int> class_ctx_;
};

void add_field_profiles(const AstUnit& unit, const SymbolTable& symbols,
                        SliceProfileMap& out) {
    walk_unit(unit, [&](const AstNode& node) {
        if (node.kind != NodeKind::Class && node.kind != NodeKind::Struct)
            return true;
        const AstNode* name = node.first_child(NodeKind::Name);
        const AstNode* block = node.first_child(NodeKind::Block);
        if (!name || !block) return true;
        std::string scope = field_scope_name(terminal_name(*name));
        walk(*block, [&](const AstNode& member) {
            switch (member.kind) {
                case NodeKind::Function:
                case NodeKind::FunctionDecl:
                case NodeKind::Class:
                case NodeKind::Struct:
                    return false;
                case NodeKind::Decl: {
                    std::string var = declared_name(member);
                    if (var.empty()) return true;
                    SliceProfile profile;
                    profile.file_name = unit.file_name;
                    profile.function_name = scope;
                    profile.var_name = var;
                    if (const AstNode* type = member.first_child(NodeKind::Type)) {
                        if (std::string t = canonical_type(*type); !t.empty())
                            profile.type_name = std::move(t);
                    }
                    if (!profile.type_name)
                        profile.type_name = symbols.resolve_type(
                            var, std::nullopt, unit.file_name);
                    profile.defined_position = member.line;
                    profile.value = initial_value(member);
                    profile.unit = &unit;
                    out.emplace(profile.profile_key(), std::move(profile));
                    return true;
                }
                default:
                    return true;
            }
        });
        return true;  // nested classes handled by the outer walk
    });
}

}  // namespace

SliceProfileMap build_slice_profiles(const AstUnit& unit,
                                     const SymbolTable& symbols) {
    SliceProfileMap out;
    add_field_profiles(unit, symbols, out);
    for (const FunctionInfo& fn : functions_of(unit)) {
        FunctionSlicer slicer(unit, symbols, fn, out);
        slicer.run();
    }
    return out;
}

void merge_profiles(SliceProfileMap& into, SliceProfileMap&& fragment) {
    into.merge(std::move(fragment));
}

std::string dump_profiles(const SliceProfileMap& profiles) {
    std::ostringstream out;
    for (const auto& [key, profile] : profiles) {
        out << profile.file_name << '|' << profile.function_name << '|'
            << profile.var_name << '|'
            << profile.type_name.value_or("<unresolved>") << '|'
            << profile.defined_position << "|used:";
        for (size_t i = 0; i < profile.used_positions.size(); ++i)
            out << (i ? "," : "") << profile.used_positions[i];
        out << "|dvars:";
        for (size_t i = 0; i < profile.dependent_vars.size(); ++i)
            out << (i ? "," : "") << profile.dependent_vars[i];
        out << "|cfuncs:";
        for (size_t i = 0; i < profile.c_functions.size(); ++i) {
            const CFunctionUse& use = profile.c_functions[i];
            out << (i ? "," : "") << use.callee_name << '@' << use.arg_position
                << ':' << use.call_line;
        }
        out << "|value:" << value_to_string(profile.value) << '\n';
    }
    return out.str();
}

}  // namespace jniflow
