#include <algorithm>
#include <cctype>
#include <sstream>

#include "jniflow/ast.hpp"

namespace jniflow {

std::string_view to_string(Language lang) {
    switch (lang) {
        case Language::Java: return "Java";
        case Language::C: return "C";
        case Language::CPlusPlus: return "C++";
    }
    return "?";
}

bool is_native_side(Language lang) { return lang != Language::Java; }

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Class: return "class";
        case NodeKind::Struct: return "struct";
        case NodeKind::Function: return "function";
        case NodeKind::FunctionDecl: return "function_decl";
        case NodeKind::ParameterList: return "parameter_list";
        case NodeKind::Parameter: return "parameter";
        case NodeKind::DeclStmt: return "decl_stmt";
        case NodeKind::Decl: return "decl";
        case NodeKind::ExprStmt: return "expr_stmt";
        case NodeKind::Expr: return "expr";
        case NodeKind::Call: return "call";
        case NodeKind::ArgumentList: return "argument_list";
        case NodeKind::Argument: return "argument";
        case NodeKind::Block: return "block";
        case NodeKind::IfStmt: return "if";
        case NodeKind::Condition: return "condition";
        case NodeKind::ForLoop: return "for";
        case NodeKind::WhileLoop: return "while";
        case NodeKind::Index: return "index";
        case NodeKind::Name: return "name";
        case NodeKind::Literal: return "literal";
        case NodeKind::Operator: return "operator";
        case NodeKind::Specifier: return "specifier";
        case NodeKind::Init: return "init";
        case NodeKind::Type: return "type";
        case NodeKind::Unknown: return "unknown";
    }
    return "?";
}

const std::string* AstNode::attribute(std::string_view name) const {
    for (const auto& [key, value] : attributes)
        if (key == name) return &value;
    return nullptr;
}

bool AstNode::has_child(NodeKind k) const { return first_child(k) != nullptr; }

const AstNode* AstNode::first_child(NodeKind k) const {
    for (const auto& child : children)
        if (child->kind == k) return child.get();
    return nullptr;
}

void walk(const AstNode& node, const std::function<bool(const AstNode&)>& fn) {
    if (!fn(node)) return;
    for (const auto& child : node.children) walk(*child, fn);
}

void walk_unit(const AstUnit& unit,
               const std::function<bool(const AstNode&)>& fn) {
    for (const auto& root : unit.root_elements) walk(*root, fn);
}

const AstNode* enclosing(const AstNode& node, NodeKind kind) {
    for (const AstNode* p = node.parent; p; p = p->parent)
        if (p->kind == kind) return p;
    return nullptr;
}

namespace {

void split_into(std::string_view text, std::vector<std::string>& out) {
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        size_t start = i;
        while (i < text.size() &&
               !std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string flat;
    for (const auto& tok : tokens) {
        if (!flat.empty() && is_ident_char(flat.back()) && is_ident_char(tok[0]))
            flat += ' ';
        flat += tok;
    }
    return flat;
}

void collect_tokens(const AstNode& node, std::vector<std::string>& out,
                    bool skip_specifiers) {
    if (skip_specifiers &&
        (node.kind == NodeKind::Specifier || node.tag == "annotation"))
        return;
    if (node.kind == NodeKind::ArgumentList) {
        // direct text holds both brackets; re-interleave around the children
        if (const std::string* t = node.attribute("type"); t && *t == "generic") {
            out.push_back("<");
            for (const auto& child : node.children)
                collect_tokens(*child, out, skip_specifiers);
            out.push_back(">");
            return;
        }
    }
    split_into(node.text, out);
    for (const auto& child : node.children)
        collect_tokens(*child, out, skip_specifiers);
}

bool is_assign_operator(std::string_view op) {
    static constexpr std::string_view ops[] = {
        "=",  "+=", "-=",  "*=",  "/=", "%=",
        "&=", "|=", "^=", "<<=", ">>="};
    return std::find(std::begin(ops), std::end(ops), op) != std::end(ops);
}

std::string trimmed(const std::string& text) {
    size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    size_t end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

}  // namespace

std::string flatten_tokens(const AstNode& node) {
    std::vector<std::string> tokens;
    collect_tokens(node, tokens, /*skip_specifiers=*/false);
    return join_tokens(tokens);
}

std::string canonical_type(const AstNode& type_node) {
    std::vector<std::string> tokens;
    collect_tokens(type_node, tokens, /*skip_specifiers=*/true);
    return join_tokens(tokens);
}

std::string terminal_name(const AstNode& name_node) {
    const AstNode* last = nullptr;
    for (const auto& child : name_node.children)
        if (child->kind == NodeKind::Name) last = child.get();
    if (last) return terminal_name(*last);
    return trimmed(name_node.text);
}

std::string receiver_of(const AstNode& name_node) {
    const AstNode* last = nullptr;
    for (const auto& child : name_node.children)
        if (child->kind == NodeKind::Name) last = child.get();
    if (!last) return {};
    std::vector<std::string> tokens;
    for (const auto& child : name_node.children) {
        if (child.get() == last) break;
        if (child->kind == NodeKind::Operator) continue;
        collect_tokens(*child, tokens, false);
    }
    return join_tokens(tokens);
}

const AstNode* declared_name_node(const AstNode& decl_node) {
    return decl_node.first_child(NodeKind::Name);
}

std::string declared_name(const AstNode& decl_node) {
    const AstNode* name = declared_name_node(decl_node);
    if (!name) return {};
    for (const auto& child : name->children)
        if (child->kind == NodeKind::Name) return terminal_name(*child);
    return trimmed(name->text);
}

namespace {

bool has_native_specifier(const AstNode& fn) {
    for (const auto& child : fn.children) {
        if (child->kind == NodeKind::Specifier && trimmed(child->text) == "native")
            return true;
        if (child->kind == NodeKind::Type) {
            for (const auto& sub : child->children)
                if (sub->kind == NodeKind::Specifier &&
                    trimmed(sub->text) == "native")
                    return true;
        }
    }
    return false;
}

std::string enclosing_class_path(const AstNode& fn) {
    std::vector<std::string> names;
    for (const AstNode* p = fn.parent; p; p = p->parent) {
        if (p->kind == NodeKind::Class || p->kind == NodeKind::Struct) {
            if (const AstNode* name = p->first_child(NodeKind::Name))
                names.push_back(terminal_name(*name));
        }
    }
    std::string path;
    for (auto it = names.rbegin(); it != names.rend(); ++it) {
        if (!path.empty()) path += '.';
        path += *it;
    }
    return path;
}

}  // namespace

std::string java_package_of(const AstUnit& unit) {
    std::string package;
    walk_unit(unit, [&](const AstNode& node) {
        if (!package.empty()) return false;
        if (node.kind == NodeKind::Unknown && node.tag == "package") {
            if (const AstNode* name = node.first_child(NodeKind::Name))
                package = flatten_tokens(*name);
            return false;
        }
        // package declarations sit at the top of the file only
        return node.kind == NodeKind::Unknown;
    });
    return package;
}

std::vector<FunctionInfo> functions_of(const AstUnit& unit) {
    std::vector<FunctionInfo> result;
    std::string package = unit.language == Language::Java ? java_package_of(unit)
                                                          : std::string();
    walk_unit(unit, [&](const AstNode& node) {
        if (node.kind != NodeKind::Function && node.kind != NodeKind::FunctionDecl)
            return true;
        FunctionInfo info;
        info.unit = &unit;
        info.node = &node;
        info.line = node.line;
        if (const AstNode* name = node.first_child(NodeKind::Name)) {
            info.name = flatten_tokens(*name);
            info.line = name->line;
        }
        if (info.name.empty()) return true;
        std::string class_path = enclosing_class_path(node);
        if (!package.empty() && !class_path.empty())
            info.qualified_class_name = package + "." + class_path;
        else
            info.qualified_class_name = class_path;
        info.is_native =
            unit.language == Language::Java && has_native_specifier(node);
        info.body_present = node.has_child(NodeKind::Block);
        if (const AstNode* params = node.first_child(NodeKind::ParameterList)) {
            for (const auto& param : params->children) {
                if (param->kind != NodeKind::Parameter) continue;
                const AstNode* decl = param->first_child(NodeKind::Decl);
                if (!decl) decl = param.get();
                FunctionParam p;
                p.name = declared_name(*decl);
                if (const AstNode* type = decl->first_child(NodeKind::Type))
                    p.type = canonical_type(*type);
                if (!p.name.empty()) info.parameters.push_back(std::move(p));
            }
        }
        result.push_back(std::move(info));
        return true;  // nested classes and local declarations still visited
    });
    return result;
}

namespace {

// Climb wrapper <name> elements; stops when leaving the pure name chain.
const AstNode* outermost_name(const AstNode& name_node) {
    const AstNode* cur = &name_node;
    while (cur->parent && cur->parent->kind == NodeKind::Name)
        cur = cur->parent;
    return cur;
}

bool is_write_position(const AstNode& indexed_name) {
    const AstNode* top = outermost_name(indexed_name);
    const AstNode* expr = top->parent;
    if (!expr || expr->kind != NodeKind::Expr) return false;
    bool seen = false;
    std::string prev_op;
    const AstNode* prev = nullptr;
    for (const auto& child : expr->children) {
        if (child->kind == NodeKind::Operator) {
            std::string op = trimmed(child->text);
            if (is_assign_operator(op)) return seen;
            if ((op == "++" || op == "--") && prev == top) return true;
            prev_op = op;
            prev = child.get();
            continue;
        }
        if (child.get() == top) {
            if (prev_op == "++" || prev_op == "--") return true;
            seen = true;
        }
        prev = child.get();
        prev_op.clear();
    }
    return false;
}

bool inside_type(const AstNode& node) {
    return enclosing(node, NodeKind::Type) != nullptr;
}

bool is_declarator_extent(const AstNode& name_node) {
    const AstNode* top = outermost_name(name_node);
    return top->parent && top->parent->kind == NodeKind::Decl &&
           declared_name_node(*top->parent) == top;
}

}  // namespace

std::vector<IndexAccess> index_accesses_of(const AstNode& stmt) {
    std::vector<IndexAccess> result;
    walk(stmt, [&](const AstNode& node) {
        if (node.kind != NodeKind::Name) return true;
        const AstNode* index = nullptr;
        const AstNode* name_part = nullptr;
        for (const auto& child : node.children) {
            if (child->kind == NodeKind::Name && !index) name_part = child.get();
            if (child->kind == NodeKind::Index &&
                child->has_child(NodeKind::Expr) && !index)
                index = child.get();
        }
        if (!index || inside_type(node) || is_declarator_extent(node))
            return true;
        IndexAccess access;
        access.buffer_name =
            name_part ? terminal_name(*name_part) : trimmed(node.text);
        access.index_expr = index->first_child(NodeKind::Expr);
        access.mode = is_write_position(node) ? AccessMode::Write
                                              : AccessMode::Read;
        access.line = node.line;
        access.name_node = &node;
        result.push_back(std::move(access));
        return true;  // keep walking: nested accesses inside the index expr
    });
    return result;
}

}  // namespace jniflow
