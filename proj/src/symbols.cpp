#include <algorithm>

#include "jniflow/symbols.hpp"

namespace jniflow {

std::string_view to_string(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Class: return "class";
        case SymbolKind::Struct: return "struct";
        case SymbolKind::Function: return "function";
        case SymbolKind::Field: return "field";
        case SymbolKind::Parameter: return "parameter";
    }
    return "?";
}

const Symbol* SymbolTable::find_qualified(const std::string& qualified) const {
    auto it = by_qualified_name.find(qualified);
    return it == by_qualified_name.end() ? nullptr : &symbols[it->second];
}

std::string SymbolTable::qualified_name(int index) const {
    std::vector<const std::string*> parts;
    for (int cur = index; cur >= 0; cur = symbols[cur].parent)
        parts.push_back(&symbols[cur].name);
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!out.empty()) out += '.';
        out += **it;
    }
    return out;
}

std::vector<int> SymbolTable::children_of(int parent_index) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(symbols.size()); ++i)
        if (symbols[i].parent == parent_index) out.push_back(i);
    return out;
}

std::optional<std::string> SymbolTable::resolve_type(
    std::string_view name, std::optional<int> context,
    std::string_view file_hint) const {
    if (context) {
        for (int child : children_of(*context)) {
            const Symbol& s = symbols[child];
            if (s.name == name && s.type) return s.type;
        }
    }
    const Symbol* best = nullptr;
    auto [lo, hi] = by_name.equal_range(std::string(name));
    for (auto it = lo; it != hi; ++it) {
        const Symbol& s = symbols[it->second];
        if (!s.type) continue;
        if (!best) {
            best = &s;
            continue;
        }
        bool s_local = !file_hint.empty() && s.file == file_hint;
        bool best_local = !file_hint.empty() && best->file == file_hint;
        if (s_local != best_local) {
            if (s_local) best = &s;
            continue;
        }
        if (std::tie(s.file, s.line) < std::tie(best->file, best->line))
            best = &s;
    }
    if (best) return best->type;
    return std::nullopt;
}

bool SymbolTable::has_function_named(std::string_view name) const {
    auto [lo, hi] = by_name.equal_range(std::string(name));
    for (auto it = lo; it != hi; ++it)
        if (symbols[it->second].kind == SymbolKind::Function) return true;
    return false;
}

std::optional<int> SymbolTable::find_class(std::string_view name) const {
    auto [lo, hi] = by_name.equal_range(std::string(name));
    std::optional<int> best;
    for (auto it = lo; it != hi; ++it) {
        const Symbol& s = symbols[it->second];
        if (s.kind != SymbolKind::Class && s.kind != SymbolKind::Struct) continue;
        if (!best || std::tie(s.file, s.line) <
                         std::tie(symbols[*best].file, symbols[*best].line))
            best = it->second;
    }
    return best;
}

namespace {

struct Collector {
    SymbolTable& table;
    Diagnostics& diagnostics;
    const AstUnit& unit;

    int add(Symbol symbol) {
        int id = static_cast<int>(table.symbols.size());
        table.symbols.push_back(std::move(symbol));
        table.by_name.emplace(table.symbols[id].name, id);
        std::string qualified = table.qualified_name(id);
        auto [it, inserted] = table.by_qualified_name.emplace(qualified, id);
        if (!inserted &&
            table.symbols[it->second].file != table.symbols[id].file) {
            diagnostics.add("duplicate-symbol",
                            "'" + qualified + "' is declared in both '" +
                                table.symbols[it->second].file + "' and '" +
                                table.symbols[id].file + "'",
                            table.symbols[id].file, table.symbols[id].line);
        }
        return id;
    }

    void record_function(const AstNode& node, int parent) {
        Symbol sym;
        sym.kind = SymbolKind::Function;
        sym.file = unit.file_name;
        sym.line = node.line;
        if (const AstNode* name = node.first_child(NodeKind::Name)) {
            sym.name = flatten_tokens(*name);
            sym.line = name->line;
        }
        if (sym.name.empty()) return;
        if (const AstNode* type = node.first_child(NodeKind::Type)) {
            if (std::string t = canonical_type(*type); !t.empty())
                sym.type = std::move(t);
        }
        int arity = 0;
        const AstNode* params = node.first_child(NodeKind::ParameterList);
        if (params)
            for (const auto& p : params->children)
                if (p->kind == NodeKind::Parameter) ++arity;
        sym.arity = arity;
        sym.parent = parent;
        int id = add(std::move(sym));

        if (!params) return;
        for (const auto& p : params->children) {
            if (p->kind != NodeKind::Parameter) continue;
            const AstNode* decl = p->first_child(NodeKind::Decl);
            if (!decl) continue;
            Symbol param;
            param.kind = SymbolKind::Parameter;
            param.name = declared_name(*decl);
            if (param.name.empty()) continue;
            if (const AstNode* type = decl->first_child(NodeKind::Type)) {
                if (std::string t = canonical_type(*type); !t.empty())
                    param.type = std::move(t);
            }
            param.parent = id;
            param.file = unit.file_name;
            param.line = decl->line;
            add(std::move(param));
        }
    }

    void record_field(const AstNode& decl, int parent) {
        Symbol sym;
        sym.kind = SymbolKind::Field;
        sym.name = declared_name(decl);
        if (sym.name.empty()) return;
        if (const AstNode* type = decl.first_child(NodeKind::Type)) {
            if (std::string t = canonical_type(*type); !t.empty())
                sym.type = std::move(t);
        }
        sym.parent = parent;
        sym.file = unit.file_name;
        sym.line = decl.line;
        add(std::move(sym));
    }

    // Records the class/struct itself, then its fields and functions.
    // Nested classes recurse.
    void record_type(const AstNode& node, int parent) {
        Symbol sym;
        sym.kind = node.kind == NodeKind::Struct ? SymbolKind::Struct
                                                 : SymbolKind::Class;
        if (const AstNode* name = node.first_child(NodeKind::Name))
            sym.name = terminal_name(*name);
        if (sym.name.empty()) return;
        sym.type = std::string(to_string(sym.kind));
        sym.parent = parent;
        sym.file = unit.file_name;
        sym.line = node.line;
        int id = add(std::move(sym));

        const AstNode* block = node.first_child(NodeKind::Block);
        if (!block) return;
        scan_scope(*block, id);
    }

    // One lexical scope: visibility sections and similar wrappers are
    // transparent, nested functions/classes are boundaries.
    void scan_scope(const AstNode& node, int parent) {
        for (const auto& child : node.children) {
            switch (child->kind) {
                case NodeKind::Class:
                case NodeKind::Struct:
                    record_type(*child, parent);
                    break;
                case NodeKind::Function:
                case NodeKind::FunctionDecl:
                    record_function(*child, parent);
                    break;
                case NodeKind::DeclStmt:
                    for (const auto& decl : child->children)
                        if (decl->kind == NodeKind::Decl)
                            record_field(*decl, parent);
                    break;
                case NodeKind::Decl:
                    record_field(*child, parent);
                    break;
                default:
                    scan_scope(*child, parent);
                    break;
            }
        }
    }

    void run() {
        for (const auto& root : unit.root_elements) {
            switch (root->kind) {
                case NodeKind::Class:
                case NodeKind::Struct:
                    record_type(*root, -1);
                    break;
                case NodeKind::Function:
                case NodeKind::FunctionDecl:
                    record_function(*root, -1);
                    break;
                default:
                    scan_scope(*root, -1);
                    break;
            }
        }
    }
};

}  // namespace

SymbolTable collect_symbols(std::span<const AstUnit> units,
                            Diagnostics& diagnostics) {
    // Insertion order is normalized by file name so that unit order does
    // not leak into symbol ids or tie-breaks.
    std::vector<const AstUnit*> ordered;
    ordered.reserve(units.size());
    for (const AstUnit& unit : units) ordered.push_back(&unit);
    std::sort(ordered.begin(), ordered.end(),
              [](const AstUnit* a, const AstUnit* b) {
                  return a->file_name < b->file_name;
              });

    SymbolTable table;
    for (const AstUnit* unit : ordered) {
        Collector collector{table, diagnostics, *unit};
        collector.run();
    }
    return table;
}

}  // namespace jniflow
