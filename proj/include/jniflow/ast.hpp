#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jniflow/core.hpp"

namespace jniflow {

enum class Language { Java, C, CPlusPlus };

std::string_view to_string(Language lang);
bool is_native_side(Language lang);  // C or C++

/// Element kinds the analysis understands. Everything else srcML emits is
/// kept as an Unknown node: traversable, never matched by structural
/// queries.
enum class NodeKind {
    Class,
    Struct,
    Function,
    FunctionDecl,
    ParameterList,
    Parameter,
    DeclStmt,
    Decl,
    ExprStmt,
    Expr,
    Call,
    ArgumentList,
    Argument,
    Block,
    IfStmt,
    Condition,
    ForLoop,
    WhileLoop,
    Index,
    Name,
    Literal,
    Operator,
    Specifier,
    Init,
    Type,
    Unknown,
};

std::string_view to_string(NodeKind kind);

struct AstNode {
    NodeKind kind = NodeKind::Unknown;
    int line = 1;
    std::string tag;   // original element name
    std::string text;  // direct character data (token text for leaves)
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<std::unique_ptr<AstNode>> children;
    const AstNode* parent = nullptr;

    const std::string* attribute(std::string_view name) const;
    bool has_child(NodeKind kind) const;
    const AstNode* first_child(NodeKind kind) const;
};

struct AstUnit {
    std::string file_name;
    Language language = Language::Java;
    std::vector<std::unique_ptr<AstNode>> root_elements;
    int line_count = 0;  // lines of the original source, recovered from text
};

struct FunctionParam {
    std::string name;
    std::string type;  // canonical type text, possibly empty if unnamed
};

struct FunctionInfo {
    std::string name;                  // terminal identifier
    std::string qualified_class_name;  // package.Outer.Inner, empty for free fns
    std::vector<FunctionParam> parameters;
    bool is_native = false;
    bool body_present = false;
    const AstUnit* unit = nullptr;
    const AstNode* node = nullptr;
    int line = 1;
};

enum class AccessMode { Read, Write };

struct IndexAccess {
    std::string buffer_name;
    const AstNode* index_expr = nullptr;  // expression inside the brackets
    AccessMode mode = AccessMode::Read;
    int line = 1;
    const AstNode* name_node = nullptr;  // the indexed <name> element
};

/// Parses a srcML document (single unit or archive) into AST units.
/// Throws ParseError for malformed XML (message names the byte offset) and
/// ConfigError for units without position annotations or required
/// attributes.
std::vector<AstUnit> parse_srcml_archive(std::string_view xml_bytes);

/// Reads and parses one srcML file from disk.
std::vector<AstUnit> parse_srcml_file(const std::string& path);

/// Every function definition and declaration in the unit, nested classes
/// included.
std::vector<FunctionInfo> functions_of(const AstUnit& unit);

/// Index-based buffer accesses inside a statement, in document order.
/// Write mode only for the indexed name that is the assignment target (or
/// the operand of ++/--); reads feeding an assignment stay reads.
std::vector<IndexAccess> index_accesses_of(const AstNode& stmt);

/// Java package declared by the unit, empty when absent.
std::string java_package_of(const AstUnit& unit);

// --- tree helpers -----------------------------------------------------------

/// Pre-order walk over a node and its descendants; return false from the
/// visitor to skip a subtree's children.
void walk(const AstNode& node, const std::function<bool(const AstNode&)>& fn);
void walk_unit(const AstUnit& unit, const std::function<bool(const AstNode&)>& fn);

/// Concatenated token text of a subtree ("env->GetDirectBufferAddress",
/// "std::vector<unsigned char>"). Whitespace is normalized.
std::string flatten_tokens(const AstNode& node);

/// Last identifier segment of a (possibly qualified) <name> element.
std::string terminal_name(const AstNode& name_node);

/// Qualifier part before the terminal segment ("env", "a.b"), empty for
/// simple names.
std::string receiver_of(const AstNode& name_node);

/// Canonical type text for a <type> element: specifiers dropped, spacing
/// normalized around punctuation.
std::string canonical_type(const AstNode& type_node);

/// Identifier being declared by a <decl>; empty when anonymous.
std::string declared_name(const AstNode& decl_node);
const AstNode* declared_name_node(const AstNode& decl_node);

const AstNode* enclosing(const AstNode& node, NodeKind kind);

}  // namespace jniflow
