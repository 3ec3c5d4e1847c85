#include <expat.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "jniflow/ast.hpp"

namespace jniflow {
namespace {

NodeKind kind_of_tag(std::string_view tag) {
    static const std::map<std::string_view, NodeKind> table = {
        {"class", NodeKind::Class},
        {"struct", NodeKind::Struct},
        {"function", NodeKind::Function},
        {"constructor", NodeKind::Function},
        {"destructor", NodeKind::Function},
        {"function_decl", NodeKind::FunctionDecl},
        {"constructor_decl", NodeKind::FunctionDecl},
        {"parameter_list", NodeKind::ParameterList},
        {"parameter", NodeKind::Parameter},
        {"decl_stmt", NodeKind::DeclStmt},
        {"decl", NodeKind::Decl},
        {"expr_stmt", NodeKind::ExprStmt},
        {"expr", NodeKind::Expr},
        {"call", NodeKind::Call},
        {"argument_list", NodeKind::ArgumentList},
        {"argument", NodeKind::Argument},
        {"block", NodeKind::Block},
        {"if_stmt", NodeKind::IfStmt},
        {"if", NodeKind::IfStmt},
        {"condition", NodeKind::Condition},
        {"for", NodeKind::ForLoop},
        {"foreach", NodeKind::ForLoop},
        {"while", NodeKind::WhileLoop},
        {"index", NodeKind::Index},
        {"name", NodeKind::Name},
        {"literal", NodeKind::Literal},
        {"operator", NodeKind::Operator},
        {"specifier", NodeKind::Specifier},
        {"init", NodeKind::Init},
        {"type", NodeKind::Type},
    };
    auto it = table.find(tag);
    return it == table.end() ? NodeKind::Unknown : it->second;
}

std::string_view local_name(std::string_view qname) {
    auto pos = qname.rfind(':');
    return pos == std::string_view::npos ? qname : qname.substr(pos + 1);
}

// "12:5" -> 12, "12" -> 12; 0 when unparseable.
int leading_line(std::string_view value) {
    int line = 0;
    for (char c : value) {
        if (c < '0' || c > '9') break;
        line = line * 10 + (c - '0');
    }
    return line;
}

struct UnitBuild {
    AstUnit unit;
    std::vector<AstNode*> open_nodes;
    int current_line = 1;
    int max_line = 1;     // highest line named by a position attribute
    int newlines = 0;     // newlines in character data (srcML keeps all text)
    bool has_positions = false;
    bool has_language = false;
    bool element_seen = false;
};

struct Builder {
    XML_Parser parser = nullptr;
    std::vector<AstUnit> units;
    std::vector<UnitBuild> unit_stack;
    int archive_children = 0;
    std::string error_message;
    bool error_is_config = false;

    void fail(std::string message, bool config) {
        if (!error_message.empty()) return;
        error_message = std::move(message);
        error_is_config = config;
        XML_StopParser(parser, XML_FALSE);
    }

    void open_unit(const XML_Char** attrs) {
        if (unit_stack.size() >= 2 ||
            (unit_stack.size() == 1 && !unit_stack.back().open_nodes.empty())) {
            fail("unexpected nested <unit> element", false);
            return;
        }
        UnitBuild build;
        for (const XML_Char** a = attrs; a && *a; a += 2) {
            std::string_view name = local_name(a[0]);
            std::string_view value = a[1];
            if (name == "filename") {
                build.unit.file_name = value;
            } else if (name == "language") {
                build.has_language = true;
                if (value == "Java") {
                    build.unit.language = Language::Java;
                } else if (value == "C") {
                    build.unit.language = Language::C;
                } else if (value == "C++") {
                    build.unit.language = Language::CPlusPlus;
                } else {
                    fail("unsupported unit language '" + std::string(value) + "'",
                         true);
                }
            }
        }
        unit_stack.push_back(std::move(build));
    }

    void close_unit() {
        UnitBuild build = std::move(unit_stack.back());
        unit_stack.pop_back();
        if (unit_stack.empty() && archive_children > 0) {
            return;  // archive root carries no content of its own
        }
        if (unit_stack.empty() && !build.element_seen && !build.has_language) {
            return;  // empty archive
        }
        if (!build.has_language) {
            fail("unit '" + build.unit.file_name + "' has no language attribute",
                 true);
            return;
        }
        if (build.unit.file_name.empty()) {
            fail("unit has no filename attribute", true);
            return;
        }
        if (build.element_seen && !build.has_positions) {
            fail("srcML input for '" + build.unit.file_name +
                     "' lacks position attributes; regenerate it with position "
                     "tracking enabled (srcml --position)",
                 true);
            return;
        }
        build.unit.line_count = std::max(build.max_line, build.newlines);
        if (!unit_stack.empty()) ++archive_children;
        units.push_back(std::move(build.unit));
    }

    void open_element(const XML_Char* qname, const XML_Char** attrs) {
        std::string tag(local_name(qname));
        if (tag == "unit") {
            open_unit(attrs);
            return;
        }
        if (unit_stack.empty()) {
            fail("document root is not a srcML <unit>", false);
            return;
        }
        UnitBuild& build = unit_stack.back();
        build.element_seen = true;

        auto node = std::make_unique<AstNode>();
        node->kind = kind_of_tag(tag);
        node->tag = std::move(tag);
        for (const XML_Char** a = attrs; a && *a; a += 2) {
            std::string name(local_name(a[0]));
            if (name == "xmlns" || std::strncmp(a[0], "xmlns", 5) == 0) continue;
            std::string value(a[1]);
            if (name == "start" || name == "line") {
                if (int line = leading_line(value); line > 0) {
                    build.has_positions = true;
                    build.current_line = line;
                }
            } else if (name == "end") {
                if (int line = leading_line(value); line > build.max_line)
                    build.max_line = line;
            }
            node->attributes.emplace_back(std::move(name), std::move(value));
        }
        node->line = build.current_line;

        AstNode* raw = node.get();
        if (build.open_nodes.empty()) {
            build.unit.root_elements.push_back(std::move(node));
        } else {
            raw->parent = build.open_nodes.back();
            build.open_nodes.back()->children.push_back(std::move(node));
        }
        build.open_nodes.push_back(raw);
    }

    void close_element(const XML_Char* qname) {
        if (local_name(qname) == "unit") {
            if (!unit_stack.empty()) close_unit();
            return;
        }
        if (!unit_stack.empty() && !unit_stack.back().open_nodes.empty())
            unit_stack.back().open_nodes.pop_back();
    }

    void text(const XML_Char* data, int len) {
        if (unit_stack.empty()) return;
        UnitBuild& build = unit_stack.back();
        for (int i = 0; i < len; ++i) {
            if (data[i] == '\n') {
                ++build.current_line;
                ++build.newlines;
            }
        }
        if (!build.open_nodes.empty())
            build.open_nodes.back()->text.append(data, static_cast<size_t>(len));
    }
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    static_cast<Builder*>(user)->open_element(name, attrs);
}

void XMLCALL on_end(void* user, const XML_Char* name) {
    static_cast<Builder*>(user)->close_element(name);
}

void XMLCALL on_text(void* user, const XML_Char* data, int len) {
    static_cast<Builder*>(user)->text(data, len);
}

}  // namespace

std::vector<AstUnit> parse_srcml_archive(std::string_view xml_bytes) {
    Builder builder;
    XML_Parser parser = XML_ParserCreate(nullptr);
    builder.parser = parser;
    XML_SetUserData(parser, &builder);
    XML_SetElementHandler(parser, on_start, on_end);
    XML_SetCharacterDataHandler(parser, on_text);

    XML_Status status = XML_Parse(parser, xml_bytes.data(),
                                  static_cast<int>(xml_bytes.size()), 1);
    long byte_offset = static_cast<long>(XML_GetCurrentByteIndex(parser));
    XML_Error code = XML_GetErrorCode(parser);
    XML_ParserFree(parser);

    if (!builder.error_message.empty()) {
        if (builder.error_is_config) throw ConfigError(builder.error_message);
        throw ParseError(builder.error_message);
    }
    if (status != XML_STATUS_OK) {
        std::ostringstream msg;
        msg << "XML parse error at byte " << byte_offset << ": "
            << XML_ErrorString(code);
        throw ParseError(msg.str());
    }
    return std::move(builder.units);
}

std::vector<AstUnit> parse_srcml_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read srcML file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    try {
        return parse_srcml_archive(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace jniflow
