#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "support.hpp"

using namespace jniflow;
using testsupport::load_fixture_units;
using testsupport::unit_named;

namespace {

const Symbol* find_symbol(const SymbolTable& table, const std::string& name,
                          SymbolKind kind) {
    auto [lo, hi] = table.by_name.equal_range(name);
    for (auto it = lo; it != hi; ++it)
        if (table.symbols[it->second].kind == kind)
            return &table.symbols[it->second];
    return nullptr;
}

std::vector<AstUnit> parse(const char* xml) { return parse_srcml_archive(xml); }

constexpr const char* kStructXml =
    R"(<unit xmlns="http://www.srcML.org/srcML/src" language="C++" filename="s.hpp">)"
    R"(<struct pos:start="1:1">struct <name pos:start="1:8">S</name> <block pos:start="1:10">{)"
    R"(<decl_stmt pos:start="1:12"><decl pos:start="1:12"><type pos:start="1:12"><name pos:start="1:12">int</name></type> <name pos:start="1:16">w</name></decl>;</decl_stmt>)"
    "\n}</block>;</struct></unit>";

constexpr const char* kTwoClassesXml =
    R"(<unit xmlns="http://www.srcML.org/srcML/src" language="Java" filename="two.java">)"
    R"(<class pos:start="1:1">class <name pos:start="1:7">A</name> <block pos:start="1:9">{)"
    R"(<decl_stmt pos:start="2:3"><decl pos:start="2:3"><type pos:start="2:3"><name pos:start="2:3">int</name></type> <name pos:start="2:7">n</name></decl>;</decl_stmt>)"
    "\n}</block></class>\n"
    R"(<class pos:start="3:1">class <name pos:start="3:7">B</name> <block pos:start="3:9">{)"
    R"(<decl_stmt pos:start="4:3"><decl pos:start="4:3"><type pos:start="4:3"><name pos:start="4:3">String</name></type> <name pos:start="4:10">n</name></decl>;</decl_stmt>)"
    "\n}</block></class></unit>";

}  // namespace

TEST_CASE("symbols of the native wrapper class") {
    auto units = load_fixture_units("yuv_rotate");
    Diagnostics diagnostics;
    SymbolTable table = collect_symbols(units, diagnostics);

    const Symbol* cls = find_symbol(table, "YuvOperator", SymbolKind::Class);
    REQUIRE(cls != nullptr);
    CHECK(cls->parent == -1);

    const Symbol* rotate = find_symbol(table, "rotate", SymbolKind::Function);
    REQUIRE(rotate != nullptr);
    CHECK(table.symbols[rotate->parent].name == "YuvOperator");

    const Symbol* jni = find_symbol(table, "jniRotate", SymbolKind::Function);
    REQUIRE(jni != nullptr);
    CHECK(table.symbols[jni->parent].name == "YuvOperator");
    CHECK(jni->arity == 1);
}

TEST_CASE("empty project gives an empty table") {
    Diagnostics diagnostics;
    std::vector<AstUnit> none;
    SymbolTable table = collect_symbols(none, diagnostics);
    CHECK(table.symbols.empty());
    CHECK(table.by_name.empty());
    CHECK(table.by_qualified_name.empty());
}

TEST_CASE("struct fields carry their declared type and parent") {
    auto units = parse(kStructXml);
    Diagnostics diagnostics;
    SymbolTable table = collect_symbols(units, diagnostics);
    const Symbol* w = find_symbol(table, "w", SymbolKind::Field);
    REQUIRE(w != nullptr);
    CHECK(w->type == "int");
    CHECK(table.symbols[w->parent].name == "S");
    CHECK(table.symbols[w->parent].kind == SymbolKind::Struct);
}

TEST_CASE("resolve_type finds fields through the declaring class") {
    auto units = load_fixture_units("yuv_rotate");
    Diagnostics diagnostics;
    SymbolTable table = collect_symbols(units, diagnostics);
    auto ctx = table.find_class("JniYuvOperator");
    REQUIRE(ctx.has_value());
    CHECK(table.resolve_type("_width", ctx) == "int");
    CHECK(table.resolve_type("_yuvData", ctx) == "char*");
}

TEST_CASE("resolve_type returns nullopt for unknown names") {
    auto units = load_fixture_units("yuv_rotate");
    Diagnostics diagnostics;
    SymbolTable table = collect_symbols(units, diagnostics);
    CHECK_FALSE(table.resolve_type("nonexistent").has_value());
}

TEST_CASE("two classes with the same field name resolve per context") {
    auto units = parse(kTwoClassesXml);
    Diagnostics diagnostics;
    SymbolTable table = collect_symbols(units, diagnostics);
    auto a = table.find_class("A");
    auto b = table.find_class("B");
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(table.resolve_type("n", a) == "int");
    CHECK(table.resolve_type("n", b) == "String");
}

TEST_CASE("collect_symbols is order independent") {
    auto units = load_fixture_units("yuv_rotate");
    Diagnostics d1;
    SymbolTable reference = collect_symbols(units, d1);

    std::mt19937 rng(7);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(units.begin(), units.end(), rng);
        Diagnostics d2;
        SymbolTable shuffled = collect_symbols(units, d2);
        REQUIRE(shuffled.symbols.size() == reference.symbols.size());
        for (size_t i = 0; i < reference.symbols.size(); ++i) {
            CHECK(shuffled.symbols[i].name == reference.symbols[i].name);
            CHECK(shuffled.symbols[i].type == reference.symbols[i].type);
            CHECK(shuffled.symbols[i].parent == reference.symbols[i].parent);
        }
        CHECK(shuffled.by_qualified_name == reference.by_qualified_name);
    }
}

TEST_CASE("duplicate qualified names are kept and reported") {
    const char* dup =
        R"(<unit xmlns="http://www.srcML.org/srcML/src" revision="1.0.0">)"
        R"(<unit language="C++" filename="a.cpp"><function pos:start="1:1"><type><name pos:start="1:1">int</name></type> <name pos:start="1:5">f</name><parameter_list>()</parameter_list> <block pos:start="1:9">{}</block></function></unit>)"
        R"(<unit language="C++" filename="b.cpp"><function pos:start="1:1"><type><name pos:start="1:1">int</name></type> <name pos:start="1:5">f</name><parameter_list>()</parameter_list> <block pos:start="1:9">{}</block></function></unit>)"
        R"(</unit>)";
    auto units = parse(dup);
    Diagnostics diagnostics;
    SymbolTable table = collect_symbols(units, diagnostics);
    CHECK(table.by_name.count("f") == 2);
    bool noted = std::any_of(
        diagnostics.entries.begin(), diagnostics.entries.end(),
        [](const Diagnostic& d) { return d.category == "duplicate-symbol"; });
    CHECK(noted);
}

TEST_CASE("collecting twice is idempotent") {
    auto units = load_fixture_units("yuv_rotate");
    Diagnostics d1, d2;
    SymbolTable once = collect_symbols(units, d1);
    SymbolTable twice = collect_symbols(units, d2);
    CHECK(once.symbols.size() == twice.symbols.size());
    CHECK(once.by_qualified_name == twice.by_qualified_name);
}
