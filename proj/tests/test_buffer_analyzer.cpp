#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

using namespace jniflow;
using testsupport::Analyzed;
using testsupport::analyzed_fixture;
using testsupport::analyzed_xml;
using testsupport::fixture_dir;
using testsupport::unit_named;

namespace {

constexpr const char* kValuesXml =
    R"(<unit xmlns="http://www.srcML.org/srcML/src" language="C++" filename="v.cpp">)"
    R"(<function pos:start="1:1"><type><name>void</name></type> <name>f</name><parameter_list>()</parameter_list> <block>{<block_content>
<decl_stmt pos:start="2:1"><decl pos:start="2:1"><type><name>int</name></type> <name>width</name> <init>= <expr><literal type="number">1</literal></expr></init></decl>;</decl_stmt>
<decl_stmt pos:start="3:1"><decl pos:start="3:1"><type><name>int</name></type> <name>w2</name> <init>= <expr><literal type="number">0</literal></expr></init></decl>;</decl_stmt>
<expr_stmt pos:start="4:1"><expr><name>w2</name> <operator>=</operator> <name>width</name></expr>;</expr_stmt>
<expr_stmt pos:start="5:1"><expr><name>width</name> <operator>=</operator> <literal type="number">5</literal></expr>;</expr_stmt>
<decl_stmt pos:start="6:1"><decl pos:start="6:1"><type><name>int</name></type> <name>x</name> <init>= <expr><literal type="number">0</literal></expr></init></decl>;</decl_stmt>
<expr_stmt pos:start="7:1"><expr><name>x</name> <operator>=</operator> <name>x</name> <operator>+</operator> <literal type="number">1</literal></expr>;</expr_stmt>
<decl_stmt pos:start="8:1"><decl pos:start="8:1"><type><name>int</name></type> <name>u</name> <init>= <expr><name>v</name></expr></init></decl>;</decl_stmt>
<decl_stmt pos:start="9:1"><decl pos:start="9:1"><type><name>int</name></type> <name>v</name> <init>= <expr><name>u</name></expr></init></decl>;</decl_stmt>
<decl_stmt pos:start="10:1"><decl pos:start="10:1"><type><name>int</name></type> <name>c1</name> <init>= <expr><literal type="number">9</literal></expr></init></decl>;</decl_stmt>
<decl_stmt pos:start="11:1"><decl pos:start="11:1"><type><name>int</name></type> <name>c2</name> <init>= <expr><name>c1</name></expr></init></decl>;</decl_stmt>
<decl_stmt pos:start="12:1"><decl pos:start="12:1"><type><name>int</name></type> <name>c3</name> <init>= <expr><name>c2</name></expr></init></decl>;</decl_stmt>
<decl_stmt pos:start="13:1"><decl pos:start="13:1"><type><name>int</name></type> <name>c4</name> <init>= <expr><name>c3</name></expr></init></decl>;</decl_stmt>
</block_content>}</block></function></unit>)";

const SliceProfile& value_profile(Analyzed& project, const char* var) {
    return project.profiles.at(ProfileKey{"v.cpp", "f", var});
}

}  // namespace

TEST_CASE("backtrack returns the untouched initial value") {
    Analyzed project = analyzed_xml(kValuesXml);
    // width initialized to 1, re-assigned at line 5
    ValueInfo before =
        backtrack_value(value_profile(project, "width"), 4, project.profiles);
    CHECK(before == ValueInfo{ValueInt{1}});
}

TEST_CASE("backtrack follows reference chains at the observation line") {
    Analyzed project = analyzed_xml(kValuesXml);
    // w2 = width happened at line 4; width became 5 at line 5
    ValueInfo after =
        backtrack_value(value_profile(project, "w2"), 9, project.profiles);
    CHECK(after == ValueInfo{ValueInt{5}});
    ValueInfo mid =
        backtrack_value(value_profile(project, "w2"), 4, project.profiles);
    CHECK(mid == ValueInfo{ValueInt{1}});
}

TEST_CASE("self-referential updates degrade to unknown") {
    Analyzed project = analyzed_xml(kValuesXml);
    CHECK(backtrack_value(value_profile(project, "x"), 9, project.profiles) ==
          ValueInfo{ValueUnknown{}});
}

TEST_CASE("reference cycles collapse to unknown") {
    Analyzed project = analyzed_xml(kValuesXml);
    CHECK(backtrack_value(value_profile(project, "u"), 20, project.profiles) ==
          ValueInfo{ValueUnknown{}});
    CHECK(backtrack_value(value_profile(project, "v"), 20, project.profiles) ==
          ValueInfo{ValueUnknown{}});
}

TEST_CASE("the chain cap turns long reference chains into unknown") {
    Analyzed project = analyzed_xml(kValuesXml);
    const SliceProfile& c4 = value_profile(project, "c4");
    CHECK(backtrack_value(c4, 20, project.profiles, 8) ==
          ValueInfo{ValueInt{9}});
    CHECK(backtrack_value(c4, 20, project.profiles, 2) ==
          ValueInfo{ValueUnknown{}});
}

// --- whole-fixture verdicts --------------------------------------------------

namespace {

struct Outcome {
    std::vector<Verdict> verdicts;
    std::vector<Path> paths;
};

Outcome analyze_fixture(const std::string& name) {
    Analyzed project = analyzed_fixture(name);
    auto specs = load_source_list(fixture_dir(name) / "sources.txt");
    auto sources = match_sources(project.graph, project.units, specs,
                                 project.profiles, project.symbols,
                                 project.diagnostics);
    auto sinks = mark_sinks(project.graph, project.units, SinkLists::builtin(),
                            project.profiles);
    Outcome outcome;
    outcome.paths = find_paths(project.graph, sources, sinks);
    for (const Path& path : outcome.paths) {
        const AstUnit& sink_unit =
            unit_named(project.units, path.sink_node.file_name);
        outcome.verdicts.push_back(
            analyze_path(path, project.graph, sink_unit, project.profiles));
    }
    return outcome;
}

}  // namespace

TEST_CASE("unchecked indexed read of the rotate loop is vulnerable") {
    Outcome outcome = analyze_fixture("yuv_rotate");
    REQUIRE(outcome.verdicts.size() == 1);
    const Verdict& verdict = outcome.verdicts[0];
    REQUIRE(verdict.is_vulnerable());
    CHECK(verdict.kind() == BoundIssueKind::IndexedAccessUnchecked);
    CHECK(verdict.sink_line == 12);
    CHECK(verdict.category == SinkCategory::BufferAccess);
}

TEST_CASE("an index guard tying the loop to the buffer size filters the path") {
    Outcome outcome = analyze_fixture("yuv_rotate_guarded_index");
    REQUIRE(outcome.verdicts.size() == 1);
    const Verdict& verdict = outcome.verdicts[0];
    REQUIRE(verdict.is_guarded());
    CHECK(verdict.guard_line() == 12);
}

TEST_CASE("a sizeof guard on the memcpy destination filters the path") {
    Outcome outcome = analyze_fixture("yuv_rotate_guarded_memcpy");
    REQUIRE(outcome.verdicts.size() >= 1);
    for (const Verdict& verdict : outcome.verdicts) {
        REQUIRE(verdict.is_guarded());
        CHECK(verdict.guard_line() == 10);
    }
}

TEST_CASE("kind verdicts across the fixture corpus") {
    struct Expectation {
        const char* fixture;
        bool vulnerable;
        BoundIssueKind kind;
        int line;  // sink line when vulnerable, guard line otherwise
    };
    const Expectation expectations[] = {
        {"indexed_write_vuln", true, BoundIssueKind::IndexedAccessUnchecked, 5},
        {"indexed_write_guarded", false, {}, 5},
        {"buffer_assign_vuln", true, BoundIssueKind::BufferAssignNoSizeCheck,
         5},
        {"buffer_assign_guarded", false, {}, 5},
        {"buffer_assign_partial", true, BoundIssueKind::BufferAssignUnguarded,
         6},
        {"buffer_assign_alias_guarded", false, {}, 6},
        {"memfn_vuln", true, BoundIssueKind::MemFnNoSizeGuard, 6},
        {"memfn_guarded", false, {}, 5},
    };
    for (const Expectation& expected : expectations) {
        INFO(expected.fixture);
        Outcome outcome = analyze_fixture(expected.fixture);
        REQUIRE(outcome.verdicts.size() == 1);
        const Verdict& verdict = outcome.verdicts[0];
        if (expected.vulnerable) {
            REQUIRE(verdict.is_vulnerable());
            CHECK(verdict.kind() == expected.kind);
            CHECK(verdict.sink_line == expected.line);
        } else {
            REQUIRE(verdict.is_guarded());
            CHECK(verdict.guard_line() == expected.line);
        }
    }
}

TEST_CASE("guard lines are real conditions naming the guarded buffer") {
    const std::pair<const char*, const char*> guarded[] = {
        {"yuv_rotate_guarded_index", "yuvCopy"},
        {"yuv_rotate_guarded_memcpy", "rowBuf"},
        {"indexed_write_guarded", "p"},
        {"buffer_assign_guarded", "dst"},
        {"memfn_guarded", "out"},
    };
    for (const auto& [name, buffer] : guarded) {
        INFO(name);
        Analyzed project = analyzed_fixture(name);
        auto specs = load_source_list(fixture_dir(name) / "sources.txt");
        auto sources = match_sources(project.graph, project.units, specs,
                                     project.profiles, project.symbols,
                                     project.diagnostics);
        auto sinks = mark_sinks(project.graph, project.units,
                                SinkLists::builtin(), project.profiles);
        auto paths = find_paths(project.graph, sources, sinks);
        REQUIRE(!paths.empty());
        const AstUnit& sink_unit =
            unit_named(project.units, paths[0].sink_node.file_name);
        Verdict verdict =
            analyze_path(paths[0], project.graph, sink_unit, project.profiles);
        REQUIRE(verdict.is_guarded());

        bool condition_names_buffer = false;
        walk_unit(sink_unit, [&](const AstNode& n) {
            if (n.kind != NodeKind::Condition || n.line != verdict.guard_line())
                return true;
            for (const std::string& var : variable_occurrences(n))
                if (var == buffer) condition_names_buffer = true;
            return true;
        });
        CHECK(condition_names_buffer);
    }
}

TEST_CASE("integer-resolved bounds decide without a syntactic guard") {
    // char b[10]; for (i=0;i<5;i++) b[i]=1;  for (j=0;j<=10;j++) b[j]=2;
    const char* xml =
        R"(<unit xmlns="http://www.srcML.org/srcML/src" language="C++" filename="ival.cpp">)"
        R"(<function pos:start="1:1"><type><name>void</name></type> <name>f</name><parameter_list>()</parameter_list> <block>{<block_content>
<decl_stmt pos:start="2:5"><decl pos:start="2:5"><type><name>char</name></type> <name><name>b</name><index>[<expr><literal type="number">10</literal></expr>]</index></name></decl>;</decl_stmt>
<for pos:start="3:5">for <control>(<init><decl><type><name>int</name></type> <name>i</name> <init>= <expr><literal type="number">0</literal></expr></init></decl>;</init> <condition pos:start="3:21"><expr><name>i</name> <operator>&lt;</operator> <literal type="number">5</literal></expr>;</condition> <incr><expr><name>i</name><operator>++</operator></expr></incr>)</control> <block>{<block_content>
    <expr_stmt pos:start="4:9"><expr><name pos:start="4:9"><name>b</name><index>[<expr><name>i</name></expr>]</index></name> <operator>=</operator> <literal type="number">1</literal></expr>;</expr_stmt>
</block_content>}</block></for>
<for pos:start="6:5">for <control>(<init><decl><type><name>int</name></type> <name>j</name> <init>= <expr><literal type="number">0</literal></expr></init></decl>;</init> <condition pos:start="6:21"><expr><name>j</name> <operator>&lt;=</operator> <literal type="number">10</literal></expr>;</condition> <incr><expr><name>j</name><operator>++</operator></expr></incr>)</control> <block>{<block_content>
    <expr_stmt pos:start="7:9"><expr><name pos:start="7:9"><name>b</name><index>[<expr><name>j</name></expr>]</index></name> <operator>=</operator> <literal type="number">2</literal></expr>;</expr_stmt>
</block_content>}</block></for>
</block_content>}</block></function></unit>)";
    Analyzed project = analyzed_xml(xml);
    auto sinks = mark_sinks(project.graph, project.units, SinkLists::builtin(),
                            project.profiles);
    REQUIRE(sinks.size() == 1);
    const GraphNode& node = *project.graph.find(sinks[0]);
    REQUIRE(node.sink_sites.size() == 2);

    Path path;
    path.nodes = {sinks[0]};
    path.source_node = sinks[0];
    path.sink_node = sinks[0];
    // worst site wins: j <= 10 allows index 10 into a 10-byte buffer
    Verdict verdict = analyze_path(path, project.graph, project.units[0],
                                   project.profiles);
    REQUIRE(verdict.is_vulnerable());
    CHECK(verdict.kind() == BoundIssueKind::IndexedAccessUnchecked);
    CHECK(verdict.sink_line == 7);
}

TEST_CASE("while-loop bounds feed the integer tier") {
    // char b[10]; int i = 0; while (i < 10) { b[i] = 0; i++; }
    const char* xml =
        R"(<unit xmlns="http://www.srcML.org/srcML/src" language="C++" filename="w.cpp">)"
        R"(<function pos:start="1:1"><type><name>void</name></type> <name>f</name><parameter_list>()</parameter_list> <block>{<block_content>
<decl_stmt pos:start="2:5"><decl pos:start="2:5"><type><name>char</name></type> <name><name>b</name><index>[<expr><literal type="number">10</literal></expr>]</index></name></decl>;</decl_stmt>
<decl_stmt pos:start="3:5"><decl pos:start="3:5"><type><name>int</name></type> <name>i</name> <init>= <expr><literal type="number">0</literal></expr></init></decl>;</decl_stmt>
<while pos:start="4:5">while <condition pos:start="4:11">(<expr><name>i</name> <operator>&lt;</operator> <literal type="number">10</literal></expr>)</condition> <block>{<block_content>
    <expr_stmt pos:start="5:9"><expr><name pos:start="5:9"><name>b</name><index>[<expr><name>i</name></expr>]</index></name> <operator>=</operator> <literal type="number">0</literal></expr>;</expr_stmt>
    <expr_stmt pos:start="6:9"><expr><name>i</name><operator>++</operator></expr>;</expr_stmt>
</block_content>}</block></while>
</block_content>}</block></function></unit>)";
    Analyzed project = analyzed_xml(xml);
    auto sinks = mark_sinks(project.graph, project.units, SinkLists::builtin(),
                            project.profiles);
    REQUIRE(sinks.size() == 1);
    Path path;
    path.nodes = {sinks[0]};
    path.source_node = sinks[0];
    path.sink_node = sinks[0];
    Verdict verdict = analyze_path(path, project.graph, project.units[0],
                                   project.profiles);
    // i < 10 allows index 9 into a 10-byte buffer
    REQUIRE(verdict.is_guarded());
    CHECK(verdict.guard_line() == 4);
}

TEST_CASE("adding a guard never converts guarded into vulnerable") {
    const std::pair<const char*, const char*> pairs[] = {
        {"yuv_rotate", "yuv_rotate_guarded_index"},
        {"indexed_write_vuln", "indexed_write_guarded"},
        {"buffer_assign_vuln", "buffer_assign_guarded"},
        {"memfn_vuln", "memfn_guarded"},
    };
    auto rank = [](const Verdict& v) {
        return v.is_vulnerable() ? 2 : v.is_inconclusive() ? 1 : 0;
    };
    for (const auto& [vuln, guarded] : pairs) {
        Outcome base = analyze_fixture(vuln);
        Outcome protected_variant = analyze_fixture(guarded);
        REQUIRE(!base.verdicts.empty());
        REQUIRE(!protected_variant.verdicts.empty());
        CHECK(rank(protected_variant.verdicts[0]) < rank(base.verdicts[0]));
    }
}

TEST_CASE("verdicts are deterministic") {
    for (int round = 0; round < 3; ++round) {
        Outcome a = analyze_fixture("yuv_rotate");
        Outcome b = analyze_fixture("yuv_rotate");
        REQUIRE(a.verdicts.size() == b.verdicts.size());
        for (size_t i = 0; i < a.verdicts.size(); ++i) {
            CHECK(a.verdicts[i].is_vulnerable() == b.verdicts[i].is_vulnerable());
            CHECK(a.verdicts[i].sink_line == b.verdicts[i].sink_line);
        }
    }
}

TEST_CASE("a missing sink context is inconclusive, not dropped") {
    Analyzed project = analyzed_fixture("yuv_rotate");
    Path path;
    path.source_node = NodeKey{"yuv", "rotate", "YuvOperator.java", 5};
    path.sink_node = NodeKey{"ghost", "nowhere", "JniYuvOperator.cpp", 1};
    path.nodes = {path.source_node, path.sink_node};
    const AstUnit& cpp = unit_named(project.units, "JniYuvOperator.cpp");
    Verdict verdict = analyze_path(path, project.graph, cpp, project.profiles);
    CHECK(verdict.is_inconclusive());
}
