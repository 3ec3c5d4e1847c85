#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "json.hpp"

#include "support.hpp"

using namespace jniflow;
using nlohmann::json;
using testsupport::data_dir;
using testsupport::fixture_config;
using testsupport::fixture_dir;
using testsupport::read_file;

namespace {

const char* kCorpus[] = {
    "yuv_rotate",
    "yuv_rotate_guarded_index",
    "yuv_rotate_guarded_memcpy",
    "crossfile_chain",
    "recursion",
    "source_match",
    "local_call_reject",
    "arity_reject",
    "indexed_write_vuln",
    "indexed_write_guarded",
    "buffer_assign_vuln",
    "buffer_assign_guarded",
    "buffer_assign_partial",
    "buffer_assign_alias_guarded",
    "memfn_vuln",
    "memfn_guarded",
    "memfn_inconclusive",
};

// --- minimal JSON-schema checker (type/required/properties/items/enum/$ref) --

class SchemaChecker {
public:
    explicit SchemaChecker(json schema) : root_(std::move(schema)) {}

    bool validate(const json& value, std::string& error) const {
        return check(value, root_, "$", error);
    }

private:
    json resolve(const json& schema) const {
        if (schema.contains("$ref")) {
            std::string ref = schema["$ref"];
            // only local "#/a/b" references
            json cur = root_;
            size_t pos = 2;
            while (pos < ref.size()) {
                size_t next = ref.find('/', pos);
                if (next == std::string::npos) next = ref.size();
                cur = cur.at(ref.substr(pos, next - pos));
                pos = next + 1;
            }
            return cur;
        }
        return schema;
    }

    bool check(const json& value, const json& raw_schema, std::string where,
               std::string& error) const {
        json schema = resolve(raw_schema);
        if (schema.contains("enum")) {
            for (const json& candidate : schema["enum"])
                if (candidate == value) return true;
            error = where + ": value not in enum";
            return false;
        }
        if (schema.contains("type")) {
            std::string type = schema["type"];
            bool ok = (type == "object" && value.is_object()) ||
                      (type == "array" && value.is_array()) ||
                      (type == "string" && value.is_string()) ||
                      (type == "integer" && value.is_number_integer());
            if (!ok) {
                error = where + ": expected " + type;
                return false;
            }
        }
        if (schema.contains("required"))
            for (const json& key : schema["required"])
                if (!value.contains(key.get<std::string>())) {
                    error = where + ": missing '" + key.get<std::string>() + "'";
                    return false;
                }
        if (schema.contains("properties") && value.is_object())
            for (auto& [key, sub] : schema["properties"].items())
                if (value.contains(key))
                    if (!check(value[key], sub, where + "." + key, error))
                        return false;
        if (schema.contains("items") && value.is_array()) {
            int i = 0;
            for (const json& item : value) {
                if (!check(item, schema["items"],
                           where + "[" + std::to_string(i) + "]", error))
                    return false;
                ++i;
            }
        }
        return true;
    }

    json root_;
};

}  // namespace

TEST_CASE("the rotate project reports exactly one vulnerable warning") {
    AnalysisResult result = run(fixture_config("yuv_rotate"));
    REQUIRE(result.warnings.size() == 1);
    const Warning& warning = result.warnings[0];
    CHECK(warning.verdict.is_vulnerable());
    CHECK(warning.verdict.kind() == BoundIssueKind::IndexedAccessUnchecked);
    CHECK(warning.category == SinkCategory::BufferAccess);
    CHECK(warning.path.source_node ==
          NodeKey{"yuv", "rotate", "YuvOperator.java", 5});
    CHECK(warning.path.sink_node.var_name == "yuvCopy");
    CHECK(warning.verdict.sink_line == 12);
    CHECK(result.exit_code == 1);
}

TEST_CASE("an empty project is clean") {
    auto dir = std::filesystem::temp_directory_path() / "jniflow-empty";
    std::filesystem::create_directories(dir);
    AnalysisConfig config;
    config.project_dir = dir;
    config.source_list_path = fixture_dir("yuv_rotate") / "sources.txt";
    AnalysisResult result = run(config);
    CHECK(result.warnings.empty());
    CHECK(result.exit_code == 0);
}

TEST_CASE("guarded variants report no vulnerable warnings") {
    for (const char* fixture :
         {"yuv_rotate_guarded_index", "yuv_rotate_guarded_memcpy"}) {
        INFO(fixture);
        AnalysisResult result = run(fixture_config(fixture));
        for (const Warning& warning : result.warnings)
            CHECK_FALSE(warning.verdict.is_vulnerable());
        CHECK(result.warnings.empty());
        CHECK(result.exit_code == 0);
        bool guarded_note = false;
        for (const Diagnostic& d : result.diagnostics.entries)
            if (d.category == "guarded-path") guarded_note = true;
        CHECK(guarded_note);
    }
}

TEST_CASE("unreadable inputs raise configuration errors") {
    AnalysisConfig config;
    config.project_dir = "/nonexistent/project/dir";
    config.source_list_path = fixture_dir("yuv_rotate") / "sources.txt";
    CHECK_THROWS_AS(run(config), ConfigError);

    AnalysisConfig no_input;
    no_input.source_list_path = fixture_dir("yuv_rotate") / "sources.txt";
    CHECK_THROWS_AS(run(no_input), ConfigError);

    AnalysisConfig bad_sources = fixture_config("yuv_rotate");
    bad_sources.source_list_path = "/nonexistent/sources.txt";
    CHECK_THROWS_AS(run(bad_sources), ConfigError);
}

TEST_CASE("the srcML archive wins over the project directory") {
    AnalysisConfig config = fixture_config("yuv_rotate");
    config.project_dir = fixture_dir("yuv_rotate");
    AnalysisResult result = run(config);
    bool notice = false;
    for (const Diagnostic& d : result.diagnostics.entries)
        if (d.category == "config" &&
            d.message.find("archive") != std::string::npos)
            notice = true;
    CHECK(notice);
    CHECK(result.warnings.size() == 1);
}

TEST_CASE("json output for a clean run still carries metadata") {
    AnalysisResult result = run(fixture_config("source_match"));
    CHECK(result.warnings.empty());
    json doc = json::parse(emit(result, OutputFormat::Json));
    CHECK(doc["warnings"].is_array());
    CHECK(doc["warnings"].empty());
    CHECK(doc["toolName"] == "jniflow");
    CHECK(doc.contains("version"));
    CHECK(doc.contains("diagnostics"));
}

TEST_CASE("text output names every path node as file:function:var:line") {
    AnalysisResult result = run(fixture_config("yuv_rotate"));
    std::string text = emit(result, OutputFormat::Text);
    REQUIRE(result.warnings.size() == 1);
    for (const NodeKey& node : result.warnings[0].path.nodes)
        CHECK(text.find(node.label()) != std::string::npos);
    CHECK(text.find("VULNERABLE") != std::string::npos);
}

TEST_CASE("emitted bytes are identical across consecutive runs") {
    for (const char* fixture : kCorpus) {
        INFO(fixture);
        AnalysisResult first = run(fixture_config(fixture));
        AnalysisResult second = run(fixture_config(fixture));
        CHECK(emit(first, OutputFormat::Json) ==
              emit(second, OutputFormat::Json));
        CHECK(emit(first, OutputFormat::Sarif) ==
              emit(second, OutputFormat::Sarif));
        CHECK(emit(first, OutputFormat::Text) ==
              emit(second, OutputFormat::Text));
        CHECK(emit(first, OutputFormat::Dot) == emit(second, OutputFormat::Dot));
    }
}

TEST_CASE("warning ids are stable hashes of source, sink, and kind") {
    AnalysisResult a = run(fixture_config("yuv_rotate"));
    AnalysisResult b = run(fixture_config("yuv_rotate"));
    REQUIRE(a.warnings.size() == 1);
    REQUIRE(b.warnings.size() == 1);
    CHECK(a.warnings[0].id == b.warnings[0].id);
    CHECK(a.warnings[0].id ==
          warning_id(a.warnings[0].path.source_node,
                     a.warnings[0].path.sink_node,
                     "IndexedAccessUnchecked"));
}

TEST_CASE("json reports validate against the shipped schema") {
    SchemaChecker checker(json::parse(
        read_file(data_dir().parent_path() / "schema" /
                  "warnings.schema.json")));
    for (const char* fixture : kCorpus) {
        INFO(fixture);
        AnalysisResult result = run(fixture_config(fixture));
        json doc = json::parse(emit(result, OutputFormat::Json));
        std::string error;
        bool valid = checker.validate(doc, error);
        INFO(error);
        CHECK(valid);
    }
}

TEST_CASE("sarif documents carry results with physical locations") {
    AnalysisResult result = run(fixture_config("yuv_rotate"));
    json doc = json::parse(emit(result, OutputFormat::Sarif));
    CHECK(doc["version"] == "2.1.0");
    REQUIRE(doc["runs"].size() == 1);
    const json& results = doc["runs"][0]["results"];
    REQUIRE(results.size() == 1);
    CHECK(results[0]["ruleId"] == "IndexedAccessUnchecked");
    CHECK(results[0]["level"] == "warning");
    const json& sink_loc = results[0]["locations"][0]["physicalLocation"];
    CHECK(sink_loc["artifactLocation"]["uri"] == "JniYuvOperator.cpp");
    CHECK(sink_loc["region"]["startLine"] == 12);
    const json& source_loc =
        results[0]["relatedLocations"][0]["physicalLocation"];
    CHECK(source_loc["artifactLocation"]["uri"] == "YuvOperator.java");
    CHECK(source_loc["region"]["startLine"] == 5);
    CHECK(results[0]["codeFlows"][0]["threadFlows"][0]["locations"].size() ==
          7);
}

TEST_CASE("dot output labels nodes and edge reasons") {
    AnalysisResult result = run(fixture_config("yuv_rotate"));
    std::string dot = emit(result, OutputFormat::Dot);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("YuvOperator.java:rotate:yuv:5") != std::string::npos);
    CHECK(dot.find("FfiLink") != std::string::npos);
}

TEST_CASE("warning locations reference files of the analyzed project") {
    const std::set<std::string> files = {"YuvOperator.java",
                                         "JniYuvOperator.cpp",
                                         "JniYuvOperator.h"};
    AnalysisResult result = run(fixture_config("yuv_rotate"));
    REQUIRE(result.warnings.size() == 1);
    for (const NodeKey& node : result.warnings[0].path.nodes)
        CHECK(files.count(node.file_name) == 1);
    CHECK(files.count(result.warnings[0].path.source_node.file_name) == 1);
    CHECK(files.count(result.warnings[0].path.sink_node.file_name) == 1);
}

TEST_CASE("raw-source conversion needs the external srcml binary") {
    if (std::system("command -v srcml >/dev/null 2>&1") == 0)
        return;  // converter available: the error path does not apply
    AnalysisConfig config;
    config.project_dir = fixture_dir("yuv_rotate") / "src";
    config.source_list_path = fixture_dir("yuv_rotate") / "sources.txt";
    config.convert_sources = true;
    try {
        run(config);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("srcml") != std::string::npos);
    }
}

TEST_CASE("corpus regression: emitted reports match the golden files") {
    for (const char* fixture : kCorpus) {
        INFO(fixture);
        AnalysisResult result = run(fixture_config(fixture));
        std::string actual = emit(result, OutputFormat::Json);
        std::string expected = read_file(
            data_dir() / "golden" / (std::string(fixture) + ".json"));
        CHECK(actual == expected);
    }
}

TEST_CASE("undecidable paths surface as notes instead of disappearing") {
    AnalysisResult result = run(fixture_config("memfn_inconclusive"));
    REQUIRE(result.warnings.size() == 1);
    const Warning& warning = result.warnings[0];
    CHECK(warning.verdict.is_inconclusive());
    CHECK(warning.category == SinkCategory::Memory);
    CHECK(result.exit_code == 1);
    json doc = json::parse(emit(result, OutputFormat::Json));
    CHECK(doc["warnings"][0]["severity"] == "note");
    CHECK(doc["warnings"][0]["kind"] == "Inconclusive");
}

TEST_CASE("text and sarif reports match their golden files") {
    AnalysisResult result = run(fixture_config("yuv_rotate"));
    CHECK(emit(result, OutputFormat::Text) ==
          read_file(data_dir() / "golden" / "yuv_rotate.txt"));
    CHECK(emit(result, OutputFormat::Sarif) ==
          read_file(data_dir() / "golden" / "yuv_rotate.sarif"));
}
