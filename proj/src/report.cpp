#include <algorithm>
#include <array>
#include <set>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "jniflow/report.hpp"

namespace jniflow {

namespace {

using ordered_json = nlohmann::ordered_json;

uint64_t fnv1a(std::string_view text) {
    uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string verdict_kind_name(const Verdict& verdict) {
    if (verdict.is_vulnerable()) return std::string(to_string(verdict.kind()));
    if (verdict.is_inconclusive()) return "Inconclusive";
    return "Guarded";
}

std::string severity_of(const Verdict& verdict) {
    return verdict.is_vulnerable() ? "warning" : "note";
}

struct ProjectModel {
    std::vector<AstUnit> units;
    std::vector<FunctionInfo> functions;
    SymbolTable symbols;
    SliceProfileMap profiles;
    Diagnostics diagnostics;

    const AstUnit* unit_named(const std::string& file) const {
        for (const AstUnit& unit : units)
            if (unit.file_name == file) return &unit;
        return nullptr;
    }
};

std::vector<std::filesystem::path> sorted_files(
    const std::filesystem::path& dir, const std::set<std::string>& extensions) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry :
         std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (extensions.count(entry.path().extension().string()))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string shell_quote(const std::string& text) {
    std::string out = "'";
    for (char c : text) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

/// Convenience path: run the external srcml converter over a raw source
/// tree. The analysis itself always consumes srcML XML.
std::filesystem::path convert_with_srcml(const std::filesystem::path& dir) {
    if (std::system("command -v srcml >/dev/null 2>&1") != 0)
        throw ConfigError(
            "the 'srcml' executable is not on PATH; pre-generate srcML XML "
            "(srcml --position) and pass it with --srcml or --project");
    std::vector<std::filesystem::path> files = sorted_files(
        dir, {".java", ".c", ".cc", ".cpp", ".cxx", ".h", ".hh", ".hpp"});
    if (files.empty())
        throw ConfigError("no Java/C/C++ sources under '" + dir.string() + "'");
    std::filesystem::path out =
        std::filesystem::temp_directory_path() /
        ("jniflow-" + std::to_string(fnv1a(dir.string()) % 100000) + ".xml");
    std::string command = "srcml --position -o " + shell_quote(out.string());
    for (const auto& file : files) command += " " + shell_quote(file.string());
    if (std::system(command.c_str()) != 0)
        throw ConfigError("srcml conversion failed for '" + dir.string() + "'");
    return out;
}

ProjectModel ingest(const AnalysisConfig& config, Diagnostics& diagnostics) {
    ProjectModel model;
    std::vector<std::filesystem::path> inputs;
    if (config.srcml_archive) {
        if (!config.project_dir.empty())
            diagnostics.add("config",
                            "both --project and --srcml given; the srcML "
                            "archive drives ingestion");
        inputs.push_back(*config.srcml_archive);
    } else if (!config.project_dir.empty()) {
        if (!std::filesystem::is_directory(config.project_dir))
            throw ConfigError("project directory '" +
                              config.project_dir.string() +
                              "' does not exist");
        if (config.convert_sources) {
            inputs.push_back(convert_with_srcml(config.project_dir));
        } else {
            inputs = sorted_files(config.project_dir, {".xml"});
        }
    } else {
        throw ConfigError("no input: pass --project DIR or --srcml FILE");
    }

    std::set<std::string> seen;
    for (const auto& input : inputs) {
        std::vector<AstUnit> parsed = parse_srcml_file(input.string());
        for (AstUnit& unit : parsed) {
            if (!seen.insert(unit.file_name).second) {
                diagnostics.add("duplicate-unit",
                                "unit '" + unit.file_name +
                                    "' appears more than once; keeping the "
                                    "first occurrence");
                continue;
            }
            model.units.push_back(std::move(unit));
        }
    }

    // units are final now; everything below may keep pointers into them
    for (const AstUnit& unit : model.units)
        for (FunctionInfo& fn : functions_of(unit))
            model.functions.push_back(std::move(fn));
    model.symbols = collect_symbols(model.units, diagnostics);
    for (const AstUnit& unit : model.units)
        merge_profiles(model.profiles,
                       build_slice_profiles(unit, model.symbols));
    return model;
}

std::string compose_message(const Warning& warning) {
    const Path& path = warning.path;
    std::ostringstream out;
    if (warning.verdict.is_inconclusive()) {
        out << "undecided " << to_string(warning.category) << " sink for '"
            << path.sink_node.var_name << "' at " << path.sink_node.file_name
            << ":" << warning.verdict.sink_line << " ("
            << warning.verdict.reason() << ")";
        return out.str();
    }
    switch (warning.verdict.kind()) {
        case BoundIssueKind::IndexedAccessUnchecked:
            out << "indexed access of buffer '" << path.sink_node.var_name
                << "' at " << path.sink_node.file_name << ":"
                << warning.verdict.sink_line
                << " is not checked against the buffer size";
            break;
        case BoundIssueKind::BufferAssignNoSizeCheck:
            out << "buffer-to-buffer assignment at "
                << path.sink_node.file_name << ":" << warning.verdict.sink_line
                << " has no size check on either side";
            break;
        case BoundIssueKind::BufferAssignUnguarded:
            out << "buffer-to-buffer assignment at "
                << path.sink_node.file_name << ":" << warning.verdict.sink_line
                << " checks only one buffer's size";
            break;
        case BoundIssueKind::MemFnNoSizeGuard:
            out << "call at " << path.sink_node.file_name << ":"
                << warning.verdict.sink_line << " writes into '"
                << path.sink_node.var_name
                << "' flow without a destination size guard";
            break;
    }
    out << "; input reaches it from " << path.source_node.file_name << ":"
        << path.source_node.defined_position << " ("
        << path.source_node.var_name << ")";
    return out.str();
}

ordered_json location_json(const NodeKey& key, int line) {
    ordered_json j;
    j["file"] = key.file_name;
    j["function"] = key.function_name;
    j["var"] = key.var_name;
    j["line"] = line;
    return j;
}

ordered_json to_json_document(const AnalysisResult& result) {
    ordered_json doc;
    doc["version"] = std::string(kToolVersion);
    doc["toolName"] = std::string(kToolName);
    doc["warnings"] = ordered_json::array();
    for (const Warning& warning : result.warnings) {
        ordered_json w;
        w["id"] = warning.id;
        w["category"] = std::string(to_string(warning.category));
        w["kind"] = verdict_kind_name(warning.verdict);
        w["severity"] = severity_of(warning.verdict);
        w["source"] = location_json(warning.path.source_node,
                                    warning.path.source_node.defined_position);
        w["sink"] =
            location_json(warning.path.sink_node, warning.verdict.sink_line);
        w["path"] = ordered_json::array();
        for (const NodeKey& node : warning.path.nodes)
            w["path"].push_back(location_json(node, node.defined_position));
        w["message"] = warning.message;
        doc["warnings"].push_back(std::move(w));
    }
    doc["diagnostics"] = ordered_json::array();
    for (const Diagnostic& diag : result.diagnostics.entries) {
        ordered_json d;
        d["category"] = diag.category;
        d["message"] = diag.message;
        if (!diag.file.empty()) d["file"] = diag.file;
        if (diag.line > 0) d["line"] = diag.line;
        doc["diagnostics"].push_back(std::move(d));
    }
    return doc;
}

ordered_json sarif_location(const NodeKey& key, int line,
                            const std::string& message) {
    ordered_json loc;
    if (!message.empty()) loc["message"]["text"] = message;
    loc["physicalLocation"]["artifactLocation"]["uri"] = key.file_name;
    loc["physicalLocation"]["region"]["startLine"] = line;
    return loc;
}

ordered_json to_sarif_document(const AnalysisResult& result) {
    static const std::pair<std::string_view, std::string_view> rules[] = {
        {"IndexedAccessUnchecked",
         "Index-based buffer access without a bound check"},
        {"BufferAssignNoSizeCheck",
         "Buffer assigned to another buffer without size checks"},
        {"BufferAssignUnguarded",
         "Buffer assignment whose size check covers only one side"},
        {"MemFnNoSizeGuard",
         "Memory-writing library call without a destination size guard"},
        {"Inconclusive", "Cross-language flow the analyzer could not decide"},
    };
    ordered_json doc;
    doc["$schema"] =
        "https://raw.githubusercontent.com/oasis-tcs/sarif-spec/master/"
        "Schemata/sarif-schema-2.1.0.json";
    doc["version"] = "2.1.0";
    ordered_json driver;
    driver["name"] = std::string(kToolName);
    driver["version"] = std::string(kToolVersion);
    driver["rules"] = ordered_json::array();
    for (const auto& [id, text] : rules) {
        ordered_json rule;
        rule["id"] = std::string(id);
        rule["shortDescription"]["text"] = std::string(text);
        driver["rules"].push_back(std::move(rule));
    }
    ordered_json run;
    run["tool"]["driver"] = std::move(driver);
    run["results"] = ordered_json::array();
    for (const Warning& warning : result.warnings) {
        ordered_json res;
        res["ruleId"] = verdict_kind_name(warning.verdict);
        res["level"] = severity_of(warning.verdict);
        res["message"]["text"] = warning.message;
        res["locations"] = ordered_json::array();
        res["locations"].push_back(sarif_location(
            warning.path.sink_node, warning.verdict.sink_line, "sink"));
        res["relatedLocations"] = ordered_json::array();
        res["relatedLocations"].push_back(
            sarif_location(warning.path.source_node,
                           warning.path.source_node.defined_position,
                           "source"));
        ordered_json flow_locations = ordered_json::array();
        for (const NodeKey& node : warning.path.nodes) {
            ordered_json step;
            step["location"] = sarif_location(node, node.defined_position,
                                              node.label());
            flow_locations.push_back(std::move(step));
        }
        ordered_json thread_flow;
        thread_flow["locations"] = std::move(flow_locations);
        res["codeFlows"] = ordered_json::array();
        res["codeFlows"].push_back(ordered_json{
            {"threadFlows", ordered_json::array({std::move(thread_flow)})}});
        res["partialFingerprints"]["jniflowWarningId"] = warning.id;
        run["results"].push_back(std::move(res));
    }
    doc["runs"] = ordered_json::array();
    doc["runs"].push_back(std::move(run));
    return doc;
}

std::string to_text(const AnalysisResult& result) {
    std::ostringstream out;
    if (result.warnings.empty()) {
        out << "no warnings\n";
    }
    int counter = 0;
    for (const Warning& warning : result.warnings) {
        ++counter;
        out << "[" << counter << "] "
            << (warning.verdict.is_vulnerable() ? "VULNERABLE" : "INCONCLUSIVE")
            << " " << verdict_kind_name(warning.verdict)
            << " category=" << to_string(warning.category) << " id="
            << warning.id << "\n";
        out << "  source: " << warning.path.source_node.label() << "\n";
        out << "  sink:   " << warning.path.sink_node.file_name << ":"
            << warning.path.sink_node.function_name << ":"
            << warning.path.sink_node.var_name << ":"
            << warning.verdict.sink_line << "\n";
        out << "  path:\n";
        for (const NodeKey& node : warning.path.nodes)
            out << "    " << node.label() << "\n";
        out << "  " << warning.message << "\n";
    }
    if (!result.diagnostics.entries.empty()) {
        out << "-- diagnostics --\n";
        for (const Diagnostic& diag : result.diagnostics.entries) {
            out << "  [" << diag.category << "] " << diag.message;
            if (!diag.file.empty()) {
                out << " (" << diag.file;
                if (diag.line > 0) out << ":" << diag.line;
                out << ")";
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace

std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "text") return OutputFormat::Text;
    if (name == "json") return OutputFormat::Json;
    if (name == "sarif") return OutputFormat::Sarif;
    if (name == "dot") return OutputFormat::Dot;
    return std::nullopt;
}

std::string warning_id(const NodeKey& source, const NodeKey& sink,
                       std::string_view kind) {
    std::string text = source.label() + "|" + sink.label() + "|" +
                       std::string(kind);
    std::ostringstream out;
    out << std::hex << fnv1a(text);
    return out.str();
}

AnalysisResult run(const AnalysisConfig& config) {
    AnalysisResult result;
    ProjectModel model = ingest(config, result.diagnostics);

    std::vector<SourceFnSpec> specs = load_source_list(config.source_list_path);
    SinkLists lists = config.sink_list_dir
                          ? SinkLists::load_dir(*config.sink_list_dir)
                          : SinkLists::builtin();
    FfiOverrides overrides;
    if (config.jni_map_path) overrides = FfiOverrides::load(*config.jni_map_path);

    ProjectContext context{model.units, model.functions, &model.symbols,
                           &overrides};
    DataFlowGraph graph =
        analyse_slices(model.profiles, context, result.diagnostics);

    std::vector<NodeKey> sources =
        match_sources(graph, model.units, specs, model.profiles, model.symbols,
                      result.diagnostics);
    std::vector<NodeKey> sinks =
        mark_sinks(graph, model.units, lists, model.profiles);
    std::vector<Path> paths =
        find_paths(graph, sources, sinks, config.max_paths_per_pair);

    for (Path& path : paths) {
        const AstUnit* sink_unit = model.unit_named(path.sink_node.file_name);
        Verdict verdict;
        if (!sink_unit) {
            verdict.outcome = InconclusiveInfo{"sink unit not found"};
            verdict.sink_line = path.sink_line;
            verdict.category = path.sink_category;
        } else {
            verdict = analyze_path(path, graph, *sink_unit, model.profiles,
                                   config.value_chain_cap);
        }
        path.sink_line = verdict.sink_line;
        path.sink_category = verdict.category;
        if (verdict.is_guarded()) {
            result.diagnostics.add(
                "guarded-path",
                "path from " + path.source_node.label() + " to " +
                    path.sink_node.label() + " is guarded at line " +
                    std::to_string(verdict.guard_line()),
                path.sink_node.file_name, verdict.guard_line());
            continue;
        }
        Warning warning;
        warning.category = verdict.category;
        warning.verdict = verdict;
        warning.path = path;
        warning.id = warning_id(path.source_node, path.sink_node,
                                verdict_kind_name(verdict));
        warning.message = compose_message(warning);
        result.warnings.push_back(std::move(warning));
    }

    std::sort(result.warnings.begin(), result.warnings.end(),
              [](const Warning& a, const Warning& b) {
                  return std::tie(a.path.source_node, a.path.sink_node, a.id) <
                         std::tie(b.path.source_node, b.path.sink_node, b.id);
              });

    // several profiles can hit the same unresolved call; report it once
    auto& entries = result.diagnostics.entries;
    std::set<std::array<std::string, 3>> seen_diags;
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [&](const Diagnostic& d) {
                                     return !seen_diags
                                                 .insert({d.category, d.message,
                                                          d.file +
                                                              std::to_string(
                                                                  d.line)})
                                                 .second;
                                 }),
                  entries.end());
    result.exit_code = result.warnings.empty() ? 0 : 1;
    result.dot_graph = to_dot(graph);
    return result;
}

std::string emit(const AnalysisResult& result, OutputFormat format) {
    switch (format) {
        case OutputFormat::Text:
            return to_text(result);
        case OutputFormat::Json:
            return to_json_document(result).dump(2) + "\n";
        case OutputFormat::Sarif:
            return to_sarif_document(result).dump(2) + "\n";
        case OutputFormat::Dot:
            return result.dot_graph;
    }
    return {};
}

std::string dump_project_slices(const AnalysisConfig& config) {
    Diagnostics diagnostics;
    ProjectModel model = ingest(config, diagnostics);
    return dump_profiles(model.profiles);
}

}  // namespace jniflow
