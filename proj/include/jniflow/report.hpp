#pragma once

#include <filesystem>

#include "jniflow/buffer_analyzer.hpp"

namespace jniflow {

enum class OutputFormat { Text, Json, Sarif, Dot };

std::optional<OutputFormat> parse_format(std::string_view name);

inline constexpr std::string_view kToolName = "jniflow";
inline constexpr std::string_view kToolVersion = "1.0.0";

struct AnalysisConfig {
    std::filesystem::path project_dir;
    std::optional<std::filesystem::path> srcml_archive;
    std::filesystem::path source_list_path;
    std::optional<std::filesystem::path> sink_list_dir;
    std::optional<std::filesystem::path> jni_map_path;
    OutputFormat format = OutputFormat::Text;
    int max_paths_per_pair = 1;
    int value_chain_cap = 32;
    bool convert_sources = false;  // run the external srcml converter first
};

struct Warning {
    std::string id;  // stable across runs on identical input
    SinkCategory category = SinkCategory::BufferAccess;
    Verdict verdict;
    Path path;
    std::string message;
};

struct AnalysisResult {
    std::vector<Warning> warnings;
    Diagnostics diagnostics;
    int exit_code = 0;  // 0 clean, 1 warnings present
    std::string dot_graph;
};

/// Runs the whole pipeline: ingest, symbols, slices, data flow, paths,
/// verdicts. Guarded paths never become warnings. Throws ParseError /
/// ConfigError for unusable inputs (the CLI maps those to exit code 2).
AnalysisResult run(const AnalysisConfig& config);

std::string emit(const AnalysisResult& result, OutputFormat format);

std::string warning_id(const NodeKey& source, const NodeKey& sink,
                       std::string_view kind);

/// Slice-profile debug dump for a project or archive (the `slices`
/// subcommand).
std::string dump_project_slices(const AnalysisConfig& config);

}  // namespace jniflow
