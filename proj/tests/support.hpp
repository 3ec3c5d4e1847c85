#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "jniflow/report.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() {
    return std::filesystem::path(JNIFLOW_TEST_DATA);
}

inline std::filesystem::path fixture_dir(const std::string& name) {
    return data_dir() / "fixtures" / name;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing test file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::vector<jniflow::AstUnit> load_fixture_units(
    const std::string& name) {
    return jniflow::parse_srcml_file(
        (fixture_dir(name) / "srcml.xml").string());
}

inline const jniflow::AstUnit& unit_named(
    const std::vector<jniflow::AstUnit>& units, const std::string& file) {
    for (const jniflow::AstUnit& unit : units)
        if (unit.file_name == file) return unit;
    throw std::runtime_error("no unit named " + file);
}

/// Default analysis configuration for a fixture directory: srcML archive,
/// per-fixture source list, builtin sink lists.
inline jniflow::AnalysisConfig fixture_config(const std::string& name) {
    jniflow::AnalysisConfig config;
    config.srcml_archive = fixture_dir(name) / "srcml.xml";
    config.source_list_path = fixture_dir(name) / "sources.txt";
    return config;
}

/// Units parsed, symbols collected, profiles built, graph analysed.
struct Analyzed {
    std::vector<jniflow::AstUnit> units;
    std::vector<jniflow::FunctionInfo> functions;
    jniflow::SymbolTable symbols;
    jniflow::SliceProfileMap profiles;
    jniflow::Diagnostics diagnostics;
    jniflow::DataFlowGraph graph;

    explicit Analyzed(std::vector<jniflow::AstUnit> parsed,
                      const jniflow::FfiOverrides* map = nullptr)
        : units(std::move(parsed)) {
        for (const jniflow::AstUnit& unit : units)
            for (jniflow::FunctionInfo& fn : jniflow::functions_of(unit))
                functions.push_back(std::move(fn));
        symbols = jniflow::collect_symbols(units, diagnostics);
        for (const jniflow::AstUnit& unit : units)
            jniflow::merge_profiles(
                profiles, jniflow::build_slice_profiles(unit, symbols));
        jniflow::ProjectContext context{units, functions, &symbols, map};
        graph = jniflow::analyse_slices(profiles, context, diagnostics);
    }
};

inline Analyzed analyzed_fixture(const std::string& name,
                                 const jniflow::FfiOverrides* map = nullptr) {
    return Analyzed(load_fixture_units(name), map);
}

inline Analyzed analyzed_xml(const char* xml,
                             const jniflow::FfiOverrides* map = nullptr) {
    return Analyzed(jniflow::parse_srcml_archive(xml), map);
}

}  // namespace testsupport
