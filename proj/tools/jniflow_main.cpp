#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "jniflow/report.hpp"

namespace {

int write_output(const std::string& bytes, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << bytes;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "jniflow: cannot write '" << out_path << "'\n";
        return 2;
    }
    out << bytes;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jniflow: finds buffer-overflow-prone data-flow paths that "
                 "start in Java and end in C/C++ behind the JNI boundary"};
    app.require_subcommand(1);

    std::string project_dir;
    std::string srcml_file;
    std::string sources_file;
    std::string sinks_dir;
    std::string jni_map;
    std::string format_name = "text";
    std::string out_path;
    int max_paths = 1;
    int chain_cap = 32;
    bool convert = false;

    CLI::App* analyze =
        app.add_subcommand("analyze", "run the full analysis pipeline");
    analyze->add_option("--project", project_dir,
                        "directory of pre-generated srcML XML files (or raw "
                        "sources with --convert)");
    analyze->add_option("--srcml", srcml_file,
                        "single srcML file or archive (wins over --project)");
    analyze->add_option("--sources", sources_file,
                        "curated source-function list (qualified.Name/arity "
                        "per line)")
        ->required();
    analyze->add_option("--sinks-dir", sinks_dir,
                        "directory with input.txt/memory.txt/output.txt/"
                        "utility.txt sink lists (builtin lists otherwise)");
    analyze->add_option("--jni-map", jni_map,
                        "per-method JNI name overrides "
                        "(qualified.Class.method = c_function)");
    analyze->add_option("--format", format_name, "text|json|sarif|dot")
        ->check(CLI::IsMember({"text", "json", "sarif", "dot"}));
    analyze->add_option("--out", out_path, "write the report to a file");
    analyze->add_option("--max-paths-per-pair", max_paths,
                        "simple paths per (source, sink) pair")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--value-chain-cap", chain_cap,
                        "reference-chain depth for value backtracking")
        ->check(CLI::PositiveNumber);
    analyze->add_flag("--convert", convert,
                      "treat --project as raw sources and run the external "
                      "'srcml' converter first");

    std::string slices_project;
    std::string slices_srcml;
    CLI::App* slices = app.add_subcommand(
        "slices", "dump slice profiles, one per line, pipe-separated");
    slices->add_option("--project", slices_project,
                       "directory of srcML XML files");
    slices->add_option("--srcml", slices_srcml, "single srcML file or archive");

    CLI11_PARSE(app, argc, argv);

    try {
        if (slices->parsed()) {
            jniflow::AnalysisConfig config;
            config.project_dir = slices_project;
            if (!slices_srcml.empty()) config.srcml_archive = slices_srcml;
            std::cout << jniflow::dump_project_slices(config);
            return 0;
        }

        jniflow::AnalysisConfig config;
        config.project_dir = project_dir;
        if (!srcml_file.empty()) config.srcml_archive = srcml_file;
        config.source_list_path = sources_file;
        if (!sinks_dir.empty()) config.sink_list_dir = sinks_dir;
        if (!jni_map.empty()) config.jni_map_path = jni_map;
        config.format = *jniflow::parse_format(format_name);
        config.max_paths_per_pair = max_paths;
        config.value_chain_cap = chain_cap;
        config.convert_sources = convert;

        jniflow::AnalysisResult result = jniflow::run(config);
        std::string bytes = jniflow::emit(result, config.format);
        if (int rc = write_output(bytes, out_path); rc != 0) return rc;
        return result.exit_code;
    } catch (const jniflow::ParseError& e) {
        std::cerr << "jniflow: " << e.what() << "\n";
        return 2;
    } catch (const jniflow::ConfigError& e) {
        std::cerr << "jniflow: " << e.what() << "\n";
        return 2;
    }
}
