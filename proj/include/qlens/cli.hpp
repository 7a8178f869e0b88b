#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlens/bundle.hpp"
#include "qlens/circuit_io.hpp"
#include "qlens/errors.hpp"
#include "qlens/examples.hpp"
#include "qlens/server.hpp"
#include "qlens/store.hpp"
#include "qlens/svg.hpp"

namespace qlens::cli {

enum ExitCode : int { ok = 0, usage_error = 1, analysis_error = 2 };

inline constexpr const char* default_store_dir = "qlens-store";

// Store directory: explicit flag, else $QLENS_STORE, else `fallback`.
inline std::string resolve_store(const std::string& flag, const std::string& fallback) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("QLENS_STORE"); env && *env) return env;
    return fallback;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << bytes;
    if (!out.flush()) throw IoError("write to " + path.string() + " failed");
}

// Runs the command line. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"qlens: step-by-step state-vector analysis of quantum circuits", "qlens"};
    app.require_subcommand(1);

    std::string input;
    std::string out_path;
    std::string format = "json";
    std::size_t max_qubits = default_max_qubits;
    auto* analyze_cmd = app.add_subcommand("analyze", "Simulate a circuit file and write its analysis bundle");
    analyze_cmd->add_option("file", input, "Circuit file (JSON or text format)")->required();
    analyze_cmd->add_option("--out", out_path, "Output file (default: stdout)");
    analyze_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));
    analyze_cmd->add_option("--max-qubits", max_qubits, "Qubit cap")->check(CLI::Range(std::size_t{1}, hard_max_qubits));

    service::ServerConfig server_cfg;
    std::string assets;
    std::string store_flag;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API (and optional UI assets)");
    serve_cmd->add_option("--port", server_cfg.port, "Listen port")->check(CLI::Range(1, 65535));
    serve_cmd->add_option("--host", server_cfg.host, "Listen address");
    serve_cmd->add_option("--assets", assets, "Static asset directory served at /");
    serve_cmd->add_option("--store", store_flag, "Bundle store directory");
    serve_cmd->add_option("--max-qubits", server_cfg.max_qubits, "Qubit cap")
        ->check(CLI::Range(std::size_t{1}, hard_max_qubits));

    std::string svg_source;
    std::size_t svg_state = 0;
    double svg_k = default_scale;
    std::string svg_out;
    auto* svg_cmd = app.add_subcommand("export-svg", "Export the dandelion chart of one state as SVG");
    svg_cmd->add_option("source", svg_source, "Circuit file or stored bundle id")->required();
    svg_cmd->add_option("--step", svg_state, "State index: 0 is the initial state, s follows gate s-1")->required();
    svg_cmd->add_option("--k", svg_k, "Circle scale factor in (0, 1]")->required();
    svg_cmd->add_option("--out", svg_out, "Output SVG file")->required();

    std::string example_name;
    auto* examples_cmd = app.add_subcommand("examples", "List or show bundled example circuits");
    examples_cmd->require_subcommand(1);
    auto* list_cmd = examples_cmd->add_subcommand("list", "List example names");
    auto* show_cmd = examples_cmd->add_subcommand("show", "Print an example circuit");
    show_cmd->add_option("name", example_name, "Example name")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "qlens: " << e.what() << '\n';
        return usage_error;
    }

    try {
        if (*analyze_cmd) {
            const Circuit circuit = parse_circuit(read_file(input), max_qubits);
            AnalysisBundle bundle = analyze(circuit, max_qubits);
            const std::string bytes = io::canonical_bytes(bundle);
            if (const auto store_dir = resolve_store("", ""); !store_dir.empty())
                BundleStore(store_dir).put(bundle);
            if (out_path.empty()) out << bytes << '\n';
            else write_file(out_path, bytes);
            err << "analyzed " << bundle.step_count() << " steps, id " << bundle.id << '\n';
        } else if (*serve_cmd) {
            server_cfg.assets_dir = assets;
            server_cfg.store_dir = resolve_store(store_flag, default_store_dir);
            server_cfg.validate();
            service::HttpServer server(server_cfg);
            server.bind();
            err << "serving on http://" << server_cfg.host << ':' << server_cfg.port << '\n';
            server.listen();
        } else if (*svg_cmd) {
            AnalysisBundle bundle = [&] {
                if (std::filesystem::is_regular_file(svg_source))
                    return analyze(parse_circuit(read_file(svg_source), hard_max_qubits), hard_max_qubits);
                BundleStore store(resolve_store("", default_store_dir));
                auto entry = store.get(svg_source);
                if (!entry) throw NotFound("'" + svg_source + "' is neither a file nor a stored bundle id");
                return *entry->bundle;
            }();
            svg::export_svg(bundle, svg_state, svg_k, svg_out);
        } else if (*examples_cmd) {
            if (*list_cmd) {
                for (const auto& e : examples::registry()) out << e.name << '\n';
            } else if (*show_cmd) {
                const auto* e = examples::find(example_name);
                if (!e) {
                    err << "qlens: unknown example '" << example_name << "'\n";
                    return usage_error;
                }
                out << e->json_text;
            }
        }
    } catch (const Error& e) {
        err << "qlens: " << e.code() << ": " << e.what() << '\n';
        return analysis_error;
    } catch (const std::exception& e) {
        err << "qlens: " << e.what() << '\n';
        return analysis_error;
    }
    return ok;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), out, err);
}

} // namespace qlens::cli
