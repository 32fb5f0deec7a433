// File-driven front end: load a graph document, run an engine, emit
// attributions, synergies, path tables, projections, checks and the
// built-in demo instances.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "damg/cli.hpp"
#include "damg/demos.hpp"

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw damg::Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::set<std::string> split_labels(const std::string& csv) {
    std::set<std::string> out;
    std::string cur;
    std::istringstream is(csv);
    while (std::getline(is, cur, ','))
        if (!cur.empty()) out.insert(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace damg;
    CLI::App app{"Moebius transforms and Shapley values on weighted directed acyclic multigraphs"};
    app.require_subcommand(1);

    std::string input, format = "json", engine_name = "recursive", kernel_name;
    bool as_float = false, table = false, invert = false;
    std::string remove_csv, onto_csv;
    std::size_t cap = 1000000;
    std::string demo_name;

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("input", input, "graph document (JSON), or - for stdin")->required();
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "tsv"}));
        cmd->add_flag("--float", as_float, "render rationals as decimals (12 digits)");
    };

    auto* moebius = app.add_subcommand("moebius", "Moebius transform (synergy) of the values");
    add_io(moebius);
    moebius->add_flag("--invert", invert, "inverse transform: treat values as synergies");

    auto* shapley = app.add_subcommand("shapley", "Shapley attribution over the roots");
    add_io(shapley);
    shapley->add_option("--engine", engine_name, "attribution engine")
        ->check(CLI::IsMember({"recursive", "total-weights", "path-uniform", "weighted"}));
    shapley->add_option("--kernel", kernel_name, "projection kernel")
        ->check(CLI::IsMember({"path-uniform", "edge-uniform", "induced", "file"}));
    shapley->add_flag("--table", table, "include the total path weight table s(r|y)");

    auto* project = app.add_subcommand("project", "project the instance onto a vertex subset");
    add_io(project);
    auto* remove_opt =
        project->add_option("--remove", remove_csv, "comma-separated vertices to project out");
    auto* onto_opt = project->add_option("--onto", onto_csv, "comma-separated vertices to keep");
    project->add_option("--cap", cap, "abort if a projection step exceeds this many edges");

    auto* paths = app.add_subcommand("paths", "path counts pi(y) and, with --table, pi(r,y)");
    add_io(paths);
    paths->add_flag("--table", table, "include per-root path counts");

    auto* check = app.add_subcommand("check", "run the invariant suite on the input");
    add_io(check);

    std::string demo_format = "text";
    auto* demo = app.add_subcommand("demo", "rebuild a named instance and verify its numbers");
    demo->add_option("name", demo_name, "figure1|reverse-tree|poset-game|ising|coalition|classic")
        ->required();
    demo->add_option("--format", demo_format, "output format")
        ->check(CLI::IsMember({"json", "tsv", "text"}));
    demo->add_flag("--float", as_float, "render rationals as decimals");

    CLI11_PARSE(app, argc, argv);
    cli::RenderOptions opts{format, as_float};

    try {
        if (demo->parsed()) {
            opts.format = demo_format;
            auto rep = cli::cmd_demo(demo_name);
            std::cout << cli::render_demo(rep, opts);
            return rep.all_pass() ? 0 : 1;
        }
        GraphDocument doc = parse_document(slurp(input));
        if (moebius->parsed()) {
            std::cout << cli::render_moebius(cli::cmd_moebius(doc, invert), opts);
        } else if (shapley->parsed()) {
            cli::Engine eng = engine_name == "recursive"      ? cli::Engine::recursive
                              : engine_name == "total-weights" ? cli::Engine::total_weights
                              : engine_name == "path-uniform"  ? cli::Engine::path_uniform
                                                               : cli::Engine::weighted;
            cli::KernelChoice kc = kernel_name.empty()          ? cli::KernelChoice::from_doc
                                   : kernel_name == "path-uniform" ? cli::KernelChoice::path_uniform
                                   : kernel_name == "edge-uniform" ? cli::KernelChoice::edge_uniform
                                   : kernel_name == "induced"      ? cli::KernelChoice::induced
                                                                   : cli::KernelChoice::file;
            std::cout << cli::render_report(cli::cmd_shapley(doc, eng, kc, table), opts);
        } else if (project->parsed()) {
            const bool have_remove = remove_opt->count() > 0, have_onto = onto_opt->count() > 0;
            if (have_remove == have_onto)
                throw Error("project needs exactly one of --remove or --onto");
            auto out = cli::cmd_project(doc, split_labels(have_remove ? remove_csv : onto_csv),
                                        have_onto, cap);
            std::cout << serialize_document(out);
        } else if (paths->parsed()) {
            std::cout << cli::render_paths(cli::cmd_paths(doc, table), opts);
        } else if (check->parsed()) {
            auto rows = cli::cmd_check(doc);
            std::cout << cli::render_checks(rows, opts);
            for (const auto& r : rows)
                if (!r.pass) return 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
