#include <iostream>

#include "CLI11.hpp"
#include "homolog/io.hpp"

using namespace homolog;

int main(int argc, char** argv) {
    CLI::App app{"homolog: finite semiexact categories, nsb lattices and spectral sequences"};
    app.require_subcommand(1, 1);

    io::Options opt;
    std::string input_path, bounds_text, window_text, out_dir;
    bool fast = false;

    for (const auto& name : io::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--instance", opt.instance, "category instance")->check(CLI::IsMember(io::instance_names()));
        sub->add_option("--input", input_path, "input JSON file")->check(CLI::ExistingFile);
        sub->add_option("--op", opt.op, "operation variant");
        sub->add_option("--bounds", bounds_text, "sets,groups[,mor_cap[,pair_stride]]");
        sub->add_option("--rmax", opt.r_max, "last page to compute")->check(CLI::Range(1, 32));
        sub->add_option("--window", window_text, "n_lo:n_hi,p_lo:p_hi");
        auto* audit = sub->add_flag("--audit", "run every audit (default)");
        sub->add_flag("--fast", fast, "skip audits")->excludes(audit);
        sub->add_option("--out-dir", out_dir, "write <command>.json and DOT files here");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage problems share the schema exit code
        const int rc = app.exit(e);
        return rc == 0 ? 0 : io::kSchemaError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    io::Outcome out;
    try {
        opt.audit = !fast;
        opt.seed = io::seed_from_env();
        if (!bounds_text.empty()) opt.bounds = io::parse_bounds(bounds_text);
        if (!window_text.empty()) opt.window = io::parse_window(window_text);
        if (!input_path.empty()) opt.input = io::read_json_file(input_path);
        out = io::run(command, opt);
    } catch (const io::SchemaError& e) {
        out.status = io::kSchemaError;
        out.message = e.what();
        out.report = io::stamp("error", {{"command", command}, {"status", out.status}, {"error", e.what()}});
    }

    io::write_outcome(command, out, out_dir);
    if (out.status != io::kOk) std::cerr << "homolog " << command << ": " << out.message << "\n";
    return out.status;
}
