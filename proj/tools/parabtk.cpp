#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "parabtk/cli.hpp"

using namespace parabtk;

int main(int argc, char** argv) {
    CLI::App app{"parabtk: refined parabolic bundles on the projective line"};
    app.require_subcommand(1);
    std::string input, field, output = "json";
    CliOptions opt;
    std::string at;
    app.add_option("--input", input, "input document (JSON)");
    app.add_option("--weights", opt.weights, "democratic:<p/q>");
    app.add_option("--field", field, "q or fp:<p>");
    app.add_option("--seed", opt.seed, "seed for witness sampling");
    app.add_option("--output", output, "json or table")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--at", at, "elm point indices, comma separated");
    app.add_flag("--named", opt.named, "elm keeps the degree (even total multiplicity)");
    app.add_option("--shape", opt.shape, "divisor shape for walls/tables, or 2+2 ... 5 for flat-locus");
    app.add_option("--strategy", opt.strategy, "find-weights: lp or constructive");
    app.fallthrough();
    static const std::map<std::string, std::string> help = {
        {"type", "type of each top level"},
        {"tableau", "standard tableau of each chain"},
        {"stab", "stability index of every line subbundle (needs --weights)"},
        {"stable", "w-stability verdict (needs --weights)"},
        {"tame", "tameness"},
        {"admissible", "admissibility"},
        {"decomposable", "decomposability with a witness"},
        {"simple", "simplicity of the underlying parabolic bundle"},
        {"find-weights", "search for stabilizing weights"},
        {"elm", "elementary transformation at --at"},
        {"flat-check", "flatness against the document's lambda"},
        {"flat-locus", "non-simple flat locus of a family (--shape)"},
        {"classify", "special type of a bundle of degree 1 on a length-5 divisor"},
        {"walls", "democratic walls of a divisor shape (--shape)"},
        {"tables", "recomputed stability and epsilon tables"},
    };
    for (const auto& c : command_names()) {
        auto it = help.find(c);
        app.add_subcommand(c, it == help.end() ? "" : it->second);
    }
    CLI11_PARSE(app, argc, argv);

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (!field.empty()) opt.field = parse_field(field);
        if (!at.empty()) {
            std::stringstream ss(at);
            std::string tok;
            while (std::getline(ss, tok, ',')) opt.at.push_back(std::stoi(tok));
        }
        if (!input.empty()) {
            std::ifstream f(input);
            if (!f) throw UsageError("cannot read " + input);
            std::stringstream buf;
            buf << f.rdbuf();
            try {
                opt.input = json::parse(buf.str());
            } catch (const json::parse_error& e) {
                throw InputError("", std::string("not valid JSON: ") + e.what());
            }
        }
        const json r = run_command(cmd, opt);
        if (output == "table") std::cout << render_table(r);
        else std::cout << r.dump(2) << "\n";
    } catch (const InputError& e) {
        std::cerr << "input error:\n";
        for (const auto& i : e.issues) std::cerr << "  " << i.str() << "\n";
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
