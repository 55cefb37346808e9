#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "divsparse/cli.hpp"

int main(int argc, char** argv) {
    using namespace divsparse;
    CLI::App app{"Max-distance sparsifiers, diversification and clustering over set domains"};

    std::string command, instance_path, problem, mode = "auto";
    RunConfig config;
    std::size_t p = 0, trials = 0;
    app.add_option("command", command, "solve | sparsify | enumerate | verify")
        ->required()
        ->check(CLI::IsMember({"solve", "sparsify", "enumerate", "verify"}));
    app.add_option("--instance", instance_path, "Instance file")->required();
    app.add_option("--problem", problem, "maxmin | maxsum | kcenter | ksumradii")
        ->check(CLI::IsMember({"maxmin", "maxsum", "kcenter", "ksumradii"}));
    app.add_option("--k", config.k, "Number of sets")->default_val(1);
    app.add_option("--d", config.d, "Distance threshold or cap")->default_val(0);
    app.add_flag("--modified", config.modified, "Use the modified Hamming distance");
    app.add_option("--seed", config.seed, "Random seed")->default_val(0);
    app.add_option("--epsilon", config.epsilon, "Failure probability")->default_val(0.01);
    auto* p_opt = app.add_option("--p", p, "Cluster radius override");
    auto* trials_opt = app.add_option("--trials", trials, "Far-set trial count override");
    app.add_option("--mode", mode, "auto | small | limited")
        ->check(CLI::IsMember({"auto", "small", "limited"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    config.command = parse_command(command);
    config.mode = parse_mode(mode);
    if (!problem.empty()) config.problem = parse_problem(problem);
    if (p_opt->count()) config.p = p;
    if (trials_opt->count()) {
        if (trials == 0) {
            std::cerr << "error: --trials must be positive\n";
            return 2;
        }
        config.trials = trials;
    }

    std::ifstream file(instance_path);
    if (!file) {
        std::cerr << "error: cannot read " << instance_path << '\n';
        return 2;
    }
    std::stringstream text;
    text << file.rdbuf();
    return run_text(config, text.str(), std::cout, std::cerr);
}
