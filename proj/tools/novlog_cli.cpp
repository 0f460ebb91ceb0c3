// novlog: run one job file and print its JSON report.

#include "novlog/job.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace novlog;
using novlog::io::json;

namespace {

int uniform(std::mt19937_64 &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

json term(int t, const std::string &h, const Rational &q) { return json{{"t", t}, {"h", h}, {"q", to_string(q)}}; }

/// Random Witt vector over Z x| Z/3 with rho = inversion.
json generate_log(std::mt19937_64 &rng, int n) {
    json series = json::array({term(0, "e", 1)});
    const char *names[] = {"e", "a", "a2"};
    for (int k = 1; k <= std::min(n, 4); ++k)
        for (int i = 0; i < 3; ++i)
            if (uniform(rng, 0, 2) == 0)
                series.push_back(term(k, names[i], Rational(uniform(rng, -3, 3), uniform(rng, 1, 3))));
    return json{{"group", {{"cyclic", 3}, {"rho_power", 2}}},
                {"truncation", n},
                {"command", "log"},
                {"operands", {{"series", series}}}};
}

/// Mapping torus of a random integer 2x2 map over G = Z: tau_0 = t F and
/// the complex 0 -> R^2 --(1 - t F)--> R^2 -> 0.
json generate_check_main(std::mt19937_64 &rng, int n) {
    json edges = json::array();
    json d = json::array();
    for (int q = 0; q < 2; ++q) {
        json row = json::array();
        for (int p = 0; p < 2; ++p) {
            const int f = uniform(rng, -1, 1);
            for (int c = 0; c < std::abs(f); ++c)
                edges.push_back(json{{"from", "p" + std::to_string(p)},
                                     {"to", "p" + std::to_string(q)},
                                     {"sign", f > 0 ? 1 : -1},
                                     {"label", {{"t", 1}, {"h", "e"}}}});
            json entry = json::array();
            if (p == q)
                entry.push_back(term(0, "e", 1));
            if (f != 0)
                entry.push_back(term(1, "e", -f));
            row.push_back(entry);
        }
        d.push_back(row);
    }
    json model{{"degree", 0}, {"nodes", {"p0", "p1"}}, {"edges", edges}};
    return json{{"group", {{"cyclic", 1}}},
                {"truncation", n},
                {"command", "check-main"},
                {"operands", {{"models", json::array({model})}, {"complex", {{"ranks", {2, 2}}, {"differentials", {d}}}}}}};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Witt-vector logarithms, Novikov torsion and closed-orbit eta functions"};
    std::string input, output, generate;
    std::optional<int> truncation;
    std::uint64_t seed = 1;
    app.add_option("-i,--input", input, "job file (JSON); '-' reads standard input");
    app.add_option("-o,--output", output, "write the report here instead of standard output");
    app.add_option("-N,--truncation", truncation, "override the job's truncation order")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "seed for --generate");
    app.add_option("--generate", generate, "emit a random job instead of running one")
        ->check(CLI::IsMember({"log", "check-main"}));
    CLI11_PARSE(app, argc, argv);

    auto emit = [&](const json &doc) {
        const std::string text = doc.dump(2) + "\n";
        if (output.empty()) {
            std::cout << text;
            return true;
        }
        std::ofstream out(output);
        out << text;
        if (!out) {
            std::cerr << "novlog: cannot write " << output << "\n";
            return false;
        }
        return true;
    };

    if (!generate.empty()) {
        std::mt19937_64 rng(seed);
        const int n = truncation.value_or(8);
        return emit(generate == "log" ? generate_log(rng, n) : generate_check_main(rng, n)) ? 0 : 2;
    }
    if (input.empty()) {
        std::cerr << "novlog: --input is required (try --help)\n";
        return 2;
    }
    std::stringstream buffer;
    if (input == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(input);
        if (!in) {
            std::cerr << "novlog: cannot read " << input << "\n";
            return 2;
        }
        buffer << in.rdbuf();
    }
    const io::Outcome outcome = io::run_job(buffer.str(), truncation);
    if (!emit(outcome.report))
        return 2;
    return outcome.exit_code;
}
