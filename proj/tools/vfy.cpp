// Command-line runner: per-module spot-check suites with JSON reports,
// parameter sweeps of the decomposition experiment, and CSV exports.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "vfy/delta.hpp"
#include "vfy/forms.hpp"
#include "vfy/pipeline.hpp"
#include "vfy/voronoi.hpp"

using nlohmann::json;
using namespace vfy;

static json report_json(const Report& rep, bool with_time) {
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"name", r.name},
                        {"measured", r.measured},
                        {"bound", r.bound},
                        {"pass", r.pass}});
    json out = {{"experiment", rep.experiment},
                {"config", rep.config_echo},
                {"rows", rows},
                {"all_pass", rep.all_pass()}};
    if (with_time) out["wall_seconds"] = rep.wall_seconds;
    return out;
}

static void print_table(const Report& rep) {
    std::cout << "== " << rep.experiment << " (" << rep.config_echo << ")\n";
    for (const auto& r : rep.rows)
        std::cout << (r.pass ? "  pass  " : "  FAIL  ") << r.name
                  << "  measured=" << r.measured
                  << (r.bound < 1e299 ? "  bound=" + std::to_string(r.bound) : "")
                  << "\n";
}

// flat key=value config lines, one experiment per line
static ExperimentConfig parse_line(const std::string& line) {
    ExperimentConfig cfg;
    std::istringstream is(line);
    std::string kv;
    while (is >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("sweep: expected key=value, got " + kv);
        std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "model")
            cfg.model = v;
        else if (k == "N")
            cfg.N = std::stod(v);
        else if (k == "K")
            cfg.K = std::stod(v);
        else if (k == "L")
            cfg.L = std::stoll(v);
        else if (k == "r")
            cfg.r = std::stoll(v);
        else if (k == "t3")
            cfg.t3 = std::stod(v);
        else if (k == "seed")
            cfg.seed = std::stoull(v);
        else if (k == "unsafe_scale")
            cfg.unsafe_scale = v == "1" || v == "true";
        else
            throw std::invalid_argument("sweep: unknown key " + k);
    }
    return cfg;
}

int main(int argc, char** argv) {
    CLI::App app{"desk-scale verification toolkit"};
    app.require_subcommand(1);

    std::string suite_name, out_path, grid_path, what;
    ExperimentConfig cfg;
    bool no_time = false;

    auto* suite = app.add_subcommand("suite", "run a named check suite");
    suite->add_option("name", suite_name, "suite name")->required();
    suite->add_option("--json", out_path, "write the JSON report here");
    suite->add_option("--seed", cfg.seed, "RNG seed echoed in the report");
    suite->add_flag("--no-time", no_time, "omit the wall-time field");

    auto* sweep = app.add_subcommand("sweep", "run experiments from a grid file");
    sweep->add_option("grid", grid_path, "flat key=value lines")->required();
    sweep->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* exp = app.add_subcommand("export", "write a CSV table");
    exp->add_option("what", what, "coeffs | delta-table | truncation")->required();
    exp->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*suite) {
            Report rep = run_suite(suite_name, cfg);
            print_table(rep);
            if (!out_path.empty()) {
                std::ofstream f(out_path);
                f << report_json(rep, !no_time).dump(2) << "\n";
            }
            return rep.all_pass() ? 0 : 1;
        }
        if (*sweep) {
            std::ifstream f(grid_path);
            if (!f) throw std::invalid_argument("sweep: cannot open " + grid_path);
            std::ostringstream csv;
            csv << "model,N,K,L,r,direct_abs,residual\n";
            std::string line;
            bool ok = true;
            while (std::getline(f, line)) {
                if (line.empty() || line[0] == '#') continue;
                ExperimentConfig c = parse_line(line);
                DecomposedS d = delta_decomposed_S(c);
                csv << c.model << "," << c.N << "," << c.K << "," << c.L << ","
                    << c.r << "," << std::abs(d.direct) << "," << d.residual
                    << "\n";
                ok = ok && d.residual <= 1e-3;
            }
            if (out_path.empty())
                std::cout << csv.str();
            else
                std::ofstream(out_path) << csv.str();
            return ok ? 0 : 1;
        }
        // export
        std::ostringstream out;
        if (what == "coeffs") {
            write_coeff_csv(out, GL3Coeffs::sym2(delta_eigenvalues(400)), 3, 100);
        } else if (what == "delta-table") {
            DeltaExpansion ex = build_g(1000);
            write_delta_csv(out, ex, 1);
        } else if (what == "truncation") {
            TransformParams p{SpectralParams::balanced(300.0, -150.0),
                              300.0, 1000.0, 10.0, 1, 10, 1.0, false, 10.0};
            write_truncation_csv(out, truncation_report(p));
        } else {
            std::cerr << "unknown export target: " << what << "\n";
            return 2;
        }
        if (out_path.empty())
            std::cout << out.str();
        else
            std::ofstream(out_path) << out.str();
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
