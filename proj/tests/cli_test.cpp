// End-to-end test of the command-line tool: spawns the binary given as
// argv[1], feeds it config files, and checks exit codes and outputs.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

#define EXPECT(cond, what)                                                    \
    do {                                                                      \
        if (!(cond)) {                                                        \
            std::cerr << "FAILED: " << what << " (" << #cond << ") at line " \
                      << __LINE__ << "\n";                                    \
            ++g_failures;                                                     \
        }                                                                     \
    } while (0)

std::string g_binary;
fs::path g_dir;

int run(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
    const fs::path out_file = g_dir / "stdout.log";
    const fs::path err_file = g_dir / "stderr.log";
    const std::string cmd = g_binary + " " + args + " > " + out_file.string() + " 2> " +
                            err_file.string();
    const int status = std::system(cmd.c_str());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    if (out) *out = slurp(out_file);
    if (err) *err = slurp(err_file);
#ifdef _WIN32
    return status;
#else
    return WEXITSTATUS(status);
#endif
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

std::string slurp_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// parses "# columns: ..." CSV into (t, value) pairs
std::vector<std::pair<double, double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        rows.emplace_back(std::stod(line.substr(0, comma)),
                          std::stod(line.substr(comma + 1)));
    }
    return rows;
}

void test_transform_golden() {
    write_file(g_dir / "golden.json", R"({
        "bath": {"omega": [1.0, 2.0], "c": [1.0, 1.0]},
        "system": {"omega": 2.5},
        "initial": {"x0": 1.0},
        "output": {"dir": ")" + (g_dir / "golden_out").string() + R"("}
    })");
    const int code = run("transform --config " + (g_dir / "golden.json").string());
    EXPECT(code == 0, "transform exits 0");

    std::ifstream in(g_dir / "golden_out" / "chain.json");
    EXPECT(in.good(), "chain.json written");
    const json doc = json::parse(in);
    EXPECT(doc["n"] == 2, "chain length");
    const double w1 = doc["omega_chain"][0].get<double>();
    const double w2 = doc["omega_chain"][1].get<double>();
    EXPECT(std::abs(w1 * w1 - 2.5) < 1e-12, "first chain frequency squared 2.5");
    EXPECT(std::abs(w2 * w2 - 2.5) < 1e-12, "second chain frequency squared 2.5");
    EXPECT(std::abs(doc["coupling"][0].get<double>() - 1.5) < 1e-12, "chain coupling 1.5");
    EXPECT(std::abs(doc["system_coupling"].get<double>() - std::sqrt(2.0)) < 1e-12,
           "system coupling sqrt(2)");
}

void test_transform_breakdown() {
    write_file(g_dir / "breakdown.json", R"({
        "bath": {"omega": [1.0, 2.0], "c": [1.0, 0.0]},
        "system": {"omega": 2.5}
    })");
    std::string err;
    const int code =
        run("transform --config " + (g_dir / "breakdown.json").string(), nullptr, &err);
    EXPECT(code == 3, "breakdown exits 3");
    EXPECT(err.find("breakdown at step 1") != std::string::npos,
           "stderr names the breakdown step");
}

void test_malformed_config() {
    write_file(g_dir / "broken.json", "{ not json");
    std::string err;
    const int code = run("transform --config " + (g_dir / "broken.json").string(),
                         nullptr, &err);
    EXPECT(code == 2, "parse error exits 2");
    EXPECT(err.find("config error") != std::string::npos, "stderr labels the config error");

    write_file(g_dir / "badfield.json", R"({
        "bath": {"omega": [1.0], "c": "oops"},
        "system": {"omega": 1.0}
    })");
    const int code2 =
        run("transform --config " + (g_dir / "badfield.json").string(), nullptr, &err);
    EXPECT(code2 == 2, "field error exits 2");
    EXPECT(err.find("'c'") != std::string::npos, "diagnostic names the field");
}

void test_simulate_decoupled() {
    write_file(g_dir / "decoupled.json", R"({
        "bath": {"omega": [1.0, 2.0], "c": [0.0, 0.0]},
        "system": {"omega": 2.0},
        "initial": {"x0": 1.0, "v0": 0.0},
        "integrator": {"dt": 0.001, "t_end": 5.0},
        "output": {"dir": ")" + (g_dir / "dec_out").string() + R"("}
    })");
    const int code =
        run("simulate --config " + (g_dir / "decoupled.json").string() + " --solver exact");
    EXPECT(code == 0, "decoupled simulate exits 0");
    const auto rows = read_csv(g_dir / "dec_out" / "x_exact.csv");
    EXPECT(rows.size() == 5001, "expected sample count");
    double worst = 0.0;
    for (const auto& [t, x] : rows) worst = std::max(worst, std::abs(x - std::cos(2.0 * t)));
    EXPECT(worst < 1e-12, "x column is cos(Omega t)");
}

void test_simulate_determinism_and_equivalence() {
    const std::string config = R"({
        "bath": {"omega": [0.9, 1.4, 1.8], "c": [0.2, 0.3, 0.15]},
        "system": {"omega": 2.3},
        "initial": {"seed": 42, "amplitude": 1.0},
        "integrator": {"dt": 0.001, "t_end": 10.0, "method": "velocity-verlet"},
        "output": {"dir": ")" + (g_dir / "sim_out").string() + R"("}
    })";
    write_file(g_dir / "sim.json", config);

    const std::string base = "simulate --config " + (g_dir / "sim.json").string();
    EXPECT(run(base + " --solver ode-io") == 0, "ode-io run");
    const std::string first = slurp_bytes(g_dir / "sim_out" / "x_ode-io.csv");
    const std::string first_meta = slurp_bytes(g_dir / "sim_out" / "metadata.json");
    EXPECT(run(base + " --solver ode-io") == 0, "ode-io rerun");
    EXPECT(slurp_bytes(g_dir / "sim_out" / "x_ode-io.csv") == first,
           "rerun is byte-identical");
    EXPECT(slurp_bytes(g_dir / "sim_out" / "metadata.json") == first_meta,
           "metadata is byte-identical");

    EXPECT(run(base + " --solver ode-chain") == 0, "ode-chain run");
    const auto io = read_csv(g_dir / "sim_out" / "x_ode-io.csv");
    const auto chain = read_csv(g_dir / "sim_out" / "x_ode-chain.csv");
    EXPECT(io.size() == chain.size(), "equal sample counts");
    double worst = 0.0;
    for (std::size_t i = 0; i < io.size(); ++i)
        worst = std::max(worst, std::abs(io[i].second - chain[i].second));
    EXPECT(worst < 1e-8, "star and chain trajectories agree");

    EXPECT(run(base + " --solver exact") == 0, "exact run");
    const auto exact = read_csv(g_dir / "sim_out" / "x_exact.csv");
    worst = 0.0;
    for (std::size_t i = 0; i < io.size(); ++i)
        worst = std::max(worst, std::abs(io[i].second - exact[i].second));
    EXPECT(worst < 1e-4, "closed form tracks the ode at dt=1e-3");

    // seed override changes the data deterministically
    EXPECT(run(base + " --solver ode-io --seed 43") == 0, "seed override run");
    EXPECT(slurp_bytes(g_dir / "sim_out" / "x_ode-io.csv") != first,
           "different seed changes the trajectory");
}

void test_simulate_multivalued() {
    write_file(g_dir / "strong.json", R"({
        "bath": {"omega": [1.0, 1.5], "c": [1.8, 0.9]},
        "system": {"omega": 1.0},
        "initial": {"x0": 0.5},
        "integrator": {"dt": 0.001, "t_end": 1.0}
    })");
    std::string err;
    const int code = run("simulate --config " + (g_dir / "strong.json").string() +
                             " --solver exact",
                         nullptr, &err);
    EXPECT(code == 4, "multivalued resolvent exits 4");
    EXPECT(err.find("not both real") != std::string::npos ||
               err.find("real two-frequency") != std::string::npos,
           "stderr names the condition");
}

void test_kernels_and_gle() {
    write_file(g_dir / "kern.json", R"({
        "bath": {"omega": [1.0, 2.0], "c": [1.0, 1.0]},
        "system": {"omega": 2.5},
        "integrator": {"dt": 0.01, "t_end": 5.0},
        "output": {"dir": ")" + (g_dir / "kern_out").string() + R"("}
    })");
    EXPECT(run("kernels --config " + (g_dir / "kern.json").string()) == 0, "kernels run");
    EXPECT(fs::exists(g_dir / "kern_out" / "kernel_0.csv"), "kernel_0 table written");
    EXPECT(fs::exists(g_dir / "kern_out" / "kernel_2.csv"), "kernel_2 table written");
    std::ifstream kj(g_dir / "kern_out" / "kernels.json");
    const json doc = json::parse(kj);
    EXPECT(doc["levels"].size() == 3, "levels 0..2 recorded");
    EXPECT(doc["levels"][1]["representation"] == "closed-form", "closed form used");

    write_file(g_dir / "gle.json", R"({
        "bath": {"omega": [0.9, 1.4], "c": [0.25, 0.2]},
        "system": {"omega": 2.0},
        "initial": {"seed": 7},
        "integrator": {"dt": 0.0005, "t_end": 5.0, "method": "rk4"},
        "output": {"dir": ")" + (g_dir / "gle_out").string() + R"("}
    })");
    EXPECT(run("gle-check --config " + (g_dir / "gle.json").string()) == 0, "gle-check run");
    std::ifstream gj(g_dir / "gle_out" / "gle.json");
    const json gdoc = json::parse(gj);
    EXPECT(gdoc["relative_residual"].get<double>() < 1e-4,
           "Langevin residual small for the ode trajectory");
}

void test_verify_good_and_degenerate() {
    write_file(g_dir / "verify.json", R"({
        "bath": {"omega": [1.0, 1.9], "c": [0.35, 0.3]},
        "system": {"omega": 2.6},
        "initial": {"seed": 11},
        "output": {"dir": ")" + (g_dir / "verify_out").string() + R"("}
    })");
    std::string out;
    const int code = run("verify --config " + (g_dir / "verify.json").string(), &out);
    EXPECT(code == 0, "verify exits 0 on a healthy config");
    EXPECT(out.find("[FAIL]") == std::string::npos, "no failed checks");
    std::ifstream vj(g_dir / "verify_out" / "verify.json");
    const json vdoc = json::parse(vj);
    EXPECT(vdoc["failed"] == 0, "report records zero failures");

    // duplicate frequencies: chain construction impossible, checks skip
    write_file(g_dir / "dup.json", R"({
        "bath": {"omega": [1.0, 1.0], "c": [0.3, 0.3]},
        "system": {"omega": 2.0},
        "initial": {"seed": 3},
        "output": {"dir": ")" + (g_dir / "dup_out").string() + R"("}
    })");
    const int code2 = run("verify --config " + (g_dir / "dup.json").string(), &out);
    EXPECT(code2 == 0, "verify exits 0 when checks are skipped, not failed");
    EXPECT(out.find("[SKIP] iep_orthogonality") != std::string::npos,
           "iep check skipped with a reason");
    EXPECT(out.find("[PASS] gle_residual_io") != std::string::npos,
           "Langevin check still runs");
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: nmchain_cli_test <path-to-nmchain-binary>\n";
        return 2;
    }
    g_binary = argv[1];
    g_dir = fs::current_path() / "cli_test_tmp";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);

    test_transform_golden();
    test_transform_breakdown();
    test_malformed_config();
    test_simulate_decoupled();
    test_simulate_determinism_and_equivalence();
    test_simulate_multivalued();
    test_kernels_and_gle();
    test_verify_good_and_degenerate();

    if (g_failures == 0) {
        std::cout << "cli: all checks passed\n";
        return 0;
    }
    std::cout << "cli: " << g_failures << " checks failed\n";
    return 1;
}
