// Command-line front end: white-noise tests on CSV samples, simulation of the
// reference processes, and Monte Carlo experiments with JSON reports.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fwn/fwn.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text << '\n';
}

fwn::DgpKind parse_model(const std::string& name) {
    if (name == "iid-bm") return fwn::DgpKind::iid_bm;
    if (name == "iid-bb") return fwn::DgpKind::iid_bb;
    if (name == "far1") return fwn::DgpKind::far1;
    if (name == "farch1") return fwn::DgpKind::farch1;
    throw CLI::ValidationError("--model", "unknown model: " + name);
}

struct TestArgs {
    std::string input;
    std::string output;
    double alpha = 0.05;
    std::string mode = "classical";
    std::optional<double> delta;
    std::string variance = "h0";
    bool header = false;
    bool no_adjust = false;
    std::optional<int> p_lags;
};

int cmd_test(const TestArgs& a) {
    fwn::Matrix data;
    try {
        data = fwn::read_csv_matrix(a.input, a.header);
    } catch (const fwn::CsvError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    fwn::TestOptions opts;
    opts.small_sample_adjust = !a.no_adjust;
    try {
        const fwn::FunctionalSample sample(fwn::Grid::midpoint(data.cols()), std::move(data));
        fwn::TestReport report;
        if (a.mode == "classical") {
            report = fwn::classical_test(sample, a.alpha, opts);
            if (a.variance == "h1-gaussian") {
                report.v_h1 = fwn::var_h1_hat_gaussian(sample);
                report.v_h1_gaussian_only = true;
                const auto ci = fwn::confidence_interval(sample, a.alpha);
                report.ci = ci;
            }
        } else {
            const auto mode =
                a.mode == "relevant" ? fwn::TestMode::relevant : fwn::TestMode::similarity;
            if (!a.delta) {
                std::cerr << "error: --delta is required for mode " << a.mode << '\n';
                return kExitUsage;
            }
            report = fwn::precise_test(sample, *a.delta, a.alpha, mode, opts);
        }
        fwn::Json j = fwn::to_json(report);
        j["grid_size"] = sample.grid_size();
        if (a.p_lags) {
            j["p_lags"] = *a.p_lags;
            j["m_tilde_sq"] = fwn::m_tilde_squared(sample, *a.p_lags);
        }
        write_text(a.output, j.dump(1));
        return 0;
    } catch (const fwn::DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
}

struct SimArgs {
    std::string output;
    std::string model = "iid-bm";
    int grid_size = 100;
    int t_len = 128;
    std::uint64_t seed = 0;
    std::string kernel = "gaussian";
    double hs_norm = 0.3;
    std::string innovation = "bm";
    double c_psi = 0.3418;
    int burn_in = 200;
};

int cmd_simulate(const SimArgs& a) {
    fwn::DgpSpec spec;
    try {
        spec.kind = parse_model(a.model);
        spec.grid_size = a.grid_size;
        spec.t_len = a.t_len;
        spec.seed = a.seed;
        spec.far_kernel = a.kernel == "wiener" ? fwn::FarKernel::wiener : fwn::FarKernel::gaussian;
        spec.target_hs_norm = a.hs_norm;
        spec.innovation = a.innovation == "bb" ? fwn::Innovation::bb : fwn::Innovation::bm;
        spec.c_psi = a.c_psi;
        spec.burn_in = a.burn_in;
        spec.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    const fwn::FunctionalSample sample = fwn::simulate(spec);
    fwn::write_csv_matrix(a.output, sample.values());
    fwn::Json meta = fwn::to_json(spec);
    meta["schema"] = "fwn.dgp_spec/1";
    meta["library_version"] = fwn::kVersion;
    std::ofstream side(a.output + ".json");
    side << meta.dump(1) << '\n';
    return 0;
}

struct McArgs {
    std::string output;
    std::string preset;
    std::string model = "iid-bm";
    std::vector<int> t_values{128};
    std::vector<double> alphas{0.05};
    int grid_size = 100;
    int reps = 500;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string mode = "classical";
    double delta = 0.0;
    std::string kernel = "gaussian";
    double hs_norm = 0.3;
    std::string innovation = "bm";
    int burn_in = 200;
    bool no_timing = false;
};

fwn::Experiment base_experiment(const McArgs& a) {
    fwn::Experiment e;
    e.dgp.grid_size = a.grid_size;
    e.dgp.burn_in = a.burn_in;
    e.n_reps = a.reps;
    e.master_seed = a.seed;
    e.threads = a.threads;
    for (int t : a.t_values) e.t_values.push_back(t);
    e.alphas = a.alphas;
    if (a.mode == "relevant") e.mode = fwn::TestMode::relevant;
    if (a.mode == "similarity") e.mode = fwn::TestMode::similarity;
    e.delta = a.delta;
    return e;
}

int cmd_mc(const McArgs& a) {
    try {
        fwn::Json out;
        if (!a.preset.empty()) {
            out["schema"] = "fwn.mc_preset/1";
            out["library_version"] = fwn::kVersion;
            out["preset"] = a.preset;
            fwn::Json experiments = fwn::Json::array();
            std::vector<fwn::DgpSpec> dgps;
            if (a.preset == "table1") {
                fwn::DgpSpec bm, bb, farch;
                bm.kind = fwn::DgpKind::iid_bm;
                bb.kind = fwn::DgpKind::iid_bb;
                farch.kind = fwn::DgpKind::farch1;
                dgps = {bm, bb, farch};
            } else if (a.preset == "table2") {
                for (auto kernel : {fwn::FarKernel::gaussian, fwn::FarKernel::wiener}) {
                    for (auto innov : {fwn::Innovation::bm, fwn::Innovation::bb}) {
                        fwn::DgpSpec d;
                        d.kind = fwn::DgpKind::far1;
                        d.far_kernel = kernel;
                        d.innovation = innov;
                        d.target_hs_norm = a.hs_norm;
                        dgps.push_back(d);
                    }
                }
            } else {
                std::cerr << "error: unknown preset " << a.preset << '\n';
                return kExitUsage;
            }
            for (const auto& d : dgps) {
                fwn::Experiment e = base_experiment(a);
                e.dgp = d;
                e.dgp.grid_size = a.grid_size;
                e.t_values = {128, 256, 512, 1024};
                if (!a.t_values.empty() && a.t_values != std::vector<int>{128}) {
                    e.t_values.clear();
                    for (int t : a.t_values) e.t_values.push_back(t);
                }
                e.alphas = {0.10, 0.05, 0.01};
                const fwn::ExperimentResult r = fwn::run(e);
                experiments.push_back(fwn::to_json(r, e, !a.no_timing));
            }
            out["experiments"] = std::move(experiments);
        } else {
            fwn::Experiment e = base_experiment(a);
            e.dgp.kind = parse_model(a.model);
            e.dgp.far_kernel =
                a.kernel == "wiener" ? fwn::FarKernel::wiener : fwn::FarKernel::gaussian;
            e.dgp.target_hs_norm = a.hs_norm;
            e.dgp.innovation = a.innovation == "bb" ? fwn::Innovation::bb : fwn::Innovation::bm;
            const fwn::ExperimentResult r = fwn::run(e);
            out = fwn::to_json(r, e, !a.no_timing);
        }
        write_text(a.output, out.dump(1));
        return 0;
    } catch (const fwn::ReplicationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"White-noise testing for functional time series"};
    app.require_subcommand(1);

    TestArgs ta;
    auto* test = app.add_subcommand("test", "Run a white-noise test on a CSV sample");
    test->add_option("--input", ta.input, "CSV file, rows = time, columns = grid")->required();
    test->add_option("--output", ta.output, "Report path (default stdout)");
    test->add_option("--alpha", ta.alpha, "Significance level")->check(CLI::Range(1e-12, 1.0));
    test->add_option("--mode", ta.mode, "classical | relevant | similarity")
        ->check(CLI::IsMember({"classical", "relevant", "similarity"}));
    test->add_option("--delta", [&ta](const std::vector<std::string>& v) {
        ta.delta = std::stod(v[0]);
        return true;
    }, "Threshold for precise hypotheses");
    test->add_option("--variance", ta.variance, "h0 | h1-gaussian")
        ->check(CLI::IsMember({"h0", "h1-gaussian"}));
    test->add_flag("--header", ta.header, "Tolerate and skip a header line");
    test->add_flag("--no-adjust", ta.no_adjust, "Disable the small-sample mean adjustment");
    test->add_option("--pt", [&ta](const std::vector<std::string>& v) {
        ta.p_lags = std::stoi(v[0]);
        return true;
    }, "Also report the time-domain estimate with this lag cutoff");

    SimArgs sa;
    auto* sim = app.add_subcommand("simulate", "Simulate a reference process to CSV");
    sim->add_option("--output", sa.output, "CSV output path")->required();
    sim->add_option("--model", sa.model, "iid-bm | iid-bb | far1 | farch1");
    sim->add_option("--grid-size", sa.grid_size, "Grid points G")->check(CLI::PositiveNumber);
    sim->add_option("-T,--T", sa.t_len, "Sample length")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sa.seed, "RNG seed");
    sim->add_option("--kernel", sa.kernel, "far1 kernel: gaussian | wiener")
        ->check(CLI::IsMember({"gaussian", "wiener"}));
    sim->add_option("--hs-norm", sa.hs_norm, "far1 kernel Hilbert-Schmidt norm");
    sim->add_option("--innovation", sa.innovation, "far1 innovations: bm | bb")
        ->check(CLI::IsMember({"bm", "bb"}));
    sim->add_option("--c-psi", sa.c_psi, "farch1 coefficient");
    sim->add_option("--burn-in", sa.burn_in, "Recursion burn-in")->check(CLI::NonNegativeNumber);

    McArgs ma;
    auto* mc = app.add_subcommand("mc", "Monte Carlo experiment");
    mc->add_option("--output", ma.output, "JSON output path (default stdout)");
    mc->add_option("--preset", ma.preset, "table1 | table2");
    mc->add_option("--model", ma.model, "iid-bm | iid-bb | far1 | farch1");
    mc->add_option("-T,--T", ma.t_values, "Sample lengths");
    mc->add_option("--alpha", ma.alphas, "Significance levels");
    mc->add_option("--grid-size", ma.grid_size, "Grid points G")->check(CLI::PositiveNumber);
    mc->add_option("--reps", ma.reps, "Replications per cell")->check(CLI::PositiveNumber);
    mc->add_option("--seed", ma.seed, "Master seed");
    mc->add_option("--threads", ma.threads, "Worker threads")->check(CLI::PositiveNumber);
    mc->add_option("--mode", ma.mode, "classical | relevant | similarity")
        ->check(CLI::IsMember({"classical", "relevant", "similarity"}));
    mc->add_option("--delta", ma.delta, "Threshold for precise hypotheses");
    mc->add_option("--kernel", ma.kernel, "far1 kernel")->check(CLI::IsMember({"gaussian", "wiener"}));
    mc->add_option("--hs-norm", ma.hs_norm, "far1 kernel HS norm");
    mc->add_option("--innovation", ma.innovation, "far1 innovations: bm | bb")
        ->check(CLI::IsMember({"bm", "bb"}));
    mc->add_option("--burn-in", ma.burn_in, "Recursion burn-in")->check(CLI::NonNegativeNumber);
    mc->add_flag("--no-timing", ma.no_timing, "Omit wall-time fields (byte-stable output)");

    CLI11_PARSE(app, argc, argv);

    if (test->parsed()) return cmd_test(ta);
    if (sim->parsed()) return cmd_simulate(sa);
    if (mc->parsed()) return cmd_mc(ma);
    return kExitUsage;
}
