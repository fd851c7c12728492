#include "spde2d/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "spde2d/errors.hpp"
#include "spde2d/io.hpp"
#include "spde2d/kahan.hpp"
#include "spde2d/sampling.hpp"
#include "spde2d/simulate.hpp"

namespace spde2d {

ExperimentConfig desk_scale_config() { return ExperimentConfig{}; }

ExperimentConfig full_scale_config() {
    ExperimentConfig config;
    config.noise = NoiseSpec(0.5, -19.5, 10000, 10000);
    config.b_values = {0.02, 0.04, 0.06, 0.08, 0.1};
    config.m1_values = {20, 30, 40, 50, 60, 70, 80, 90};
    config.replications = 200;
    return config;
}

ExperimentConfig config_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidParameters(std::string("invalid-parameters: config JSON: ") + e.what());
    }
    ExperimentConfig config;
    try {
        if (j.contains("coeffs")) {
            const auto& c = j["coeffs"];
            config.coeffs = SpdeCoefficients(
                c.value("theta0", 0.0), c.value("theta1", 0.2), c.value("eta1", 0.2),
                c.value("theta2", 0.2), c.value("sigma", 1.0));
        }
        if (j.contains("noise")) {
            const auto& n = j["noise"];
            config.noise = NoiseSpec(n.value("alpha", 0.5), n.value("mu0", -19.5),
                                     n.value("trunc_k", 1000), n.value("trunc_l", 1000));
        }
        config.n_steps = j.value("N", config.n_steps);
        if (j.contains("b_values")) config.b_values = j["b_values"].get<std::vector<double>>();
        if (j.contains("m1_values")) config.m1_values = j["m1_values"].get<std::vector<int>>();
        config.replications = j.value("replications", config.replications);
        config.seed = j.value("seed", config.seed);
        config.workers = j.value("workers", config.workers);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameters(std::string("invalid-parameters: config JSON: ") + e.what());
    }
    return config;
}

std::string config_to_json(const ExperimentConfig& config) {
    nlohmann::json j;
    j["coeffs"] = {{"theta0", config.coeffs.theta0}, {"theta1", config.coeffs.theta1},
                   {"eta1", config.coeffs.eta1},     {"theta2", config.coeffs.theta2},
                   {"sigma", config.coeffs.sigma}};
    j["noise"] = {{"alpha", config.noise.alpha},
                  {"mu0", config.noise.mu0},
                  {"trunc_k", config.noise.trunc_k},
                  {"trunc_l", config.noise.trunc_l}};
    j["N"] = config.n_steps;
    j["b_values"] = config.b_values;
    j["m1_values"] = config.m1_values;
    j["replications"] = config.replications;
    j["seed"] = config.seed;
    j["workers"] = config.workers;
    return j.dump(2);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("io-error: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json(text);
}

namespace {

struct Cell {
    double b;
    int m1;
    ThinnedDesign design;
    FieldEvaluator evaluator;
};

void warn_unbalanced(const ThinnedDesign& design) {
    const double m = static_cast<double>(design.m1) * design.m2;
    const double n = design.n_steps;
    if (m / n > 100.0 || n / m > 100.0)
        std::fprintf(stderr,
                     "warning: design b=%g m1=%d N=%d has m/N ratio %.3g; the "
                     "estimator assumes m and N grow together\n",
                     design.b, design.m1, design.n_steps, m / n);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.replications < 1)
        throw InvalidParameters("invalid-parameters: replications must be >= 1");
    if (config.b_values.empty() || config.m1_values.empty())
        throw InvalidParameters("invalid-parameters: empty experiment grid");

    // Cells m1-major then b, matching the emitted table layout.
    std::vector<Cell> cells;
    for (int m1 : config.m1_values) {
        for (double b : config.b_values) {
            ThinnedDesign design = build_design(b, m1, config.n_steps);
            warn_unbalanced(design);
            FieldEvaluator evaluator(config.coeffs, config.noise.trunc_k,
                                     config.noise.trunc_l, design.ys, design.ys);
            cells.push_back(Cell{b, m1, std::move(design), std::move(evaluator)});
        }
    }

    const OuTransition transition =
        make_transition(config.coeffs, config.noise, 1.0 / config.n_steps);

    int workers = config.workers;
    if (const char* env = std::getenv("SPDE2D_WORKERS"); env && *env)
        workers = std::atoi(env);
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, config.replications));

    const std::size_t n_cells = cells.size();
    const int reps = config.replications;
    std::vector<double> alphas(static_cast<std::size_t>(reps) * n_cells, 0.0);
    std::vector<char> done(reps, 0);
    std::vector<double> cell_seconds(n_cells, 0.0);
    std::mutex seconds_mutex;
    std::atomic<int> next_rep{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string error_message;

    const auto worker_body = [&]() {
        std::vector<double> scratch;
        std::vector<std::vector<double>> slices(n_cells);
        std::vector<double> local_seconds(n_cells, 0.0);
        for (std::size_t c = 0; c < n_cells; ++c)
            slices[c].resize((cells[c].design.m1 + 1) * static_cast<std::size_t>(cells[c].design.m2 + 1));

        while (true) {
            const int rep = next_rep.fetch_add(1);
            if (rep >= reps || failed.load()) break;
            try {
                // One shared set of coefficient paths per replication; every
                // cell reads the same modes at its own coordinates.
                ModeState state(config.noise.trunc_k, config.noise.trunc_l, config.seed,
                                static_cast<std::uint64_t>(rep));
                std::vector<StreamingAlphaAccumulator> accs;
                accs.reserve(n_cells);
                for (const Cell& cell : cells) accs.emplace_back(cell.design);

                for (int i = 0; i <= config.n_steps; ++i) {
                    if (i > 0) evolve(state, transition);
                    for (std::size_t c = 0; c < n_cells; ++c) {
                        const auto start = std::chrono::steady_clock::now();
                        cells[c].evaluator.eval(state, slices[c], scratch);
                        accs[c].push_slice(i, slices[c]);
                        local_seconds[c] +=
                            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                                .count();
                    }
                }
                for (std::size_t c = 0; c < n_cells; ++c)
                    alphas[static_cast<std::size_t>(rep) * n_cells + c] =
                        accs[c].finalize().alpha_hat;
                done[rep] = 1;
            } catch (const std::exception& e) {
                bool expected = false;
                if (failed.compare_exchange_strong(expected, true)) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    error_message = e.what();
                }
                break;
            }
        }
        const std::lock_guard<std::mutex> lock(seconds_mutex);
        for (std::size_t c = 0; c < n_cells; ++c) cell_seconds[c] += local_seconds[c];
    };

    if (workers == 1) {
        worker_body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_body);
        for (auto& th : pool) th.join();
    }

    // Aggregate in replication order so the result is worker-count invariant.
    ExperimentResult result;
    result.config = config;
    result.seed = config.seed;
    result.replications = reps;
    for (std::size_t c = 0; c < n_cells; ++c) {
        KahanSum mean_sum;
        int count = 0;
        for (int rep = 0; rep < reps; ++rep) {
            if (!done[rep]) continue;
            mean_sum.add(alphas[static_cast<std::size_t>(rep) * n_cells + c]);
            ++count;
        }
        CellResult cell{cells[c].b, cells[c].m1, 0.0, 0.0, count, cell_seconds[c]};
        if (count > 0) {
            cell.mean_alpha_hat = mean_sum.value() / count;
            KahanSum var_sum;
            for (int rep = 0; rep < reps; ++rep) {
                if (!done[rep]) continue;
                const double d =
                    alphas[static_cast<std::size_t>(rep) * n_cells + c] - cell.mean_alpha_hat;
                var_sum.add(d * d);
            }
            cell.sd_alpha_hat = count > 1 ? std::sqrt(var_sum.value() / (count - 1)) : 0.0;
        }
        result.cells.push_back(cell);
    }

    if (failed.load()) {
        result.complete = false;
        throw ExperimentError("replication failed: " + error_message, std::move(result));
    }
    return result;
}

void emit_table(const ExperimentResult& result, std::ostream& out) {
    out << "b,m1,mean_alpha_hat,sd_alpha_hat,replications,seed\n";
    for (const CellResult& cell : result.cells)
        out << format_double(cell.b) << ',' << cell.m1 << ','
            << format_double(cell.mean_alpha_hat) << ',' << format_double(cell.sd_alpha_hat)
            << ',' << cell.replications << ',' << result.seed << '\n';
}

void emit_table(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("io-error: cannot open " + path + " for writing");
    emit_table(result, out);
    if (!out) throw IoError("io-error: write failed for " + path);
}

}  // namespace spde2d
