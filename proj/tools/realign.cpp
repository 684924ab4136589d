#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "realign/bench.hpp"
#include "realign/io.hpp"
#include "realign/pipeline.hpp"
#include "realign/solver.hpp"
#include "realign/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace realign;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBenchFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitShape = 3;
constexpr int kExitTooFewSequences = 4;

using Clock = std::chrono::steady_clock;

int thread_budget(size_t jobs) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("REALIGN_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, unsigned(cap));
    }
    return int(std::min<size_t>(hw, std::max<size_t>(1, jobs)));
}

struct SolveFlags {
    std::string config_file, out_dir = "out";
    std::uint64_t seed = 0;
    double rho = -1.0, tau = -1.0;
    bool no_priors = false, no_virtual = false, normalize_cost = false;
    std::string option;
};

void apply_flags(io::RunConfig& cfg, const SolveFlags& f) {
    if (f.rho >= 0.0) cfg.solver.rho = f.rho;
    if (f.tau > 0.0) cfg.solver.tau = f.tau;
    if (f.no_priors) cfg.solver.use_priors = false;
    if (f.no_virtual) cfg.solver.use_virtual = false;
    if (f.normalize_cost) cfg.solver.normalize_cost = true;
    if (f.option == "A") cfg.solver.option = StructureOption::A_psd_kernel;
    if (f.option == "B") cfg.solver.option = StructureOption::B_raw_distance;
    if (f.seed != 0) cfg.seed = f.seed;
}

json breakdown_json(const ObjectiveBreakdown& b) {
    return json{{"fused_linear", b.fused_linear},
                {"gw_quadratic", b.gw_quadratic},
                {"idm_reward", b.idm_reward},
                {"prior_kl", b.prior_kl},
                {"marginal_kl_row", b.marginal_kl_row},
                {"marginal_kl_col", b.marginal_kl_col},
                {"total", b.total}};
}

void write_json(const fs::path& file, const json& j) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << j.dump(1) << '\n';
}

int cmd_solve(const std::string& x_file, const std::string& y_file, const SolveFlags& flags) {
    auto t0 = Clock::now();
    io::RunConfig cfg = io::load_config(flags.config_file);
    apply_flags(cfg, flags);
    EmbeddingSequence x{io::read_matrix(x_file)}, y{io::read_matrix(y_file)};
    if (x.dim() != y.dim()) throw std::invalid_argument("embedding dimension mismatch");

    SolverConfig sc = cfg.solver.resolve(x.length(), y.length());
    Solution sol = solve_rfpgwot(x, y, sc);

    fs::create_directories(flags.out_dir);
    fs::path out(flags.out_dir);
    io::write_matrix(out / "plan.txt", sol.plan.data);
    io::write_pgm(out / "plan.pgm", sol.plan.real_block());

    json trace = json::array();
    for (const auto& b : sol.objective_trace) trace.push_back(breakdown_json(b));
    json solve_report{{"objective_trace", trace},
                      {"initial_objective", sol.initial_objective},
                      {"converged", sol.converged},
                      {"outer_steps_used", sol.outer_steps_used},
                      {"warning", sol.converged ? "" : "outer loop hit its budget"}};
    write_json(out / "objective_trace.json", solve_report);

    json masks;
    if (sc.use_virtual) {
        auto [rm, cm] = assign_virtual(sol.plan, sc.zeta, sol.alpha, sol.beta);
        masks = json{{"row_background", rm}, {"col_background", cm}};
    } else {
        masks = json{{"row_background", json::array()}, {"col_background", json::array()}};
    }
    write_json(out / "masks.json", masks);

    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    json manifest = io::make_manifest(cfg, {x_file, y_file}, cfg.seed, elapsed);
    manifest["resolved"] = {{"lambda1", sc.lambda1}, {"lambda2", sc.lambda2},
                            {"tau", std::isinf(sc.tau) ? json("balanced") : json(sc.tau)},
                            {"zeta", sc.zeta},       {"kappa", sc.kappa()}};
    write_json(out / "manifest.json", manifest);
    return kExitOk;
}

int cmd_pipeline(const std::string& task_dir, const SolveFlags& flags) {
    auto t0 = Clock::now();
    io::RunConfig cfg = io::load_config(flags.config_file);
    apply_flags(cfg, flags);

    std::vector<fs::path> emb_files;
    for (const auto& e : fs::directory_iterator(task_dir))
        if (e.path().extension() == ".txt") emb_files.push_back(e.path());
    std::sort(emb_files.begin(), emb_files.end());
    if (emb_files.size() < 2) {
        std::cerr << "pipeline: need at least 2 embedding files in " << task_dir << "\n";
        return kExitTooFewSequences;
    }

    std::vector<EmbeddingSequence> videos;
    for (const auto& f : emb_files) videos.push_back(EmbeddingSequence{io::read_matrix(f)});

    std::vector<std::vector<int>> gt;
    int k_gt = 0;
    bool have_gt = true;
    for (const auto& f : emb_files) {
        fs::path g = f;
        g.replace_extension(".gt.json");
        if (!fs::exists(g)) {
            have_gt = false;
            break;
        }
        int k = 0;
        gt.push_back(io::read_ground_truth(g, &k).labels);
        k_gt = std::max(k_gt, k);
    }

    PipelineConfig pc;
    pc.solver = cfg.solver;
    pc.k = cfg.k;
    pc.smoothness_weight = cfg.smoothness_weight;
    pc.seed = unsigned(cfg.seed);
    pc.threads = thread_budget(emb_files.size() * (emb_files.size() - 1) / 2);
    PipelineResult res = run_pipeline(videos, pc, have_gt ? &gt : nullptr, k_gt);

    fs::create_directories(flags.out_dir);
    fs::path out(flags.out_dir);
    json labels = json::array();
    for (size_t v = 0; v < videos.size(); ++v)
        labels.push_back(json{{"file", emb_files[v].filename().string()},
                              {"labels", res.labelings[v].labels},
                              {"background", res.labelings[v].background},
                              {"order", res.orders[v].indices}});
    write_json(out / "labels.json", labels);
    write_json(out / "canonical_order.json", json{{"order", res.canonical.indices}});

    json pair_summary = json::array();
    for (const auto& p : res.pairs)
        pair_summary.push_back(json{{"a", p.a},
                                    {"b", p.b},
                                    {"converged", p.converged},
                                    {"objective", p.objective}});
    write_json(out / "pairs.json", pair_summary);

    if (res.metrics) {
        json per_video = json::array();
        for (const auto& m : res.per_video_metrics)
            per_video.push_back(json{{"precision", m.precision},
                                     {"recall", m.recall},
                                     {"f1", m.f1},
                                     {"iou", m.iou}});
        write_json(out / "metrics.json", json{{"precision", res.metrics->precision},
                                              {"recall", res.metrics->recall},
                                              {"f1", res.metrics->f1},
                                              {"iou", res.metrics->iou},
                                              {"per_video", per_video}});
    }

    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    std::vector<fs::path> inputs(emb_files.begin(), emb_files.end());
    write_json(out / "manifest.json", io::make_manifest(cfg, inputs, cfg.seed, elapsed));
    return kExitOk;
}

int cmd_synth(const SolveFlags& flags) {
    auto t0 = Clock::now();
    io::RunConfig cfg = io::load_config(flags.config_file);
    if (flags.seed != 0) cfg.seed = flags.seed;
    cfg.synth.seed = cfg.seed;
    SynthTask task = generate_task(cfg.synth);

    fs::create_directories(flags.out_dir);
    fs::path out(flags.out_dir);
    char name[64];
    for (size_t v = 0; v < task.videos.size(); ++v) {
        std::snprintf(name, sizeof name, "video_%02zu.txt", v);
        io::write_matrix(out / name, task.videos[v].data);
        std::snprintf(name, sizeof name, "video_%02zu.gt.json", v);
        io::write_ground_truth(out / name, task.truths[v], cfg.synth.k);
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    write_json(out / "manifest.json", io::make_manifest(cfg, {}, cfg.seed, elapsed));
    return kExitOk;
}

int cmd_bench(const std::string& suite_file, const std::string& out_dir) {
    std::vector<std::string> names;
    if (!suite_file.empty()) {
        std::ifstream in(suite_file);
        if (!in) throw io::ParseError("cannot open " + suite_file);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw io::ParseError(std::string("suite file: ") + e.what());
        }
        names = j.at("suites").get<std::vector<std::string>>();
    }
    std::vector<bench::SuiteResult> results = bench::run_suites(names);
    bool all_pass = true;
    json out = json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::printf("%-28s criterion %2d  %s  %8.1f ms  %s [%s]\n", r.name.c_str(),
                    r.criterion, r.pass ? "PASS" : "FAIL", r.elapsed_ms, r.detail.c_str(),
                    r.tolerance.c_str());
        out.push_back(json{{"name", r.name},
                           {"criterion", r.criterion},
                           {"pass", r.pass},
                           {"detail", r.detail},
                           {"tolerance", r.tolerance},
                           {"elapsed_ms", r.elapsed_ms}});
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_json(fs::path(out_dir) / "bench.json", out);
    }
    return all_pass ? kExitOk : kExitBenchFail;
}

int cmd_eval(const std::string& pred_file, const std::string& gt_file,
             const std::string& out_dir) {
    int k_pred = 0, k_gt = 0;
    GroundTruth pred = io::read_ground_truth(pred_file, &k_pred);
    GroundTruth truth = io::read_ground_truth(gt_file, &k_gt);
    if (pred.labels.size() != truth.labels.size())
        throw std::invalid_argument("eval: frame count mismatch");
    SegmentLabeling lab;
    lab.labels = pred.labels;
    lab.background.assign(pred.labels.size(), false);
    for (size_t f = 0; f < pred.labels.size(); ++f)
        if (pred.labels[f] == kBackgroundLabel) {
            lab.background[f] = true;
            lab.labels[f] = 0;
        }
    if (k_pred < 1)
        for (int l : lab.labels) k_pred = std::max(k_pred, l + 1);
    if (k_gt < 1)
        for (int l : truth.labels) k_gt = std::max(k_gt, l + 1);
    MetricsReport m = framewise_metrics(lab, truth.labels, k_pred, k_gt);
    json j{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"iou", m.iou}};
    std::cout << j.dump(1) << '\n';
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_json(fs::path(out_dir) / "metrics.json", j);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partial Gromov-Wasserstein sequence alignment and procedure learning"};
    app.require_subcommand(1);

    SolveFlags flags;
    std::string x_file, y_file, task_dir, suite_file, pred_file, gt_file;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--config", flags.config_file, "flat JSON config");
        c->add_option("--out", flags.out_dir, "output directory");
        c->add_option("--seed", flags.seed, "RNG seed");
        c->add_option("--rho", flags.rho, "GW weight override");
        c->add_option("--tau", flags.tau, "marginal penalty override");
        c->add_flag("--no-priors", flags.no_priors, "disable Laplace/IDM priors");
        c->add_flag("--no-virtual", flags.no_virtual, "disable the virtual sink");
        c->add_flag("--normalize-cost", flags.normalize_cost,
                    "max-normalize appearance costs before solving");
        c->add_option("--option", flags.option, "structure option A or B")
            ->check(CLI::IsMember({"A", "B"}));
    };

    CLI::App* solve = app.add_subcommand("solve", "align two embedding sequences");
    solve->add_option("x", x_file, "first embedding matrix")->required();
    solve->add_option("y", y_file, "second embedding matrix")->required();
    add_common(solve);

    CLI::App* pipeline = app.add_subcommand("pipeline", "full procedure-learning pass");
    pipeline->add_option("task_dir", task_dir, "directory of embedding files")->required();
    add_common(pipeline);

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic task");
    add_common(synth);

    CLI::App* bench_cmd = app.add_subcommand("bench", "run acceptance property suites");
    bench_cmd->add_option("--suites", suite_file, "JSON file with {\"suites\": [names]}");
    bench_cmd->add_option("--out", flags.out_dir, "output directory");

    CLI::App* eval = app.add_subcommand("eval", "score predictions against ground truth");
    eval->add_option("pred", pred_file, "predicted labels JSON")->required();
    eval->add_option("gt", gt_file, "ground-truth labels JSON")->required();
    eval->add_option("--out", flags.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(x_file, y_file, flags);
        if (pipeline->parsed()) return cmd_pipeline(task_dir, flags);
        if (synth->parsed()) {
            try {
                return cmd_synth(flags);
            } catch (const std::invalid_argument& e) {
                std::cerr << "synth: " << e.what() << "\n";
                return kExitParse;  // infeasible configs are config errors
            }
        }
        if (bench_cmd->parsed()) return cmd_bench(suite_file, flags.out_dir);
        if (eval->parsed()) return cmd_eval(pred_file, gt_file, flags.out_dir);
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitShape;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitShape;
    }
    return kExitOk;
}
