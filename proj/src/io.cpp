#include "realign/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace realign::io {

using nlohmann::json;

Matrix read_matrix(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(file.string() + ":1: empty file");
    std::istringstream head(line);
    long rows = 0, cols = 0;
    if (!(head >> rows >> cols) || rows < 1 || cols < 1)
        throw ParseError(file.string() + ":1: expected 'rows cols'");
    Matrix m(rows, cols);
    for (long r = 0; r < rows; ++r) {
        if (!std::getline(in, line))
            throw ParseError(file.string() + ":" + std::to_string(r + 2) + ": missing row");
        std::istringstream ls(line);
        for (long c = 0; c < cols; ++c) {
            double v;
            if (!(ls >> v))
                throw ParseError(file.string() + ":" + std::to_string(r + 2) +
                                 ": expected " + std::to_string(cols) + " values");
            m(r, c) = v;
        }
    }
    return m;
}

void write_matrix(const std::filesystem::path& file, const Matrix& m) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << m.rows() << ' ' << m.cols() << '\n';
    char buf[64];
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out << buf << (c + 1 < m.cols() ? ' ' : '\n');
        }
    }
}

void write_pgm(const std::filesystem::path& file, const Matrix& m) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    double mx = m.size() > 0 ? m.maxCoeff() : 0.0;
    out << "P2\n" << m.cols() << ' ' << m.rows() << "\n255\n";
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            int g = mx > 0.0 ? int(std::lround(255.0 * m(r, c) / mx)) : 0;
            out << g << (c + 1 < m.cols() ? ' ' : '\n');
        }
    }
}

std::string file_digest(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot open " + file.string());
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= std::uint64_t(static_cast<unsigned char>(c));
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

namespace {

template <class T>
void take(const json& j, const char* key, T& out, std::vector<std::string>& seen) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
        seen.push_back(key);
    }
}

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    std::vector<std::string> seen;
    take(j, "rho", c.solver.rho, seen);
    take(j, "lambda1", c.solver.lambda1, seen);
    take(j, "lambda2", c.solver.lambda2, seen);
    if (j.contains("tau")) {
        if (j.at("tau").is_string()) {
            if (j.at("tau").get<std::string>() != "balanced")
                throw ParseError("config: tau must be a number or \"balanced\"");
            c.solver.tau = kBalancedTau;
        } else {
            c.solver.tau = j.at("tau").get<double>();
        }
        seen.push_back("tau");
    }
    take(j, "epsilon", c.solver.epsilon, seen);
    take(j, "b", c.solver.b, seen);
    take(j, "zeta", c.solver.zeta, seen);
    take(j, "inner_max", c.solver.inner_max, seen);
    take(j, "inner_tol", c.solver.inner_tol, seen);
    take(j, "outer_max", c.solver.outer_max, seen);
    take(j, "outer_tol", c.solver.outer_tol, seen);
    if (j.contains("option")) {
        std::string o = j.at("option").get<std::string>();
        if (o == "A")
            c.solver.option = StructureOption::A_psd_kernel;
        else if (o == "B")
            c.solver.option = StructureOption::B_raw_distance;
        else
            throw ParseError("config: option must be \"A\" or \"B\"");
        seen.push_back("option");
    }
    if (j.contains("kernel")) {
        std::string ker = j.at("kernel").get<std::string>();
        if (ker == "laplace")
            c.solver.kernel = KernelShape::Laplace;
        else if (ker == "gaussian")
            c.solver.kernel = KernelShape::Gaussian;
        else
            throw ParseError("config: kernel must be \"laplace\" or \"gaussian\"");
        seen.push_back("kernel");
    }
    take(j, "phi", c.solver.phi, seen);
    if (j.contains("phi_mode")) {
        std::string pm = j.at("phi_mode").get<std::string>();
        if (pm == "fixed")
            c.solver.phi_mode = PhiMode::Fixed;
        else if (pm == "anneal")
            c.solver.phi_mode = PhiMode::AnnealOuter;
        else
            throw ParseError("config: phi_mode must be \"fixed\" or \"anneal\"");
        seen.push_back("phi_mode");
    }
    if (j.contains("center_policy")) {
        std::string cp = j.at("center_policy").get<std::string>();
        if (cp == "fixed_mid")
            c.solver.center_policy = CenterPolicy::FixedMid;
        else if (cp == "plan_argmax")
            c.solver.center_policy = CenterPolicy::PlanArgmax;
        else
            throw ParseError("config: center_policy must be \"fixed_mid\" or \"plan_argmax\"");
        seen.push_back("center_policy");
    }
    if (j.contains("metric")) {
        std::string mt = j.at("metric").get<std::string>();
        if (mt == "euclidean")
            c.solver.metric = Metric::Euclidean;
        else if (mt == "cosine")
            c.solver.metric = Metric::Cosine;
        else
            throw ParseError("config: metric must be \"euclidean\" or \"cosine\"");
        seen.push_back("metric");
    }
    take(j, "virtual_budget", c.solver.virtual_budget, seen);
    take(j, "virtual_factor", c.solver.virtual_policy.factor, seen);
    take(j, "virtual_floor", c.solver.virtual_policy.floor, seen);
    take(j, "normalize_cost", c.solver.normalize_cost, seen);
    take(j, "use_priors", c.solver.use_priors, seen);
    take(j, "use_virtual", c.solver.use_virtual, seen);

    take(j, "delta", c.loss.delta, seen);
    take(j, "lambda3", c.loss.lambda3, seen);
    take(j, "c1", c.loss.c1, seen);
    take(j, "c2", c.loss.c2, seen);
    take(j, "c3", c.loss.c3, seen);

    if (j.contains("k")) {  // shared key; absent, synth keeps 4 and segmentation 7
        take(j, "k", c.synth.k, seen);
        c.k = c.synth.k;
    }
    take(j, "dim", c.synth.dim, seen);
    take(j, "frames_per_step_min", c.synth.frames_per_step_min, seen);
    take(j, "frames_per_step_max", c.synth.frames_per_step_max, seen);
    take(j, "step_separation", c.synth.step_separation, seen);
    take(j, "noise_sigma", c.synth.noise_sigma, seen);
    take(j, "background_rate", c.synth.background_rate, seen);
    take(j, "repeat_rate", c.synth.repeat_rate, seen);
    take(j, "permute", c.synth.permute, seen);
    take(j, "videos", c.synth.videos, seen);
    take(j, "seed", c.seed, seen);
    c.synth.seed = c.seed;
    take(j, "smoothness_weight", c.smoothness_weight, seen);

    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(seen.begin(), seen.end(), it.key()) == seen.end())
            throw ParseError("config: unknown key '" + it.key() + "'");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& file) {
    if (file.empty()) return RunConfig{};
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(file.string() + ": " + e.what());
    }
    return parse_config(j);
}

namespace {

json num_or_auto(double v) {
    if (std::isnan(v)) return "auto";
    if (std::isinf(v)) return "balanced";
    return v;
}

}  // namespace

json config_to_json(const RunConfig& c) {
    json j;
    j["rho"] = c.solver.rho;
    j["lambda1"] = num_or_auto(c.solver.lambda1);
    j["lambda2"] = num_or_auto(c.solver.lambda2);
    j["tau"] = num_or_auto(c.solver.tau);
    j["epsilon"] = c.solver.epsilon;
    j["b"] = c.solver.b;
    j["zeta"] = num_or_auto(c.solver.zeta);
    j["inner_max"] = c.solver.inner_max;
    j["inner_tol"] = c.solver.inner_tol;
    j["outer_max"] = c.solver.outer_max;
    j["outer_tol"] = c.solver.outer_tol;
    j["option"] = c.solver.option == StructureOption::A_psd_kernel ? "A" : "B";
    j["kernel"] = c.solver.kernel == KernelShape::Laplace ? "laplace" : "gaussian";
    j["phi"] = c.solver.phi;
    j["phi_mode"] = c.solver.phi_mode == PhiMode::Fixed ? "fixed" : "anneal";
    j["center_policy"] =
        c.solver.center_policy == CenterPolicy::FixedMid ? "fixed_mid" : "plan_argmax";
    j["metric"] = c.solver.metric == Metric::Euclidean ? "euclidean" : "cosine";
    j["virtual_budget"] = c.solver.virtual_budget;
    j["virtual_factor"] = c.solver.virtual_policy.factor;
    j["virtual_floor"] = c.solver.virtual_policy.floor;
    j["normalize_cost"] = c.solver.normalize_cost;
    j["use_priors"] = c.solver.use_priors;
    j["use_virtual"] = c.solver.use_virtual;
    j["delta"] = c.loss.delta;
    j["lambda3"] = c.loss.lambda3;
    j["c1"] = c.loss.c1;
    j["c2"] = c.loss.c2;
    j["c3"] = c.loss.c3;
    j["k"] = c.synth.k;
    j["dim"] = c.synth.dim;
    j["frames_per_step_min"] = c.synth.frames_per_step_min;
    j["frames_per_step_max"] = c.synth.frames_per_step_max;
    j["step_separation"] = c.synth.step_separation;
    j["noise_sigma"] = c.synth.noise_sigma;
    j["background_rate"] = c.synth.background_rate;
    j["repeat_rate"] = c.synth.repeat_rate;
    j["permute"] = c.synth.permute;
    j["videos"] = c.synth.videos;
    j["seed"] = c.seed;
    j["smoothness_weight"] = c.smoothness_weight;
    return j;
}

void write_ground_truth(const std::filesystem::path& file, const GroundTruth& gt, int k) {
    json j;
    j["labels"] = gt.labels;
    j["order"] = gt.order;
    j["k"] = k;
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << j.dump(1) << '\n';
}

GroundTruth read_ground_truth(const std::filesystem::path& file, int* k_out) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(file.string() + ": " + e.what());
    }
    GroundTruth gt;
    gt.labels = j.at("labels").get<std::vector<int>>();
    if (j.contains("order")) gt.order = j.at("order").get<std::vector<int>>();
    if (k_out) *k_out = j.value("k", 0);
    return gt;
}

json make_manifest(const RunConfig& cfg, const std::vector<std::filesystem::path>& inputs,
                   std::uint64_t seed, double elapsed_seconds) {
    json j;
    j["tool"] = "realign";
    j["version"] = "0.1.0";
    j["seed"] = seed;
    j["elapsed_seconds"] = elapsed_seconds;
    j["config"] = config_to_json(cfg);
    json files = json::object();
    for (const auto& p : inputs) files[p.filename().string()] = file_digest(p);
    j["input_digests"] = files;
    return j;
}

}  // namespace realign::io
