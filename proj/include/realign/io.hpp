#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "realign/losses.hpp"
#include "realign/solver.hpp"
#include "realign/synth.hpp"
#include "realign/types.hpp"

namespace realign::io {

/// Thrown on malformed files; carries a line number when one is known.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Plain-text matrix format: first line "rows cols", then rows of
/// space-separated decimals written with 17 significant digits.
Matrix read_matrix(const std::filesystem::path& file);
void write_matrix(const std::filesystem::path& file, const Matrix& m);

/// Grayscale PGM (P2), max-normalized.
void write_pgm(const std::filesystem::path& file, const Matrix& m);

/// FNV-1a 64-bit digest of a file's bytes, hex-encoded.
std::string file_digest(const std::filesystem::path& file);

/// Flat key-value config covering solver, loss, synth and pipeline fields.
/// Unknown keys are an error.
struct RunConfig {
    SolverConfig solver;
    LossConfig loss;
    SynthConfig synth;
    int k = 7;
    double smoothness_weight = -1.0;
    std::uint64_t seed = 0;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& file);  // {} when file empty path
nlohmann::json config_to_json(const RunConfig& c);

/// Labels sidecar: {"labels": [...], "order": [...], "k": n}.
void write_ground_truth(const std::filesystem::path& file, const GroundTruth& gt, int k);
GroundTruth read_ground_truth(const std::filesystem::path& file, int* k_out = nullptr);

nlohmann::json make_manifest(const RunConfig& cfg,
                             const std::vector<std::filesystem::path>& inputs,
                             std::uint64_t seed, double elapsed_seconds);

}  // namespace realign::io
