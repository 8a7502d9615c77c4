#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace relnas {

/// One declarative config file anchors a whole experiment; every artifact
/// directory records the manifest hash that produced it.
struct ExperimentManifest {
    std::uint64_t seed = 0;
    std::string out_dir = "out";

    struct GenerateCfg {
        int n = 64;
        double degree_lo = 2.0;
        double degree_hi = 63.0;
        int degree_steps = 8;
        int p_steps = 5;
        int seeds_per_cell = 2;
        int augment_rounds = 0;
        int augment_rewires = 0;
    } generate;

    struct SplitCfg {
        double test_fraction = 0.1;
    } split;

    struct SfsCfg {
        int subset_size = 10;
    } sfs;

    struct SearchCfg {
        double epsilon = 0.01;
        int max_steps = 100;
        int max_proposals = 200;
        std::string mode = "MINIMIZE";
        int seeds = 1;
        int bucket = 10;
    } search;

    struct TrainerCfg {
        int n_layers = 5;
        int baseline_width = 512;
        int input_dim = 16;
        int output_dim = 4;
        int epochs = 30;
        int batch_size = 128;
        double learning_rate = 0.1;
        double weight_decay = 5e-4;
        double momentum = 0.9;
        std::string dataset = "blobs";  // "blobs" or "rings"
        int samples = 2000;
        double separation = 3.0;
        double spread = 1.0;
    } trainer;

    static ExperimentManifest from_file(const std::filesystem::path& path);
    static ExperimentManifest from_string(const std::string& text);

    /// FNV-1a of the canonicalized JSON; the provenance tag for artifacts.
    std::uint64_t hash() const;
    std::string hash_hex() const;

    void validate() const;  // throws std::invalid_argument naming the field
};

std::uint64_t fnv1a(const std::string& text);

}  // namespace relnas
