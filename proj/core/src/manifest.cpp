#include "relnas/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace relnas {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

template <typename T>
void read_field(const nlohmann::json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

nlohmann::json to_json(const ExperimentManifest& m) {
    nlohmann::json doc;
    doc["seed"] = m.seed;
    doc["out_dir"] = m.out_dir;
    doc["generate"] = {{"n", m.generate.n},
                       {"degree_lo", m.generate.degree_lo},
                       {"degree_hi", m.generate.degree_hi},
                       {"degree_steps", m.generate.degree_steps},
                       {"p_steps", m.generate.p_steps},
                       {"seeds_per_cell", m.generate.seeds_per_cell},
                       {"augment_rounds", m.generate.augment_rounds},
                       {"augment_rewires", m.generate.augment_rewires}};
    doc["split"] = {{"test_fraction", m.split.test_fraction}};
    doc["sfs"] = {{"subset_size", m.sfs.subset_size}};
    doc["search"] = {{"epsilon", m.search.epsilon},
                     {"max_steps", m.search.max_steps},
                     {"max_proposals", m.search.max_proposals},
                     {"mode", m.search.mode},
                     {"seeds", m.search.seeds},
                     {"bucket", m.search.bucket}};
    doc["trainer"] = {{"n_layers", m.trainer.n_layers},
                      {"baseline_width", m.trainer.baseline_width},
                      {"input_dim", m.trainer.input_dim},
                      {"output_dim", m.trainer.output_dim},
                      {"epochs", m.trainer.epochs},
                      {"batch_size", m.trainer.batch_size},
                      {"learning_rate", m.trainer.learning_rate},
                      {"weight_decay", m.trainer.weight_decay},
                      {"momentum", m.trainer.momentum},
                      {"dataset", m.trainer.dataset},
                      {"samples", m.trainer.samples},
                      {"separation", m.trainer.separation},
                      {"spread", m.trainer.spread}};
    return doc;
}

}  // namespace

ExperimentManifest ExperimentManifest::from_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("manifest: not valid JSON: ") + e.what());
    }

    ExperimentManifest m;
    read_field(doc, "seed", m.seed);
    read_field(doc, "out_dir", m.out_dir);
    if (doc.contains("generate")) {
        const auto& g = doc.at("generate");
        read_field(g, "n", m.generate.n);
        read_field(g, "degree_lo", m.generate.degree_lo);
        read_field(g, "degree_hi", m.generate.degree_hi);
        read_field(g, "degree_steps", m.generate.degree_steps);
        read_field(g, "p_steps", m.generate.p_steps);
        read_field(g, "seeds_per_cell", m.generate.seeds_per_cell);
        read_field(g, "augment_rounds", m.generate.augment_rounds);
        read_field(g, "augment_rewires", m.generate.augment_rewires);
    }
    if (doc.contains("split")) {
        read_field(doc.at("split"), "test_fraction", m.split.test_fraction);
    }
    if (doc.contains("sfs")) {
        read_field(doc.at("sfs"), "subset_size", m.sfs.subset_size);
    }
    if (doc.contains("search")) {
        const auto& s = doc.at("search");
        read_field(s, "epsilon", m.search.epsilon);
        read_field(s, "max_steps", m.search.max_steps);
        read_field(s, "max_proposals", m.search.max_proposals);
        read_field(s, "mode", m.search.mode);
        read_field(s, "seeds", m.search.seeds);
        read_field(s, "bucket", m.search.bucket);
    }
    if (doc.contains("trainer")) {
        const auto& t = doc.at("trainer");
        read_field(t, "n_layers", m.trainer.n_layers);
        read_field(t, "baseline_width", m.trainer.baseline_width);
        read_field(t, "input_dim", m.trainer.input_dim);
        read_field(t, "output_dim", m.trainer.output_dim);
        read_field(t, "epochs", m.trainer.epochs);
        read_field(t, "batch_size", m.trainer.batch_size);
        read_field(t, "learning_rate", m.trainer.learning_rate);
        read_field(t, "weight_decay", m.trainer.weight_decay);
        read_field(t, "momentum", m.trainer.momentum);
        read_field(t, "dataset", m.trainer.dataset);
        read_field(t, "samples", m.trainer.samples);
        read_field(t, "separation", m.trainer.separation);
        read_field(t, "spread", m.trainer.spread);
    }
    return m;
}

ExperimentManifest ExperimentManifest::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("manifest: cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

std::uint64_t ExperimentManifest::hash() const { return fnv1a(to_json(*this).dump()); }

std::string ExperimentManifest::hash_hex() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

void ExperimentManifest::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("manifest: " + field + " " + why);
    };
    if (generate.n < 2) fail("generate.n", "must be >= 2");
    if (generate.degree_lo < 2.0) fail("generate.degree_lo", "must be >= 2");
    if (generate.degree_hi > generate.n - 1) {
        fail("generate.degree_hi", "must be <= n-1 = " + std::to_string(generate.n - 1));
    }
    if (generate.degree_lo >= generate.degree_hi) {
        fail("generate.degree_lo", "must be < generate.degree_hi");
    }
    if (generate.degree_steps < 1) fail("generate.degree_steps", "must be >= 1");
    if (generate.p_steps < 1) fail("generate.p_steps", "must be >= 1");
    if (generate.seeds_per_cell < 1) fail("generate.seeds_per_cell", "must be >= 1");
    if (generate.augment_rounds < 0) fail("generate.augment_rounds", "must be >= 0");
    if (split.test_fraction <= 0.0 || split.test_fraction >= 1.0) {
        fail("split.test_fraction", "must lie in (0, 1)");
    }
    if (sfs.subset_size < 1) fail("sfs.subset_size", "must be >= 1");
    if (search.epsilon <= 0.0 || search.epsilon >= 1.0) {
        fail("search.epsilon", "must lie in (0, 1)");
    }
    if (search.max_steps < 1) fail("search.max_steps", "must be >= 1");
    if (search.mode != "MINIMIZE" && search.mode != "MAXIMIZE") {
        fail("search.mode", "must be MINIMIZE or MAXIMIZE");
    }
    if (search.seeds < 1) fail("search.seeds", "must be >= 1");
    if (search.bucket < 1) fail("search.bucket", "must be >= 1");
    if (trainer.n_layers < 1) fail("trainer.n_layers", "must be >= 1");
    if (trainer.baseline_width < 1) fail("trainer.baseline_width", "must be >= 1");
    if (trainer.dataset != "blobs" && trainer.dataset != "rings") {
        fail("trainer.dataset", "must be 'blobs' or 'rings'");
    }
}

}  // namespace relnas
