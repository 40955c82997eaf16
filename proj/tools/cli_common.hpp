#pragma once

#include <cstdlib>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mktorus/mk_tlwe.hpp"
#include "mktorus/report.hpp"
#include "mktorus/train.hpp"

namespace mktorus::cli {

// Every run is driven by one serializable config so it can be replayed
// byte-for-byte from the file alone. Flags override --config values;
// MKTORUS_SEED overrides the seed last.
struct RunConfig {
    std::string command;
    uint32_t n = 560;
    uint32_t k = 2;
    double alpha = 3.05e-5;
    uint64_t seed = 1;
    ScaleConfig scale;
    std::string act = "g";
    std::string dataset;
    std::string backend = "clear";
    std::string out;
    std::string report;
};

inline void to_json(json& j, const RunConfig& c) {
    j = json{{"command", c.command},
             {"n", c.n},
             {"k", c.k},
             {"alpha", c.alpha},
             {"seed", c.seed},
             {"q", c.scale.q},
             {"word_bits", c.scale.word_bits},
             {"alpha_int", c.scale.alpha_int},
             {"alpha1_int", c.scale.alpha1_int},
             {"alpha2_int", c.scale.alpha2_int},
             {"beta1_int", c.scale.beta1_int},
             {"beta2_int", c.scale.beta2_int},
             {"threads", c.scale.threads},
             {"act", c.act},
             {"dataset", c.dataset},
             {"backend", c.backend},
             {"out", c.out},
             {"report", c.report}};
}

inline void from_json(const json& j, RunConfig& c) {
    c.command = j.value("command", c.command);
    c.n = j.value("n", c.n);
    c.k = j.value("k", c.k);
    c.alpha = j.value("alpha", c.alpha);
    c.seed = j.value("seed", c.seed);
    c.scale.q = j.value("q", c.scale.q);
    c.scale.word_bits = j.value("word_bits", c.scale.word_bits);
    c.scale.alpha_int = j.value("alpha_int", c.scale.alpha_int);
    c.scale.alpha1_int = j.value("alpha1_int", c.scale.alpha1_int);
    c.scale.alpha2_int = j.value("alpha2_int", c.scale.alpha2_int);
    c.scale.beta1_int = j.value("beta1_int", c.scale.beta1_int);
    c.scale.beta2_int = j.value("beta2_int", c.scale.beta2_int);
    c.scale.threads = j.value("threads", c.scale.threads);
    c.act = j.value("act", c.act);
    c.dataset = j.value("dataset", c.dataset);
    c.backend = j.value("backend", c.backend);
    c.out = j.value("out", c.out);
    c.report = j.value("report", c.report);
}

inline void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    json j;
    in >> j;
    from_json(j, cfg);
}

inline void apply_seed_env(RunConfig& cfg) {
    if (const char* env = std::getenv("MKTORUS_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
}

inline ActSpec parse_act(const std::string& name) {
    if (name == "g") return ActSpec::g();
    if (name == "taylor3") return ActSpec::taylor(3);
    if (name == "taylor7") return ActSpec::taylor(7);
    throw CLI::ValidationError("act", "unknown activation " + name);
}

}  // namespace mktorus::cli
