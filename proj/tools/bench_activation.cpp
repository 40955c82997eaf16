// Gate-count and wall-time benchmark for the activation circuits.
#include <chrono>
#include <iostream>

#include "cli_common.hpp"
#include "mktorus/activation.hpp"

using namespace mktorus;

namespace {

template <class B>
std::pair<GateCounter, double> bench(B& be, const std::string& fn, uint32_t width,
                                     int samples) {
    CounterScope scope(be);
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < samples; ++i) {
        int64_t x = (i % 9) - 4;
        if (fn == "g") {
            (void)act_g(be, mk_enc_word(be, x, width));
        } else {
            int order = fn == "taylor7" ? 7 : 3;
            (void)act_taylor(be, mk_enc_word(be, x * 16, width), order, 16);
        }
    }
    auto t1 = std::chrono::steady_clock::now();
    auto d = scope.delta();
    GateCounter per{d.bootstrapped_gates / uint64_t(samples), d.free_ops / uint64_t(samples)};
    return {per, std::chrono::duration<double>(t1 - t0).count() / samples};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"count bootstrapped gates per activation evaluation"};
    cli::RunConfig cfg;
    cfg.command = "bench-activation";
    uint32_t width = 16;
    std::string function = "g";
    int samples = 3;
    std::string config;
    app.add_option("--width", width, "word width l");
    app.add_option("--function", function, "g|taylor3|taylor7")
        ->check(CLI::IsMember({"g", "taylor3", "taylor7"}));
    app.add_option("--backend", cfg.backend, "clear|noisesim")
        ->check(CLI::IsMember({"clear", "noisesim"}));
    app.add_option("--samples", samples, "evaluations to average over");
    app.add_option("--report", cfg.report, "append a jsonl record here");
    app.add_option("--seed", cfg.seed, "noise-sim session seed");
    app.add_option("--dim", cfg.n, "noise-sim TLWE dimension");
    app.add_option("--config", config, "json config file");
    CLI11_PARSE(app, argc, argv);

    try {
        if (!config.empty()) cli::load_config_file(config, cfg);
        cli::apply_seed_env(cfg);
        GateCounter per;
        double wall = 0;
        if (cfg.backend == "clear") {
            ClearBackend be;
            std::tie(per, wall) = bench(be, function, width, samples);
        } else {
            NoiseSimBackend be(setup(cfg.n, 2, {cfg.alpha, cfg.seed}), cfg.seed);
            std::tie(per, wall) = bench(be, function, width, samples);
        }
        std::cout << "function=" << function << " width=" << width
                  << " backend=" << cfg.backend << " bootstrapped=" << per.bootstrapped_gates
                  << " free=" << per.free_ops << " wall_s=" << wall << "\n";
        if (!cfg.report.empty()) {
            auto rec = report_record("t4");
            rec["act"] = function;
            rec["op"] = function;
            rec["width"] = width;
            rec["backend"] = cfg.backend;
            rec["bootstrapped_gates"] = per.bootstrapped_gates;
            rec["free_ops"] = per.free_ops;
            rec["wall_s"] = wall;
            append_report(cfg.report, rec);
        }
    } catch (const std::exception& e) {
        std::cerr << "bench-activation: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
