// Logistic-regression training in three modes: clear floats, the scaled
// integer reference, and the encrypted circuit path. --check runs the
// encrypted mode against the integer reference and fails unless every
// iteration decodes identically.
#include <chrono>
#include <iostream>

#include "cli_common.hpp"
#include "mktorus/gate_backend.hpp"

using namespace mktorus;

int main(int argc, char** argv) {
    CLI::App app{"train logistic regression over the csv dataset"};
    cli::RunConfig cfg;
    cfg.command = "train-lr";
    std::string mode = "int", config;
    int iters = 14;
    double alpha_float = 0.1;
    bool check = false;
    app.add_option("--data", cfg.dataset, "csv with a trailing label column")->required();
    app.add_option("--mode", mode, "float|int|enc")
        ->check(CLI::IsMember({"float", "int", "enc"}));
    app.add_option("--act", cfg.act, "g|taylor3|taylor7|sigmoid");
    app.add_option("--q", cfg.scale.q, "expansion factor, power of two");
    app.add_option("--alpha-int", cfg.scale.alpha_int, "integer learning rate in [0,q]");
    app.add_option("--alpha-float", alpha_float, "float-mode learning rate");
    app.add_option("--iters", iters, "training iterations");
    app.add_option("--width", cfg.scale.word_bits, "stored word width");
    app.add_option("--backend", cfg.backend, "clear|noisesim (enc mode)")
        ->check(CLI::IsMember({"clear", "noisesim"}));
    app.add_option("--dim", cfg.n, "noise-sim TLWE dimension");
    app.add_option("--seed", cfg.seed, "seed for the noise-sim session");
    app.add_option("--threads", cfg.scale.threads, "parallel workers");
    app.add_option("--report", cfg.report, "append jsonl records here");
    app.add_flag("--check", check, "enc mode: require bit-identical match with int mode");
    app.add_option("--config", config, "json config file");
    CLI11_PARSE(app, argc, argv);

    try {
        if (!config.empty()) cli::load_config_file(config, cfg);
        cli::apply_seed_env(cfg);
        auto raw = load_csv(cfg.dataset);

        if (mode == "float") {
            const ActSpec* act = nullptr;
            ActSpec spec;
            if (cfg.act != "sigmoid") {
                spec = cli::parse_act(cfg.act);
                act = &spec;
            }
            auto model = train_lr_float(raw, act, alpha_float, iters);
            double acc = predict_lr_float(model, raw, act);
            std::cout << "float " << cfg.act << " train accuracy " << acc << "\n";
            if (!cfg.report.empty()) {
                auto rec = report_record("t2");
                rec["data_type"] = "float";
                rec["act"] = cfg.act;
                rec["accuracy"] = acc;
                append_report(cfg.report, rec);
            }
            return 0;
        }

        auto act = cli::parse_act(cfg.act);
        auto ds = preprocess(raw, PrepMode::rounding, cfg.scale.q, cfg.scale.word_bits);

        std::vector<std::vector<int64_t>> ref_snaps;
        IntEngine ref(true);
        auto t0 = std::chrono::steady_clock::now();
        auto ref_model = train_lr_engine(ref, ds, cfg.scale, act, iters,
                                         [&](int, const std::vector<int64_t>& s) {
                                             ref_snaps.push_back(s);
                                         });
        auto t1 = std::chrono::steady_clock::now();

        if (mode == "int") {
            double acc = predict_lr_int(ref_model, ds, act);
            std::cout << "int " << cfg.act << " train accuracy " << acc << "\n";
            if (!cfg.report.empty()) {
                auto rec = report_record("t2");
                rec["data_type"] = "int";
                rec["act"] = cfg.act;
                rec["accuracy"] = acc;
                rec["iter_time_s"] =
                    std::chrono::duration<double>(t1 - t0).count() / iters;
                append_report(cfg.report, rec);
            }
            return 0;
        }

        // enc mode: the int run above doubles as the width-schedule dry run
        std::vector<std::vector<int64_t>> enc_snaps;
        LRModelInt enc_model;
        GateCounter gates;
        auto t2 = std::chrono::steady_clock::now();
        if (cfg.backend == "clear") {
            ClearBackend be;
            CircuitEngine<ClearBackend> eng(be);
            enc_model = train_lr_engine(eng, ds, cfg.scale, act, iters,
                                        [&](int, const std::vector<int64_t>& s) {
                                            enc_snaps.push_back(s);
                                        });
            gates = be.counters();
        } else {
            NoiseSimBackend be(setup(cfg.n, 2, {cfg.alpha, cfg.seed}), cfg.seed);
            CircuitEngine<NoiseSimBackend> eng(be);
            enc_model = train_lr_engine(eng, ds, cfg.scale, act, iters,
                                        [&](int, const std::vector<int64_t>& s) {
                                            enc_snaps.push_back(s);
                                        });
            gates = be.counters();
        }
        auto t3 = std::chrono::steady_clock::now();
        double acc = predict_lr_int(enc_model, ds, act);
        bool identical = enc_snaps == ref_snaps && enc_model.theta == ref_model.theta;
        std::cout << "enc " << cfg.act << " (" << cfg.backend << ") train accuracy " << acc
                  << ", bootstrapped gates " << gates.bootstrapped_gates
                  << ", matches int reference: " << (identical ? "yes" : "NO") << "\n";
        if (!cfg.report.empty()) {
            auto rec = report_record("t3");
            rec["act"] = cfg.act;
            rec["backend"] = cfg.backend;
            rec["accuracy"] = acc;
            rec["bootstrapped_gates"] = gates.bootstrapped_gates;
            rec["free_ops"] = gates.free_ops;
            rec["iter_time_s"] = std::chrono::duration<double>(t3 - t2).count() / iters;
            rec["matches_int"] = identical;
            append_report(cfg.report, rec);
        }
        if (check && !identical) return 2;
    } catch (const std::exception& e) {
        std::cerr << "train-lr: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
