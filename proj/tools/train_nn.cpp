// Back-propagation network training (one hidden layer, momentum) with a
// 50/50 train/predict split, in float, integer, and encrypted modes.
#include <chrono>
#include <iostream>

#include "cli_common.hpp"
#include "mktorus/gate_backend.hpp"

using namespace mktorus;

int main(int argc, char** argv) {
    CLI::App app{"train a BP network over the csv dataset"};
    cli::RunConfig cfg;
    cfg.command = "train-nn";
    cfg.scale.q = 64;
    cfg.scale.alpha1_int = 1;
    cfg.scale.alpha2_int = 16;
    cfg.scale.beta1_int = 32;
    cfg.scale.beta2_int = 32;
    std::string mode = "int", config;
    int iters = 40, hidden = 10;
    uint64_t split_seed = 1, init_seed = 11;
    double alpha_float = 0.01;
    bool check = false;
    app.add_option("--data", cfg.dataset, "csv with a trailing class column")->required();
    app.add_option("--mode", mode, "float|int|enc")
        ->check(CLI::IsMember({"float", "int", "enc"}));
    app.add_option("--act", cfg.act, "g|taylor3|taylor7|sigmoid");
    app.add_option("--q", cfg.scale.q, "expansion factor, power of two");
    app.add_option("--alpha1", cfg.scale.alpha1_int, "output-layer integer rate");
    app.add_option("--alpha2", cfg.scale.alpha2_int, "hidden-layer integer rate");
    app.add_option("--beta1", cfg.scale.beta1_int, "output-layer momentum weight");
    app.add_option("--beta2", cfg.scale.beta2_int, "hidden-layer momentum weight");
    app.add_option("--alpha-float", alpha_float, "float-mode learning rate");
    app.add_option("--iters", iters, "epochs");
    app.add_option("--hidden", hidden, "hidden neurons");
    app.add_option("--width", cfg.scale.word_bits, "stored word width");
    app.add_option("--split-seed", split_seed, "train/test split seed");
    app.add_option("--init-seed", init_seed, "weight init seed");
    app.add_option("--backend", cfg.backend, "clear|noisesim (enc mode)")
        ->check(CLI::IsMember({"clear", "noisesim"}));
    app.add_option("--dim", cfg.n, "noise-sim TLWE dimension");
    app.add_option("--seed", cfg.seed, "noise-sim session seed");
    app.add_option("--threads", cfg.scale.threads, "parallel neuron workers");
    app.add_option("--report", cfg.report, "append jsonl records here");
    app.add_flag("--check", check, "enc mode: require bit-identical match with int mode");
    app.add_option("--config", config, "json config file");
    CLI11_PARSE(app, argc, argv);

    try {
        if (!config.empty()) cli::load_config_file(config, cfg);
        cli::apply_seed_env(cfg);
        auto raw = load_csv(cfg.dataset);
        auto [train_raw, test_raw] = split_half(raw, split_seed);
        int classes = 0;
        for (int y : raw.y) classes = std::max(classes, y + 1);

        if (mode == "float") {
            const ActSpec* act = nullptr;
            ActSpec spec;
            if (cfg.act != "sigmoid") {
                spec = cli::parse_act(cfg.act);
                act = &spec;
            }
            double beta = double(cfg.scale.beta1_int) / cfg.scale.q;
            auto model = train_nn_float(train_raw, act, alpha_float, alpha_float, beta,
                                        beta, iters, hidden, classes, init_seed);
            double acc = predict_nn_float(model, test_raw, act);
            std::cout << "float " << cfg.act << " test accuracy " << acc << "\n";
            if (!cfg.report.empty()) {
                auto rec = report_record("t5");
                rec["data_type"] = "float";
                rec["act"] = cfg.act;
                rec["accuracy"] = acc;
                append_report(cfg.report, rec);
            }
            return 0;
        }

        auto act = cli::parse_act(cfg.act);
        auto dtrain = preprocess(train_raw, PrepMode::zoom, cfg.scale.q, cfg.scale.word_bits);
        auto dtest = preprocess(test_raw, PrepMode::zoom, cfg.scale.q, cfg.scale.word_bits);
        dtrain.classes = dtest.classes = classes;
        auto init = nn_default_init(hidden, dtrain.features(), classes, cfg.scale.q,
                                    init_seed);

        std::vector<std::vector<int64_t>> ref_snaps;
        IntEngine ref(mode == "enc");  // strict dry run guards enc widths
        auto t0 = std::chrono::steady_clock::now();
        auto ref_model = train_nn_engine(ref, dtrain, cfg.scale, act, iters, init,
                                         [&](int, const std::vector<int64_t>& s) {
                                             ref_snaps.push_back(s);
                                         });
        auto t1 = std::chrono::steady_clock::now();

        if (mode == "int") {
            double acc = predict_nn_int(ref_model, dtest, act);
            std::cout << "int " << cfg.act << " test accuracy " << acc << "\n";
            if (!cfg.report.empty()) {
                auto rec = report_record("t5");
                rec["data_type"] = "int";
                rec["act"] = cfg.act;
                rec["accuracy"] = acc;
                rec["iter_time_s"] =
                    std::chrono::duration<double>(t1 - t0).count() / iters;
                append_report(cfg.report, rec);
            }
            return 0;
        }

        std::vector<std::vector<int64_t>> enc_snaps;
        NNModelInt enc_model;
        GateCounter gates;
        auto t2 = std::chrono::steady_clock::now();
        if (cfg.backend == "clear") {
            ClearBackend be;
            CircuitEngine<ClearBackend> eng(be);
            enc_model = train_nn_engine(eng, dtrain, cfg.scale, act, iters, init,
                                        [&](int, const std::vector<int64_t>& s) {
                                            enc_snaps.push_back(s);
                                        });
            gates = be.counters();
        } else {
            NoiseSimBackend be(setup(cfg.n, 2, {cfg.alpha, cfg.seed}), cfg.seed);
            CircuitEngine<NoiseSimBackend> eng(be);
            enc_model = train_nn_engine(eng, dtrain, cfg.scale, act, iters, init,
                                        [&](int, const std::vector<int64_t>& s) {
                                            enc_snaps.push_back(s);
                                        });
            gates = be.counters();
        }
        auto t3 = std::chrono::steady_clock::now();
        double acc = predict_nn_int(enc_model, dtest, act);
        bool identical = enc_snaps == ref_snaps && enc_model.w == ref_model.w &&
                         enc_model.v == ref_model.v;
        std::cout << "enc " << cfg.act << " (" << cfg.backend << ") test accuracy " << acc
                  << ", bootstrapped gates " << gates.bootstrapped_gates
                  << ", matches int reference: " << (identical ? "yes" : "NO") << "\n";
        if (!cfg.report.empty()) {
            auto rec = report_record("t6");
            rec["act"] = cfg.act;
            rec["backend"] = cfg.backend;
            rec["accuracy"] = acc;
            rec["bootstrapped_gates"] = gates.bootstrapped_gates;
            rec["iter_time_s"] = std::chrono::duration<double>(t3 - t2).count() / iters;
            rec["matches_int"] = identical;
            append_report(cfg.report, rec);
        }
        if (check && !identical) return 2;
    } catch (const std::exception& e) {
        std::cerr << "train-nn: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
