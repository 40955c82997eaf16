// Synthetic linear-data generator emitting the shared CSV layout.
#include <iostream>

#include "cli_common.hpp"
#include "mktorus/dataset.hpp"

int main(int argc, char** argv) {
    CLI::App app{"generate a seeded linearly separable dataset"};
    size_t samples = 240, features = 5;
    double noise = 0.3;
    uint64_t seed = 40;
    int range = 2;
    std::string out = "synthetic.csv";
    std::string config;
    app.add_option("--samples", samples, "number of rows");
    app.add_option("--features", features, "feature count");
    app.add_option("--noise", noise, "stddev of the Gaussian margin noise");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--range", range, "integer feature range [-range, range]");
    app.add_option("--out", out, "output csv path");
    app.add_option("--config", config, "json config file");
    CLI11_PARSE(app, argc, argv);

    try {
        if (const char* env = std::getenv("MKTORUS_SEED"))
            seed = std::strtoull(env, nullptr, 10);
        auto raw = mktorus::gen_synthetic(samples, features, noise, seed, range);
        mktorus::save_csv(out, raw);
        int pos = 0;
        for (int y : raw.y) pos += y;
        std::cout << "wrote " << out << ": " << raw.size() << " rows, " << raw.features()
                  << " features, " << pos << " positive labels\n";
    } catch (const std::exception& e) {
        std::cerr << "gen-data: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
