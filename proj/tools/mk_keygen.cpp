// Secret-key generation for one participant; writes a tagged key file.
#include <fstream>
#include <iostream>

#include "cli_common.hpp"

using namespace mktorus;

int main(int argc, char** argv) {
    CLI::App app{"generate a participant's TLWE secret key"};
    cli::RunConfig cfg;
    cfg.command = "mk-keygen";
    uint32_t party = 1;
    std::string out = "party.key", config;
    app.add_option("--dim", cfg.n, "TLWE dimension n");
    app.add_option("--parties", cfg.k, "participant count k");
    app.add_option("--party", party, "this participant's 1-based index")->required();
    app.add_option("--seed", cfg.seed, "key seed");
    app.add_option("--out", out, "key file path");
    app.add_option("--config", config, "json config file");
    CLI11_PARSE(app, argc, argv);

    try {
        if (!config.empty()) cli::load_config_file(config, cfg);
        cli::apply_seed_env(cfg);
        auto params = setup(cfg.n, cfg.k, {cfg.alpha, cfg.seed});
        SplitRng root(cfg.seed);
        auto rng = root.split(party);
        auto sk = keygen(params, party, rng);
        auto pk = derive_public_key(sk);

        ByteWriter w;
        w.bytes("MKSK", 4);
        w.u32(cfg.n);
        w.u32(cfg.k);
        serialize(w, sk);
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out);
        f.write(reinterpret_cast<const char*>(w.data().data()),
                std::streamsize(w.data().size()));
        std::cout << "wrote " << out << " for party " << party << " (n=" << cfg.n
                  << ", pk tag " << std::hex << pk.opaque << std::dec << ")\n";
    } catch (const std::exception& e) {
        std::cerr << "mk-keygen: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
