// Bit-by-bit encryption under a key file; writes a tagged ciphertext batch.
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli_common.hpp"

using namespace mktorus;

namespace {

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"encrypt a bit string under a participant key"};
    cli::RunConfig cfg;
    cfg.command = "mk-encrypt";
    std::string key_path, bits_arg, out = "cts.bin", config;
    app.add_option("--key", key_path, "key file from mk-keygen")->required();
    app.add_option("--bits", bits_arg, "comma separated bits, e.g. 1,0,1")->required();
    app.add_option("--alpha", cfg.alpha, "noise stddev");
    app.add_option("--seed", cfg.seed, "encryption randomness seed");
    app.add_option("--out", out, "ciphertext batch path");
    app.add_option("--config", config, "json config file");
    CLI11_PARSE(app, argc, argv);

    try {
        if (!config.empty()) cli::load_config_file(config, cfg);
        cli::apply_seed_env(cfg);
        auto raw = read_file(key_path);
        ByteReader r(raw);
        char magic[4];
        for (auto& c : magic) c = char(r.u8());
        if (std::string(magic, 4) != "MKSK") throw std::runtime_error("not a key file");
        uint32_t n = r.u32(), k = r.u32();
        auto sk = deserialize_secret_key(r);
        auto params = setup(n, k, {cfg.alpha, cfg.seed});

        std::vector<int> bits;
        std::stringstream ss(bits_arg);
        std::string cell;
        while (std::getline(ss, cell, ',')) bits.push_back(std::stoi(cell) & 1);

        SplitRng rng(cfg.seed);
        ByteWriter w;
        w.bytes("MKCB", 4);
        w.u32(uint32_t(bits.size()));
        for (int b : bits) serialize(w, encrypt_bit(b, sk, params, rng));

        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out);
        f.write(reinterpret_cast<const char*>(w.data().data()),
                std::streamsize(w.data().size()));
        std::cout << "wrote " << out << ": " << bits.size() << " ciphertexts under party "
                  << sk.party_index << "\n";
    } catch (const std::exception& e) {
        std::cerr << "mk-encrypt: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
