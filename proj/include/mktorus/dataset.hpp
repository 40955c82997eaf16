#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mktorus/rng.hpp"

namespace mktorus {

// CSV convention: header row, numeric feature columns, last column = label.
struct RawData {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> x;
    std::vector<int> y;

    size_t size() const { return x.size(); }
    size_t features() const { return x.empty() ? 0 : x[0].size(); }
};

inline RawData load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    RawData d;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) d.columns.push_back(cell);
    if (d.columns.size() < 2) throw std::runtime_error("csv needs features and a label");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != d.columns.size())
            throw std::runtime_error("csv row width mismatch in " + path);
        d.y.push_back(int(std::llround(row.back())));
        row.pop_back();
        d.x.push_back(std::move(row));
    }
    return d;
}

inline void save_csv(const std::string& path, const RawData& d) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (size_t i = 0; i < d.columns.size(); ++i)
        out << d.columns[i] << (i + 1 < d.columns.size() ? ',' : '\n');
    for (size_t r = 0; r < d.size(); ++r) {
        for (double v : d.x[r]) out << v << ',';
        out << d.y[r] << '\n';
    }
}

enum class PrepMode { rounding, zoom };

// Integer training data plus the preprocessing record needed to interpret it.
struct Dataset {
    std::vector<std::vector<int64_t>> xi;
    std::vector<int> y;
    PrepMode prep = PrepMode::rounding;
    uint32_t q = 16;
    int classes = 2;

    size_t size() const { return xi.size(); }
    size_t features() const { return xi.empty() ? 0 : xi[0].size(); }
};

// rounding -> nearest integer; zoom -> round(x*q) with q recorded
inline Dataset preprocess(const RawData& raw, PrepMode mode, uint32_t q,
                          uint32_t width = 16) {
    Dataset d;
    d.prep = mode;
    d.q = q;
    int64_t limit = int64_t(1) << (width - 1);
    int max_label = 0;
    for (size_t r = 0; r < raw.size(); ++r) {
        std::vector<int64_t> row;
        row.reserve(raw.features());
        for (double v : raw.x[r]) {
            if (!std::isfinite(v)) throw std::invalid_argument("preprocess: non-finite input");
            int64_t iv = mode == PrepMode::rounding ? std::llround(v)
                                                    : std::llround(v * double(q));
            if (iv >= limit || iv < -limit)
                throw std::overflow_error("preprocess: value exceeds the word width");
            row.push_back(iv);
        }
        d.xi.push_back(std::move(row));
        d.y.push_back(raw.y[r]);
        if (raw.y[r] > max_label) max_label = raw.y[r];
    }
    d.classes = max_label + 1;
    return d;
}

// Linearly separable binary data with additive Gaussian noise on the margin:
// integer features in [-feature_range, feature_range], hidden weights in
// [-weight_range, weight_range] \ {0}, label = (w*.x + noise > 0). The
// defaults keep margins inside the range where a low-order sigmoid
// approximation is still meaningful.
inline RawData gen_synthetic(size_t samples, size_t features, double noise,
                             uint64_t seed, int feature_range = 2,
                             int weight_range = 1) {
    SplitRng rng(seed);
    RawData d;
    for (size_t j = 0; j < features; ++j) d.columns.push_back("f" + std::to_string(j));
    d.columns.push_back("label");

    std::vector<double> w(features);
    for (auto& c : w) {
        int v = 0;
        while (v == 0) v = int(rng.next_u64() % uint64_t(2 * weight_range + 1)) - weight_range;
        c = double(v);
    }

    for (size_t i = 0; i < samples; ++i) {
        std::vector<double> row(features);
        double margin = 0.0;
        for (size_t j = 0; j < features; ++j) {
            row[j] = double(int(rng.next_u64() % uint64_t(2 * feature_range + 1)) -
                            feature_range);
            margin += w[j] * row[j];
        }
        margin += noise * rng.next_gaussian();
        d.y.push_back(margin > 0 ? 1 : 0);
        d.x.push_back(std::move(row));
    }
    return d;
}

// Deterministic stratified 50/50 split (alternating per class in shuffled
// order), used for the train/predict halves.
inline std::pair<RawData, RawData> split_half(const RawData& d, uint64_t seed) {
    SplitRng rng(seed);
    std::vector<size_t> order(d.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.next_u64() % i]);

    int max_label = 0;
    for (int y : d.y) max_label = std::max(max_label, y);
    std::vector<int> taken(max_label + 1, 0);

    RawData train, test;
    train.columns = test.columns = d.columns;
    for (size_t idx : order) {
        auto& dst = (taken[d.y[idx]]++ % 2 == 0) ? train : test;
        dst.x.push_back(d.x[idx]);
        dst.y.push_back(d.y[idx]);
    }
    return {train, test};
}

}  // namespace mktorus
