#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mktorus/train.hpp"

using namespace mktorus;

namespace {
const std::string kDataDir = MKTORUS_DATA_DIR;
}

TEST_CASE("preprocess") {
    RawData raw;
    raw.columns = {"a", "label"};
    raw.x = {{0.5}, {3.7}, {-1.3}};
    raw.y = {1, 0, 1};

    auto zoomed = preprocess(raw, PrepMode::zoom, 16);
    CHECK(zoomed.xi[0][0] == 8);
    CHECK(zoomed.xi[1][0] == 59);   // round(3.7 * 16)
    CHECK(zoomed.xi[2][0] == -21);  // round(-1.3 * 16)
    CHECK(zoomed.q == 16);

    auto rounded = preprocess(raw, PrepMode::rounding, 16);
    CHECK(rounded.xi[1][0] == 4);
    CHECK(rounded.xi[0][0] == 1);   // round half up at .5

    // zoom then divide recovers the input within 1/(2q)
    for (size_t i = 0; i < raw.size(); ++i)
        CHECK(std::abs(double(zoomed.xi[i][0]) / 16.0 - raw.x[i][0]) <= 1.0 / 32.0 + 1e-12);

    RawData big;
    big.columns = raw.columns;
    big.x = {{40000.0}};
    big.y = {0};
    CHECK_THROWS_AS(preprocess(big, PrepMode::zoom, 16, 16), std::overflow_error);
}

TEST_CASE("synthetic generator and split") {
    auto raw = gen_synthetic(240, 5, 0.3, 40);
    CHECK(raw.size() == 240);
    CHECK(raw.features() == 5);
    int pos = 0;
    for (int y : raw.y) pos += y;
    CHECK(pos > 60);
    CHECK(pos < 180);
    // deterministic under the seed
    auto again = gen_synthetic(240, 5, 0.3, 40);
    CHECK(again.x == raw.x);
    CHECK(again.y == raw.y);

    auto [train, test] = split_half(raw, 1);
    CHECK(train.size() + test.size() == raw.size());
    CHECK(std::abs(int(train.size()) - int(test.size())) <= 1);
}

TEST_CASE("LR single-step trace, the binding integer oracle") {
    // one sample x=(1), y=1, q=16, alpha'=16: z=0, h=g(0)=8, err=8-16=-8,
    // spread update (0*16 - 16*(-8)) = 128, stored back at scale q: 8
    Dataset ds;
    ds.xi = {{1}};
    ds.y = {1};
    ds.q = 16;
    ds.classes = 2;
    ScaleConfig cfg;
    cfg.q = 16;
    cfg.alpha_int = 16;
    IntEngine eng(true);
    auto model = train_lr_engine(eng, ds, cfg, ActSpec::g(), 1);
    CHECK(model.theta == std::vector<int64_t>{8, 8});  // bias and feature move alike
}

TEST_CASE("float LR on the seeded synthetic set") {
    auto raw = gen_synthetic(240, 5, 0.3, 40);
    std::vector<double> loss;
    auto model = train_lr_float(raw, nullptr, 0.1, 400, &loss);
    CHECK(predict_lr_float(model, raw, nullptr) >= 0.95);
    // BGD on the convex objective: loss never increases
    for (size_t i = 1; i < loss.size(); ++i) CHECK(loss[i] <= loss[i - 1] + 1e-12);
}

TEST_CASE("predict sanity") {
    auto raw = gen_synthetic(240, 5, 0.3, 40);
    auto ds = preprocess(raw, PrepMode::rounding, 16);

    SUBCASE("all-zero model scores chance on balanced labels") {
        LRModelInt zeros;
        zeros.theta.assign(6, 0);
        zeros.q = 16;
        zeros.width = 16;
        double acc = predict_lr_int(zeros, ds, ActSpec::g());
        CHECK(acc > 0.4);
        CHECK(acc < 0.6);
    }

    SUBCASE("trained model separates a separable toy set") {
        RawData toy;
        toy.columns = {"f0", "label"};
        for (int v = -2; v <= 2; ++v) {
            if (v == 0) continue;
            toy.x.push_back({double(v)});
            toy.y.push_back(v > 0 ? 1 : 0);
        }
        auto dtoy = preprocess(toy, PrepMode::rounding, 16);
        ScaleConfig cfg;
        cfg.q = 16;
        cfg.alpha_int = 8;
        IntEngine eng(true);
        auto m = train_lr_engine(eng, dtoy, cfg, ActSpec::g(), 20);
        CHECK(predict_lr_int(m, dtoy, ActSpec::g()) == 1.0);
    }
}

TEST_CASE("integer LR accuracy ordering on the pinned configuration") {
    // generator seed 40, 240 samples, 5 features, noise 0.3; q=16,
    // alpha'=8, 14 iterations
    auto raw = gen_synthetic(240, 5, 0.3, 40);
    auto ds = preprocess(raw, PrepMode::rounding, 16);
    ScaleConfig cfg;
    cfg.q = 16;
    cfg.alpha_int = 8;
    IntEngine eng(true);
    ActSpec g = ActSpec::g(), t3 = ActSpec::taylor(3), t7 = ActSpec::taylor(7);

    double acc_g = predict_lr_int(train_lr_engine(eng, ds, cfg, g, 14), ds, g);
    double acc_t3 = predict_lr_int(train_lr_engine(eng, ds, cfg, t3, 14), ds, t3);
    double acc_t7 = predict_lr_int(train_lr_engine(eng, ds, cfg, t7, 14), ds, t7);

    CHECK(acc_t7 >= acc_g);
    CHECK(acc_g >= acc_t3 + 0.05);
    CHECK(acc_t7 - acc_g <= 0.06);

    // integer mode lands within 3 points of the float model of the same act
    ActSpec gf = ActSpec::g();
    auto mf = train_lr_float(raw, &gf, 0.1, 400);
    double acc_fg = predict_lr_float(mf, raw, &gf);
    CHECK(std::abs(acc_fg - acc_g) <= 0.03);
}

TEST_CASE("LR mode equivalence: circuits decode to the integer reference") {
    for (uint32_t width : {12u, 16u}) {
        auto raw = gen_synthetic(8, 3, 0.3, 41);
        auto ds = preprocess(raw, PrepMode::rounding, 16, width);
        ScaleConfig cfg;
        cfg.q = 16;
        cfg.alpha_int = 8;
        cfg.word_bits = width;

        std::vector<std::vector<int64_t>> snap_int, snap_enc;
        IntEngine ie(true);
        auto mi = train_lr_engine(ie, ds, cfg, ActSpec::g(), 3,
                                  [&](int, const std::vector<int64_t>& s) { snap_int.push_back(s); });
        ClearBackend cb;
        CircuitEngine<ClearBackend> ce(cb);
        auto me = train_lr_engine(ce, ds, cfg, ActSpec::g(), 3,
                                  [&](int, const std::vector<int64_t>& s) { snap_enc.push_back(s); });
        CHECK(snap_int == snap_enc);
        CHECK(mi.theta == me.theta);
    }
}

TEST_CASE("LR equivalence holds on the noise-sim backend too") {
    auto raw = gen_synthetic(3, 2, 0.3, 43);
    auto ds = preprocess(raw, PrepMode::rounding, 16, 10);
    ScaleConfig cfg;
    cfg.q = 16;
    cfg.alpha_int = 8;
    cfg.word_bits = 10;

    IntEngine ie(true);
    auto mi = train_lr_engine(ie, ds, cfg, ActSpec::g(), 1);
    NoiseSimBackend nb(setup(8, 2, {0x1.0p-25, 0}), 99);
    CircuitEngine<NoiseSimBackend> ne(nb);
    auto mn = train_lr_engine(ne, ds, cfg, ActSpec::g(), 1);
    CHECK(mi.theta == mn.theta);
}

TEST_CASE("taylor-activated training matches across engines as well") {
    auto raw = gen_synthetic(6, 2, 0.3, 44);
    auto ds = preprocess(raw, PrepMode::rounding, 16, 16);
    ScaleConfig cfg;
    cfg.q = 16;
    cfg.alpha_int = 4;
    IntEngine ie(true);
    ClearBackend cb;
    CircuitEngine<ClearBackend> ce(cb);
    for (int order : {3, 7}) {
        auto act = ActSpec::taylor(order);
        auto mi = train_lr_engine(ie, ds, cfg, act, 2);
        auto me = train_lr_engine(ce, ds, cfg, act, 2);
        CHECK(mi.theta == me.theta);
    }
}

TEST_CASE("scale invariant: bigger q tracks the float-g model more closely") {
    auto raw = gen_synthetic(240, 5, 0.3, 40);
    ActSpec g = ActSpec::g();
    auto mf = train_lr_float(raw, &g, 0.1, 400);
    double dist[2];
    int idx = 0;
    for (uint32_t q : {16u, 64u}) {
        auto ds = preprocess(raw, PrepMode::rounding, q);
        ScaleConfig cfg;
        cfg.q = q;
        cfg.alpha_int = int64_t(q) / 2;
        IntEngine ie(true);
        auto mi = train_lr_engine(ie, ds, cfg, g, 14);
        double worst = 0;
        for (size_t j = 0; j < mi.theta.size(); ++j)
            worst = std::max(worst, std::abs(double(mi.theta[j]) / q - mf.theta[j]));
        dist[idx++] = worst;
        // every stored coefficient is q times a bounded rational
        for (int64_t t : mi.theta) CHECK(std::abs(t) <= int64_t(q) * 8);
    }
    CHECK(dist[1] < dist[0]);
    CHECK(dist[1] <= 1.0);
}

TEST_CASE("NN single-step trace at m=n=p=1") {
    Dataset ds;
    ds.xi = {{8}};  // one zoomed feature
    ds.y = {0};     // class 0 of 1: the one-hot target is 16
    ds.q = 16;
    ds.classes = 1;
    ScaleConfig cfg;
    cfg.q = 16;
    cfg.alpha1_int = 4;
    cfg.alpha2_int = 4;
    cfg.beta1_int = 8;
    cfg.beta2_int = 8;
    IntEngine eng(true);
    auto init = nn_default_init(1, 1, 1, 16, 5);
    auto model = train_nn_engine(eng, ds, cfg, ActSpec::g(), 1, init);

    // independent recomputation of the documented update schedule
    int64_t w = init.w[0][0];
    int64_t v = init.v[0][0];
    int64_t x = 8, t = 16;
    int64_t u = (w * x) >> 8;
    int64_t o = g_clear_int(u);
    int64_t yhat = (o * v) >> 4;
    int64_t err = yhat - t;
    int64_t bp = (err * v) >> 4;
    int64_t gv = (err * o) >> 4;
    int64_t dv = (8 * 0 + (16 - 8) * gv) >> 4;
    int64_t v2 = (v * 16 - 4 * dv) >> 4;
    int64_t deriv = (o * (16 - o)) >> 4;
    int64_t slope = (deriv * bp) >> 4;
    int64_t gw = (slope * x) >> 4;
    int64_t dw = ((16 - 8) * gw) >> 4;
    int64_t w2 = (w * 16 - 4 * dw) >> 4;

    CHECK(model.w[0][0] == w2);
    CHECK(model.v[0][0] == v2);
    CHECK(model.dw[0][0] == dw);
    CHECK(model.dv[0][0] == dv);
}

TEST_CASE("NN fixed point: zero weights, zero input, zero target") {
    Dataset ds;
    ds.xi = {{0, 0}};
    ds.y = {-1};  // matches no class: the whole target vector is zero
    ds.q = 16;
    ds.classes = 1;
    ScaleConfig cfg;
    cfg.q = 16;
    cfg.alpha1_int = 4;
    cfg.alpha2_int = 4;
    cfg.beta1_int = 8;
    cfg.beta2_int = 8;

    IntEngine eng(true);
    auto model = train_nn_engine(eng, ds, cfg, ActSpec::g(), 3, nn_zero_init(2, 2, 1));
    // o = g(0) = 8 is nonzero, but zero targets and zero inputs kill every
    // gradient, so the model never leaves the origin
    for (auto& row : model.w)
        for (auto c : row) CHECK(c == 0);
    for (auto& row : model.v)
        for (auto c : row) CHECK(c == 0);
    for (auto& row : model.dv)
        for (auto c : row) CHECK(c == 0);
}

TEST_CASE("NN momentum zero-init: first step is (1-beta) of the SGD step") {
    auto raw = gen_synthetic(4, 2, 0.3, 45);
    double beta = 0.5;
    // compare the momentum after one single-sample pass
    RawData one;
    one.columns = raw.columns;
    one.x = {raw.x[0]};
    one.y = {raw.y[0]};
    auto m1 = train_nn_float(one, nullptr, 1.0, 1.0, beta, beta, 1, 2, 2, 5);
    auto m0 = train_nn_float(one, nullptr, 1.0, 1.0, 0.0, 0.0, 1, 2, 2, 5);
    for (size_t j = 0; j < m1.dv.size(); ++j)
        for (size_t i = 0; i < m1.dv[j].size(); ++i)
            CHECK(m1.dv[j][i] == doctest::Approx((1.0 - beta) * m0.dv[j][i]));
}

TEST_CASE("NN mode equivalence") {
    for (uint32_t width : {12u, 16u}) {
        auto raw = gen_synthetic(6, 2, 0.3, 7);
        auto ds = preprocess(raw, PrepMode::zoom, 16, width);
        ScaleConfig cfg;
        cfg.q = 16;
        cfg.word_bits = width;
        cfg.alpha1_int = 2;
        cfg.alpha2_int = 4;
        cfg.beta1_int = 8;
        cfg.beta2_int = 8;
        std::vector<std::vector<int64_t>> si, se;
        auto init = nn_default_init(3, ds.features(), ds.classes, 16, 11);
        IntEngine ie(true);
        train_nn_engine(ie, ds, cfg, ActSpec::g(), 2, init,
                        [&](int, const std::vector<int64_t>& s) { si.push_back(s); });
        ClearBackend cb;
        CircuitEngine<ClearBackend> ce(cb);
        train_nn_engine(ce, ds, cfg, ActSpec::g(), 2, init,
                        [&](int, const std::vector<int64_t>& s) { se.push_back(s); });
        CHECK(si == se);
    }
}

TEST_CASE("float NN on iris reaches solid accuracy") {
    auto iris = load_csv(kDataDir + "/iris.csv");
    REQUIRE(iris.size() == 150);
    REQUIRE(iris.features() == 4);
    auto [train_raw, test_raw] = split_half(iris, 1);
    auto m = train_nn_float(train_raw, nullptr, 0.01, 0.01, 0.5, 0.5, 300, 10, 3, 11);
    CHECK(predict_nn_float(m, test_raw, nullptr) >= 0.93);
}

TEST_CASE("integer NN on iris at the pinned configuration") {
    auto iris = load_csv(kDataDir + "/iris.csv");
    auto [train_raw, test_raw] = split_half(iris, 1);
    auto dtr = preprocess(train_raw, PrepMode::zoom, 64, 16);
    auto dte = preprocess(test_raw, PrepMode::zoom, 64, 16);
    ScaleConfig cfg;
    cfg.q = 64;
    cfg.word_bits = 16;
    cfg.alpha1_int = 1;
    cfg.alpha2_int = 16;
    cfg.beta1_int = 32;
    cfg.beta2_int = 32;
    IntEngine eng(true);
    auto init = nn_default_init(10, dtr.features(), dtr.classes, 64, 11);
    auto m = train_nn_engine(eng, dtr, cfg, ActSpec::g(), 40, init);
    double acc = predict_nn_int(m, dte, ActSpec::g());
    CHECK(acc >= 0.90);
}

TEST_CASE("parallel neuron evaluation yields the same model") {
    auto raw = gen_synthetic(6, 2, 0.3, 7);
    auto ds = preprocess(raw, PrepMode::zoom, 16, 16);
    ScaleConfig seq, par;
    seq.q = par.q = 16;
    seq.alpha1_int = par.alpha1_int = 2;
    seq.alpha2_int = par.alpha2_int = 4;
    seq.beta1_int = par.beta1_int = 8;
    seq.beta2_int = par.beta2_int = 8;
    par.threads = 2;
    ClearBackend cb1, cb2;
    CircuitEngine<ClearBackend> e1(cb1), e2(cb2);
    auto init = nn_default_init(4, ds.features(), ds.classes, 16, 11);
    auto m1 = train_nn_engine(e1, ds, seq, ActSpec::g(), 2, init);
    auto m2 = train_nn_engine(e2, ds, par, ActSpec::g(), 2, init);
    CHECK(m1.w == m2.w);
    CHECK(m1.v == m2.v);
}

TEST_CASE("strict engine flags schedules that overflow the widths") {
    Dataset ds;
    ds.xi = {{2000}};
    ds.y = {1};
    ds.q = 16;
    ds.classes = 2;
    ScaleConfig cfg;
    cfg.q = 16;
    cfg.alpha_int = 16;
    cfg.word_bits = 12;  // theta*q spread quickly leaves 12-bit words
    IntEngine eng(true);
    CHECK_THROWS_AS(train_lr_engine(eng, ds, cfg, ActSpec::g(), 8), std::overflow_error);
}
