#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mktorus/dataset.hpp"
#include "mktorus/engine.hpp"

namespace mktorus {

// Everything trained in integer form follows one convention: a stored
// coefficient word holds value*q, activations live at the fixed *16 output
// scale of g, and every product is followed by an arithmetic right shift
// that returns its operand to scale. q is a power of two so the rescale is
// a shift; division is reserved for the 1/m batch mean.
inline constexpr int64_t kActScale = 16;
inline constexpr uint32_t kActShift = 4;

struct ScaleConfig {
    uint32_t q = 16;
    uint32_t word_bits = 16;     // stored words; accumulators use 2x
    int64_t alpha_int = 16;      // logistic regression rate, in [0, q]
    int64_t alpha1_int = 4;      // NN output-layer rate
    int64_t alpha2_int = 4;      // NN hidden-layer rate
    int64_t beta1_int = 8;       // NN output-layer momentum weight
    int64_t beta2_int = 8;       // NN hidden-layer momentum weight
    unsigned threads = 1;

    void validate() const {
        if (q < 2 || q > 256 || (q & (q - 1)) != 0)
            throw std::invalid_argument("q must be a power of two in [2, 256]");
        if (word_bits < 8 || word_bits > 31)
            throw std::invalid_argument("word_bits must be in [8, 31]");
        for (int64_t r : {alpha_int, alpha1_int, alpha2_int, beta1_int, beta2_int})
            if (r < 0 || r > int64_t(q))
                throw std::invalid_argument("integer rates must lie in [0, q]");
    }
};

namespace detail {

inline uint32_t width_of(const IntEngine::Word& w) { return w.width; }
template <class B>
uint32_t width_of(const EncWord<B>& w) { return w.width(); }

// move a scale-16 quantity to scale q
template <class E, class W>
W to_scale_q(const E& eng, const W& w, uint32_t qs) {
    if (qs >= kActShift) return eng.shift_left(w, qs - kActShift);
    return eng.rescale(w, kActShift - qs, width_of(w));
}

template <class E, class W>
W apply_act(const E& eng, const W& z_acc, const ActSpec& act, uint32_t scale_shifts,
            uint32_t qs, uint32_t l) {
    // z_acc carries scale q^scale_shifts; g consumes an unscaled integer,
    // the series consumes a scale-q word
    if (act.kind == ActSpec::Kind::piecewise_g)
        return eng.act_g(eng.rescale(z_acc, scale_shifts * qs, l));
    auto u = eng.rescale(z_acc, (scale_shifts - 1) * qs, l);
    return eng.act_taylor(u, act.order, uint32_t(1) << qs);
}

}  // namespace detail

// ---------------------------------------------------------------- LR (BGD)

struct LRModelInt {
    std::vector<int64_t> theta;  // bias first, each value*q
    uint32_t q = 16;
    uint32_t width = 16;
};

using IterObserver = std::function<void(int iter, const std::vector<int64_t>& coeffs)>;

// Full-batch gradient descent on the scaled integers:
//   theta_j <- (theta_j*q - alpha' * mean_i((h_i - y_i) x_ij)) / q
// with h at the *16 activation scale, the mean realized by the divider and
// the final /q an arithmetic shift.
template <class Engine>
LRModelInt train_lr_engine(const Engine& eng, const Dataset& ds, const ScaleConfig& cfg,
                           const ActSpec& act, int iters,
                           const IterObserver& observe = {}) {
    cfg.validate();
    if (ds.size() == 0) throw std::invalid_argument("train_lr: empty dataset");
    const uint32_t l = cfg.word_bits, L = 2 * cfg.word_bits;
    const uint32_t qs = uint32_t(log2_exact(cfg.q));
    const size_t m = ds.size(), d = ds.features();
    using Word = typename Engine::Word;

    std::vector<std::vector<Word>> xw(m);
    std::vector<Word> yw;
    for (size_t i = 0; i < m; ++i) {
        xw[i].push_back(eng.from_const(1, l));  // bias column
        for (size_t j = 0; j < d; ++j)
            xw[i].push_back(eng.encrypt(ds.xi[i][j], l, 1 + uint32_t(i % 2)));
        yw.push_back(eng.encrypt(kActScale * (ds.y[i] ? 1 : 0), l, 1));
    }
    std::vector<Word> theta(d + 1, eng.from_const(0, l));
    const Word m_word = eng.from_const(int64_t(m), l);
    const Word alpha_w = eng.from_const(cfg.alpha_int, l);

    for (int iter = 0; iter < iters; ++iter) {
        std::vector<Word> err(m, eng.from_const(0, l));
        parallel_for(m, Engine::parallel_safe && cfg.threads > 1, cfg.threads,
                     [&](size_t i) {
                         Word z = eng.from_const(0, L);
                         for (size_t j = 0; j <= d; ++j)
                             z = eng.add(z, eng.mul(theta[j], xw[i][j]));
                         Word h = detail::apply_act(eng, z, act, 1, qs, l);
                         err[i] = eng.sub(h, yw[i]);
                     });
        parallel_for(d + 1, Engine::parallel_safe && cfg.threads > 1, cfg.threads,
                     [&](size_t j) {
                         Word grad = eng.from_const(0, L);
                         for (size_t i = 0; i < m; ++i)
                             grad = eng.add(grad, eng.mul(err[i], xw[i][j]));
                         Word mean = eng.div(grad, m_word);  // scale 16
                         Word mean_q = detail::to_scale_q(eng, mean, qs);
                         Word spread = eng.shift_left(eng.homogenize(theta[j], L), qs);
                         Word step = eng.mul(alpha_w, mean_q);
                         theta[j] = eng.rescale(eng.sub(spread, step), qs, l);
                     });
        if (observe) {
            std::vector<int64_t> snap;
            for (const auto& t : theta) snap.push_back(eng.decode(t));
            observe(iter, snap);
        }
    }

    LRModelInt model;
    model.q = cfg.q;
    model.width = l;
    for (const auto& t : theta) model.theta.push_back(eng.decode(t));
    return model;
}

// forward pass only; h >= 8 is the g-scale midpoint threshold
inline double predict_lr_int(const LRModelInt& model, const Dataset& ds,
                             const ActSpec& act) {
    IntEngine eng(false);
    const uint32_t l = model.width, L = 2 * model.width;
    const uint32_t qs = uint32_t(log2_exact(model.q));
    size_t hits = 0;
    for (size_t i = 0; i < ds.size(); ++i) {
        auto z = eng.from_const(0, L);
        z = eng.add(z, eng.mul(eng.from_const(model.theta[0], l), eng.from_const(1, l)));
        for (size_t j = 0; j < ds.features(); ++j)
            z = eng.add(z, eng.mul(eng.from_const(model.theta[j + 1], l),
                                   eng.from_const(ds.xi[i][j], l)));
        auto h = detail::apply_act(eng, z, act, 1, qs, l);
        int pred = eng.decode(h) >= kActScale / 2 ? 1 : 0;
        if (pred == (ds.y[i] ? 1 : 0)) ++hits;
    }
    return double(hits) / double(ds.size());
}

struct LRModelFloat {
    std::vector<double> theta;  // bias first
};

inline double act_float(double z, const ActSpec& act) {
    if (act.kind == ActSpec::Kind::piecewise_g) return g_clear(z) / 16.0;
    return taylor_clear(z, act.order);
}

struct FloatActSigmoid {};  // tag: float mode may also use the true sigmoid

inline double act_float_sigmoid(double z) { return sigmoid_clear(z); }

inline LRModelFloat train_lr_float(const RawData& raw, const ActSpec* act, double alpha,
                                   int iters, std::vector<double>* loss_track = nullptr) {
    size_t m = raw.size(), d = raw.features();
    if (m == 0) throw std::invalid_argument("train_lr_float: empty dataset");
    LRModelFloat model;
    model.theta.assign(d + 1, 0.0);
    for (int iter = 0; iter < iters; ++iter) {
        std::vector<double> grad(d + 1, 0.0);
        double loss = 0.0;
        for (size_t i = 0; i < m; ++i) {
            double z = model.theta[0];
            for (size_t j = 0; j < d; ++j) z += model.theta[j + 1] * raw.x[i][j];
            double h = act ? act_float(z, *act) : act_float_sigmoid(z);
            double e = h - double(raw.y[i]);
            grad[0] += e;
            for (size_t j = 0; j < d; ++j) grad[j + 1] += e * raw.x[i][j];
            double hc = std::min(std::max(h, 1e-9), 1.0 - 1e-9);
            loss += -(raw.y[i] * std::log(hc) + (1 - raw.y[i]) * std::log(1 - hc));
        }
        for (size_t j = 0; j <= d; ++j) model.theta[j] -= alpha * grad[j] / double(m);
        if (loss_track) loss_track->push_back(loss / double(m));
    }
    return model;
}

inline double predict_lr_float(const LRModelFloat& model, const RawData& raw,
                               const ActSpec* act) {
    size_t hits = 0;
    for (size_t i = 0; i < raw.size(); ++i) {
        double z = model.theta[0];
        for (size_t j = 0; j < raw.features(); ++j) z += model.theta[j + 1] * raw.x[i][j];
        double h = act ? act_float(z, *act) : act_float_sigmoid(z);
        if ((h >= 0.5 ? 1 : 0) == raw.y[i]) ++hits;
    }
    return double(hits) / double(raw.size());
}

// ---------------------------------------------------------------- NN (GDM)

struct NNModelInt {
    std::vector<std::vector<int64_t>> w;   // hidden x inputs, value*q
    std::vector<std::vector<int64_t>> v;   // outputs x hidden, value*q
    std::vector<std::vector<int64_t>> dw;  // momenta, value*q
    std::vector<std::vector<int64_t>> dv;
    uint32_t q = 16;
    uint32_t width = 16;
};

// seeded init shared by the integer and float trainers so runs correspond
inline std::vector<std::vector<int64_t>> nn_init_weights(size_t rows, size_t cols,
                                                         uint32_t q, SplitRng& rng) {
    int64_t lim = std::max<int64_t>(1, q / 4);
    std::vector<std::vector<int64_t>> m(rows, std::vector<int64_t>(cols));
    for (auto& row : m)
        for (auto& c : row) c = int64_t(rng.next_u64() % uint64_t(2 * lim + 1)) - lim;
    return m;
}

struct NNInit {
    std::vector<std::vector<int64_t>> w;  // hidden x inputs, value*q
    std::vector<std::vector<int64_t>> v;  // outputs x hidden, value*q
};

inline NNInit nn_default_init(int hidden, size_t inputs, int outputs, uint32_t q,
                              uint64_t seed) {
    SplitRng rng(seed);
    NNInit init;
    init.w = nn_init_weights(size_t(hidden), inputs, q, rng);
    init.v = nn_init_weights(size_t(outputs), size_t(hidden), q, rng);
    return init;
}

inline NNInit nn_zero_init(int hidden, size_t inputs, int outputs) {
    NNInit init;
    init.w.assign(size_t(hidden), std::vector<int64_t>(inputs, 0));
    init.v.assign(size_t(outputs), std::vector<int64_t>(size_t(hidden), 0));
    return init;
}

// One hidden layer trained per sample with momentum:
//   o_i   = act(sum_j w_ij x_j)          (x at scale q, o at scale 16)
//   yhat_j = sum_i o_i v_ji / q          (scale 16)
//   dv    <- (b1' dv + (q - b1') (yhat_j - y_j) o_i / 16) / q
//   dw    <- (b2' dw + (q - b2') o(16-o)/16 * bp_i/16 * x_j / 16) / q
//   v     <- (v q - a1' dv) / q,  w <- (w q - a2' dw) / q
// with bp_i = sum_j (yhat_j - y_j) v_ji / q. Backprop reads the pre-update
// weights; updates commit after the full backward pass.
template <class Engine>
NNModelInt train_nn_engine(const Engine& eng, const Dataset& ds, const ScaleConfig& cfg,
                           const ActSpec& act, int iters, const NNInit& init,
                           const IterObserver& observe = {}) {
    cfg.validate();
    if (ds.size() == 0) throw std::invalid_argument("train_nn: empty dataset");
    const uint32_t l = cfg.word_bits, L = 2 * cfg.word_bits;
    const uint32_t qs = uint32_t(log2_exact(cfg.q));
    if (2 * kActShift < qs) throw std::invalid_argument("train_nn: q too large for the act scale");
    const size_t m = ds.size(), d = ds.features();
    const int outputs = ds.classes;
    const int hidden = int(init.w.size());
    if (init.w.empty() || init.w[0].size() != d || init.v.size() != size_t(outputs))
        throw std::invalid_argument("train_nn: init shape mismatch");
    using Word = typename Engine::Word;

    const auto& w0 = init.w;
    const auto& v0 = init.v;

    auto lift = [&](const std::vector<std::vector<int64_t>>& src) {
        std::vector<std::vector<Word>> out;
        for (const auto& row : src) {
            std::vector<Word> r;
            for (int64_t c : row) r.push_back(eng.from_const(c, l));
            out.push_back(std::move(r));
        }
        return out;
    };
    auto W = lift(w0), V = lift(v0);
    auto dW = lift(std::vector<std::vector<int64_t>>(hidden, std::vector<int64_t>(d, 0)));
    auto dV = lift(std::vector<std::vector<int64_t>>(outputs, std::vector<int64_t>(hidden, 0)));

    std::vector<std::vector<Word>> xw(m);
    std::vector<std::vector<Word>> tw(m);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < d; ++j)
            xw[i].push_back(eng.encrypt(ds.xi[i][j], l, 1 + uint32_t(i % 2)));
        for (int c = 0; c < outputs; ++c)
            tw[i].push_back(eng.encrypt(ds.y[i] == c ? kActScale : 0, l, 1));
    }

    const Word a1 = eng.from_const(cfg.alpha1_int, l);
    const Word a2 = eng.from_const(cfg.alpha2_int, l);
    const Word b1 = eng.from_const(cfg.beta1_int, l);
    const Word b2 = eng.from_const(cfg.beta2_int, l);
    const Word qmb1 = eng.from_const(int64_t(cfg.q) - cfg.beta1_int, l);
    const Word qmb2 = eng.from_const(int64_t(cfg.q) - cfg.beta2_int, l);
    const Word full = eng.from_const(kActScale, l);

    auto momentum_step = [&](const Word& beta, const Word& qmb, const Word& old_m,
                             const Word& grad) {
        return eng.rescale(eng.add(eng.mul(beta, old_m), eng.mul(qmb, grad)), qs, l);
    };
    auto weight_step = [&](const Word& rate, const Word& old_w, const Word& mom) {
        Word spread = eng.shift_left(eng.homogenize(old_w, L), qs);
        return eng.rescale(eng.sub(spread, eng.mul(rate, mom)), qs, l);
    };

    for (int iter = 0; iter < iters; ++iter) {
        for (size_t s = 0; s < m; ++s) {
            // hidden layer, neurons in parallel
            std::vector<Word> o(size_t(hidden), eng.from_const(0, l));
            parallel_for(size_t(hidden), Engine::parallel_safe && cfg.threads > 1,
                         cfg.threads, [&](size_t i) {
                             Word z = eng.from_const(0, L);
                             for (size_t j = 0; j < d; ++j)
                                 z = eng.add(z, eng.mul(W[i][j], xw[s][j]));
                             o[i] = detail::apply_act(eng, z, act, 2, qs, l);
                         });
            // output layer and error
            std::vector<Word> err;
            for (int j = 0; j < outputs; ++j) {
                Word z = eng.from_const(0, L);
                for (int i = 0; i < hidden; ++i)
                    z = eng.add(z, eng.mul(o[size_t(i)], V[size_t(j)][size_t(i)]));
                Word yhat = eng.rescale(z, qs, l);  // scale 16
                err.push_back(eng.sub(yhat, tw[s][size_t(j)]));
            }
            // backprop through the pre-update output weights
            std::vector<Word> bp;
            for (int i = 0; i < hidden; ++i) {
                Word z = eng.from_const(0, L);
                for (int j = 0; j < outputs; ++j)
                    z = eng.add(z, eng.mul(err[size_t(j)], V[size_t(j)][size_t(i)]));
                bp.push_back(eng.rescale(z, qs, l));  // scale 16
            }
            // output layer update
            for (int j = 0; j < outputs; ++j) {
                for (int i = 0; i < hidden; ++i) {
                    Word gv = eng.rescale(eng.mul(err[size_t(j)], o[size_t(i)]),
                                          2 * kActShift - qs, l);  // scale q
                    dV[size_t(j)][size_t(i)] =
                        momentum_step(b1, qmb1, dV[size_t(j)][size_t(i)], gv);
                    V[size_t(j)][size_t(i)] =
                        weight_step(a1, V[size_t(j)][size_t(i)], dV[size_t(j)][size_t(i)]);
                }
            }
            // hidden layer update
            for (int i = 0; i < hidden; ++i) {
                Word deriv = eng.rescale(
                    eng.mul(o[size_t(i)], eng.sub(full, o[size_t(i)])), kActShift, l);
                Word slope = eng.rescale(eng.mul(deriv, bp[size_t(i)]), kActShift, l);
                for (size_t j = 0; j < d; ++j) {
                    Word gw = eng.rescale(eng.mul(slope, xw[s][j]), kActShift, l);
                    dW[size_t(i)][j] = momentum_step(b2, qmb2, dW[size_t(i)][j], gw);
                    W[size_t(i)][j] = weight_step(a2, W[size_t(i)][j], dW[size_t(i)][j]);
                }
            }
        }
        if (observe) {
            std::vector<int64_t> snap;
            for (auto& row : W)
                for (auto& c : row) snap.push_back(eng.decode(c));
            for (auto& row : V)
                for (auto& c : row) snap.push_back(eng.decode(c));
            for (auto& row : dW)
                for (auto& c : row) snap.push_back(eng.decode(c));
            for (auto& row : dV)
                for (auto& c : row) snap.push_back(eng.decode(c));
            observe(iter, snap);
        }
    }

    NNModelInt model;
    model.q = cfg.q;
    model.width = l;
    auto lower = [&](const std::vector<std::vector<Word>>& src) {
        std::vector<std::vector<int64_t>> out;
        for (const auto& row : src) {
            std::vector<int64_t> r;
            for (const auto& c : row) r.push_back(eng.decode(c));
            out.push_back(std::move(r));
        }
        return out;
    };
    model.w = lower(W);
    model.v = lower(V);
    model.dw = lower(dW);
    model.dv = lower(dV);
    return model;
}

inline double predict_nn_int(const NNModelInt& model, const Dataset& ds,
                             const ActSpec& act) {
    IntEngine eng(false);
    const uint32_t l = model.width, L = 2 * model.width;
    const uint32_t qs = uint32_t(log2_exact(model.q));
    size_t hits = 0;
    for (size_t s = 0; s < ds.size(); ++s) {
        std::vector<int64_t> o;
        for (const auto& wrow : model.w) {
            auto z = eng.from_const(0, L);
            for (size_t j = 0; j < ds.features(); ++j)
                z = eng.add(z, eng.mul(eng.from_const(wrow[j], l),
                                       eng.from_const(ds.xi[s][j], l)));
            o.push_back(eng.decode(detail::apply_act(eng, z, act, 2, qs, l)));
        }
        int best = 0;
        int64_t best_v = INT64_MIN;
        for (size_t j = 0; j < model.v.size(); ++j) {
            auto z = eng.from_const(0, L);
            for (size_t i = 0; i < o.size(); ++i)
                z = eng.add(z, eng.mul(eng.from_const(o[i], l),
                                       eng.from_const(model.v[j][i], l)));
            int64_t yhat = eng.decode(eng.rescale(z, qs, l));
            if (yhat > best_v) {
                best_v = yhat;
                best = int(j);
            }
        }
        if (best == ds.y[s]) ++hits;
    }
    return double(hits) / double(ds.size());
}

struct NNModelFloat {
    std::vector<std::vector<double>> w, v, dw, dv;
};

// float GDM reference with the same commit order and the same seeded init
// (integer init divided by q)
inline NNModelFloat train_nn_float(const RawData& raw, const ActSpec* act, double alpha1,
                                   double alpha2, double beta1, double beta2, int iters,
                                   int hidden, int outputs, uint64_t init_seed,
                                   uint32_t q_for_init = 16) {
    size_t m = raw.size(), d = raw.features();
    auto init = nn_default_init(hidden, d, outputs, q_for_init, init_seed);
    NNModelFloat f;
    f.w.assign(size_t(hidden), std::vector<double>(d, 0.0));
    f.v.assign(size_t(outputs), std::vector<double>(size_t(hidden), 0.0));
    f.dw = f.w;
    f.dv = f.v;
    for (int i = 0; i < hidden; ++i)
        for (size_t j = 0; j < d; ++j) f.w[size_t(i)][j] = double(init.w[size_t(i)][j]) / q_for_init;
    for (int j = 0; j < outputs; ++j)
        for (int i = 0; i < hidden; ++i)
            f.v[size_t(j)][size_t(i)] = double(init.v[size_t(j)][size_t(i)]) / q_for_init;

    for (int iter = 0; iter < iters; ++iter) {
        for (size_t s = 0; s < m; ++s) {
            std::vector<double> o(static_cast<size_t>(hidden));
            for (int i = 0; i < hidden; ++i) {
                double z = 0;
                for (size_t j = 0; j < d; ++j) z += f.w[size_t(i)][j] * raw.x[s][j];
                o[size_t(i)] = act ? act_float(z, *act) : act_float_sigmoid(z);
            }
            std::vector<double> err(static_cast<size_t>(outputs));
            for (int j = 0; j < outputs; ++j) {
                double z = 0;
                for (int i = 0; i < hidden; ++i) z += o[size_t(i)] * f.v[size_t(j)][size_t(i)];
                err[size_t(j)] = z - (raw.y[s] == j ? 1.0 : 0.0);
            }
            std::vector<double> bp(static_cast<size_t>(hidden), 0.0);
            for (int i = 0; i < hidden; ++i)
                for (int j = 0; j < outputs; ++j)
                    bp[size_t(i)] += err[size_t(j)] * f.v[size_t(j)][size_t(i)];
            for (int j = 0; j < outputs; ++j)
                for (int i = 0; i < hidden; ++i) {
                    f.dv[size_t(j)][size_t(i)] = beta1 * f.dv[size_t(j)][size_t(i)] +
                                                 (1 - beta1) * err[size_t(j)] * o[size_t(i)];
                    f.v[size_t(j)][size_t(i)] -= alpha1 * f.dv[size_t(j)][size_t(i)];
                }
            for (int i = 0; i < hidden; ++i) {
                double deriv = o[size_t(i)] * (1.0 - o[size_t(i)]);
                for (size_t j = 0; j < d; ++j) {
                    double g = deriv * bp[size_t(i)] * raw.x[s][j];
                    f.dw[size_t(i)][j] = beta2 * f.dw[size_t(i)][j] + (1 - beta2) * g;
                    f.w[size_t(i)][j] -= alpha2 * f.dw[size_t(i)][j];
                }
            }
        }
    }
    return f;
}

inline double predict_nn_float(const NNModelFloat& f, const RawData& raw,
                               const ActSpec* act) {
    size_t hits = 0;
    for (size_t s = 0; s < raw.size(); ++s) {
        std::vector<double> o(f.w.size());
        for (size_t i = 0; i < f.w.size(); ++i) {
            double z = 0;
            for (size_t j = 0; j < raw.features(); ++j) z += f.w[i][j] * raw.x[s][j];
            o[i] = act ? act_float(z, *act) : act_float_sigmoid(z);
        }
        size_t best = 0;
        double best_v = -1e300;
        for (size_t j = 0; j < f.v.size(); ++j) {
            double z = 0;
            for (size_t i = 0; i < o.size(); ++i) z += o[i] * f.v[j][i];
            if (z > best_v) {
                best_v = z;
                best = j;
            }
        }
        if (int(best) == raw.y[s]) ++hits;
    }
    return double(hits) / double(raw.size());
}

}  // namespace mktorus
