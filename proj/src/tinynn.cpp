#include "tgtm/tinynn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "tgtm/errors.hpp"
#include "tgtm/random.hpp"
#include "tgtm/simulate.hpp"

namespace tgtm {

namespace {

double logistic(double t) {
    if (t >= 0.0)
        return 1.0 / (1.0 + std::exp(-t));
    double e = std::exp(t);
    return e / (1.0 + e);
}

double sign(double v) {
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

const double kLogG2Min = std::log(param_range::kGain2Min);
const double kLogG2Max = std::log(param_range::kGain2Max);

/// Parameters normalized to [0, 1] by their ranges, gain2 in log domain.
std::array<double, 4> normalized_params(const ToneCurveParams& p) {
    using namespace param_range;
    return {(p.sigmoid_start - kSigmoidStartMin) / (kSigmoidStartMax - kSigmoidStartMin),
            (p.sigmoid_end - kSigmoidEndMin) / (kSigmoidEndMax - kSigmoidEndMin),
            (p.gain1 - kGain1Min) / (kGain1Max - kGain1Min),
            (std::log(p.gain2) - kLogG2Min) / (kLogG2Max - kLogG2Min)};
}

int conv_out_len(int in_len, int kernel, int stride) {
    return (in_len - kernel) / stride + 1;
}

struct ForwardTrace {
    std::vector<std::vector<double>> inputs; // input vector of each layer
    std::vector<std::vector<double>> preact; // pre-activation output of each layer
    std::array<double, 4> raw{};
};

std::vector<double> stack_input(const HistogramPair& hist) {
    std::vector<double> x(2 * kHistogramBins);
    for (int i = 0; i < kHistogramBins; ++i) {
        x[static_cast<std::size_t>(i)] = hist.linear[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(i) + kHistogramBins] = hist.log[static_cast<std::size_t>(i)];
    }
    return x;
}

void run_forward(const ModelWeights& w, const HistogramPair& hist, ForwardTrace& trace) {
    trace.inputs.clear();
    trace.preact.clear();
    std::vector<double> x = stack_input(hist);
    int len = kHistogramBins; // spatial length while in conv layers
    for (std::size_t li = 0; li < w.arch.layers.size(); ++li) {
        const LayerSpec& spec = w.arch.layers[li];
        const std::vector<double>& weight = w.weights[li];
        const std::vector<double>& bias = w.biases[li];
        trace.inputs.push_back(x);
        std::vector<double> out;
        if (spec.kind == LayerSpec::Kind::Conv1d) {
            int out_len = conv_out_len(len, spec.kernel, spec.stride);
            out.assign(static_cast<std::size_t>(spec.out_ch * out_len), 0.0);
            for (int o = 0; o < spec.out_ch; ++o) {
                for (int j = 0; j < out_len; ++j) {
                    double acc = bias[static_cast<std::size_t>(o)];
                    for (int i = 0; i < spec.in_ch; ++i)
                        for (int t = 0; t < spec.kernel; ++t)
                            acc += weight[static_cast<std::size_t>((o * spec.in_ch + i) * spec.kernel + t)] *
                                   x[static_cast<std::size_t>(i * len + j * spec.stride + t)];
                    out[static_cast<std::size_t>(o * out_len + j)] = acc;
                }
            }
            len = out_len;
        } else {
            out.assign(static_cast<std::size_t>(spec.out_dim), 0.0);
            for (int o = 0; o < spec.out_dim; ++o) {
                double acc = bias[static_cast<std::size_t>(o)];
                const double* row = weight.data() + static_cast<std::size_t>(o) * spec.in_dim;
                for (int i = 0; i < spec.in_dim; ++i)
                    acc += row[i] * x[static_cast<std::size_t>(i)];
                out[static_cast<std::size_t>(o)] = acc;
            }
        }
        trace.preact.push_back(out);
        if (spec.relu)
            for (double& v : out)
                v = std::max(0.0, v);
        x = std::move(out);
    }
    if (x.size() != 4)
        throw std::logic_error("forward: architecture does not end in 4 outputs");
    std::copy(x.begin(), x.end(), trace.raw.begin());
}

/// Loss and its gradient with respect to the raw network outputs.
double loss_from_raw(const std::array<double, 4>& raw, const ToneCurveParams& gt,
                     double cil_weight, std::array<double, 4>* grad_raw) {
    std::array<double, 4> sig{}, gt_n = normalized_params(gt);
    for (int i = 0; i < 4; ++i)
        sig[static_cast<std::size_t>(i)] = logistic(raw[static_cast<std::size_t>(i)]);

    double mae = 0.0;
    for (int i = 0; i < 4; ++i)
        mae += std::abs(sig[static_cast<std::size_t>(i)] - gt_n[static_cast<std::size_t>(i)]);
    mae /= 4.0;

    double g2_pred = std::exp(kLogG2Min + sig[3] * (kLogG2Max - kLogG2Min));
    double integral_diff = gain_curve_integral(g2_pred, 1.0) - gain_curve_integral(gt.gain2, 1.0);
    double cil = cil_weight * std::abs(integral_diff);

    if (grad_raw) {
        for (int i = 0; i < 4; ++i) {
            double s = sig[static_cast<std::size_t>(i)];
            double dsig = s * (1.0 - s);
            (*grad_raw)[static_cast<std::size_t>(i)] =
                sign(s - gt_n[static_cast<std::size_t>(i)]) * dsig / 4.0;
        }
        double dg2_draw = g2_pred * (kLogG2Max - kLogG2Min) * sig[3] * (1.0 - sig[3]);
        (*grad_raw)[3] += cil_weight * sign(integral_diff) *
                          gain_curve_integral_dgain(g2_pred, 1.0) * dg2_draw;
    }
    return mae + cil;
}

void check_shapes(const ModelWeights& w) {
    if (w.weights.size() != w.arch.layers.size() || w.biases.size() != w.arch.layers.size())
        throw std::invalid_argument("model: tensor count does not match architecture");
    for (std::size_t li = 0; li < w.arch.layers.size(); ++li) {
        const LayerSpec& spec = w.arch.layers[li];
        if (w.weights[li].size() != static_cast<std::size_t>(spec.weight_count()) ||
            w.biases[li].size() != static_cast<std::size_t>(spec.bias_count()))
            throw std::invalid_argument("model: tensor shape mismatch in layer " + spec.name);
    }
}

void snap_to_float(ModelWeights& w) {
    for (auto& layer : w.weights)
        for (double& v : layer)
            v = static_cast<double>(static_cast<float>(v));
    for (auto& layer : w.biases)
        for (double& v : layer)
            v = static_cast<double>(static_cast<float>(v));
}

} // namespace

LayerSpec LayerSpec::conv1d(std::string name, int in_ch, int out_ch, int kernel, int stride,
                            bool relu) {
    LayerSpec s;
    s.kind = Kind::Conv1d;
    s.name = std::move(name);
    s.in_ch = in_ch;
    s.out_ch = out_ch;
    s.kernel = kernel;
    s.stride = stride;
    s.relu = relu;
    return s;
}

LayerSpec LayerSpec::dense(std::string name, int in_dim, int out_dim, bool relu) {
    LayerSpec s;
    s.kind = Kind::Dense;
    s.name = std::move(name);
    s.in_dim = in_dim;
    s.out_dim = out_dim;
    s.relu = relu;
    return s;
}

int LayerSpec::weight_count() const {
    return kind == Kind::Conv1d ? out_ch * in_ch * kernel : out_dim * in_dim;
}

int LayerSpec::bias_count() const {
    return kind == Kind::Conv1d ? out_ch : out_dim;
}

Architecture Architecture::reference() {
    Architecture a;
    a.layers = {
        LayerSpec::conv1d("conv1", 2, 4, 3, 4, true),
        LayerSpec::conv1d("conv2", 4, 8, 3, 4, true),
        LayerSpec::dense("dense1", 128, 7, true),
        LayerSpec::dense("dense2", 7, 4, false),
    };
    return a;
}

int Architecture::param_count() const {
    int total = 0;
    for (const LayerSpec& l : layers)
        total += l.weight_count() + l.bias_count();
    return total;
}

int Architecture::forward_flops() const {
    // One multiply-accumulate = 2 FLOPs, bias = 1 add, ReLU = 1 per element.
    int total = 0;
    int len = kHistogramBins;
    for (const LayerSpec& l : layers) {
        if (l.kind == LayerSpec::Kind::Conv1d) {
            int out_len = conv_out_len(len, l.kernel, l.stride);
            int outs = l.out_ch * out_len;
            total += outs * (2 * l.in_ch * l.kernel + 1);
            if (l.relu)
                total += outs;
            len = out_len;
        } else {
            total += l.out_dim * (2 * l.in_dim + 1);
            if (l.relu)
                total += l.out_dim;
        }
    }
    return total;
}

void Architecture::validate() const {
    if (layers.empty())
        throw std::invalid_argument("architecture: no layers");
    int ch = 2;
    int len = kHistogramBins;
    bool flattened = false;
    for (const LayerSpec& l : layers) {
        if (l.kind == LayerSpec::Kind::Conv1d) {
            if (flattened)
                throw std::invalid_argument("architecture: convolution after a dense layer");
            if (l.in_ch != ch)
                throw std::invalid_argument("architecture: " + l.name + " expects " +
                                            std::to_string(l.in_ch) + " channels, previous layer yields " +
                                            std::to_string(ch));
            if (l.kernel < 1 || l.stride < 1 || l.kernel > len)
                throw std::invalid_argument("architecture: " + l.name + " kernel/stride invalid");
            ch = l.out_ch;
            len = conv_out_len(len, l.kernel, l.stride);
        } else {
            int in = flattened ? ch : ch * len;
            if (l.in_dim != in)
                throw std::invalid_argument("architecture: " + l.name + " expects " +
                                            std::to_string(l.in_dim) + " inputs, previous layer yields " +
                                            std::to_string(in));
            flattened = true;
            ch = l.out_dim;
        }
    }
    int out = flattened ? ch : ch * len;
    if (out != 4)
        throw std::invalid_argument("architecture: final output must be 4 values, got " +
                                    std::to_string(out));
    if (param_count() > kMaxParams)
        throw std::invalid_argument("architecture: parameter budget exceeded (" +
                                    std::to_string(param_count()) + " > " +
                                    std::to_string(kMaxParams) + ")");
    if (forward_flops() > kMaxForwardFlops)
        throw std::invalid_argument("architecture: FLOP budget exceeded (" +
                                    std::to_string(forward_flops()) + " > " +
                                    std::to_string(kMaxForwardFlops) + ")");
}

ModelWeights init_weights(const Architecture& arch, uint64_t seed) {
    arch.validate();
    std::mt19937_64 rng(seed);
    ModelWeights w;
    w.arch = arch;
    for (const LayerSpec& l : arch.layers) {
        int fan_in = l.kind == LayerSpec::Kind::Conv1d ? l.in_ch * l.kernel : l.in_dim;
        int fan_out = l.kind == LayerSpec::Kind::Conv1d ? l.out_ch * l.kernel : l.out_dim;
        double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::vector<double> weight(static_cast<std::size_t>(l.weight_count()));
        for (double& v : weight)
            v = uniform(rng, -limit, limit);
        w.weights.push_back(std::move(weight));
        w.biases.emplace_back(static_cast<std::size_t>(l.bias_count()), 0.0);
    }
    snap_to_float(w);
    return w;
}

std::array<double, 4> forward(const ModelWeights& w, const HistogramPair& hist) {
    check_shapes(w);
    ForwardTrace trace;
    run_forward(w, hist, trace);
    return trace.raw;
}

ToneCurveParams raw_to_params(const std::array<double, 4>& raw) {
    using namespace param_range;
    for (double v : raw)
        if (!std::isfinite(v))
            throw std::invalid_argument("raw_to_params: non-finite input");
    ToneCurveParams p;
    p.sigmoid_start = kSigmoidStartMin + logistic(raw[0]) * (kSigmoidStartMax - kSigmoidStartMin);
    p.sigmoid_end = kSigmoidEndMin + logistic(raw[1]) * (kSigmoidEndMax - kSigmoidEndMin);
    p.gain1 = kGain1Min + logistic(raw[2]) * (kGain1Max - kGain1Min);
    p.gain2 = std::exp(kLogG2Min + logistic(raw[3]) * (kLogG2Max - kLogG2Min));
    return p;
}

double loss(const ToneCurveParams& pred, const ToneCurveParams& gt, double cil_weight) {
    std::array<double, 4> pn = normalized_params(pred);
    std::array<double, 4> gn = normalized_params(gt);
    double mae = 0.0;
    for (int i = 0; i < 4; ++i)
        mae += std::abs(pn[static_cast<std::size_t>(i)] - gn[static_cast<std::size_t>(i)]);
    mae /= 4.0;
    double cil = cil_weight *
                 std::abs(gain_curve_integral(pred.gain2, 1.0) - gain_curve_integral(gt.gain2, 1.0));
    return mae + cil;
}

Gradients backward(const ModelWeights& w, const HistogramPair& hist, const ToneCurveParams& gt,
                   double cil_weight, double* loss_out) {
    check_shapes(w);
    ForwardTrace trace;
    run_forward(w, hist, trace);

    std::array<double, 4> grad_raw{};
    double value = loss_from_raw(trace.raw, gt, cil_weight, &grad_raw);
    if (loss_out)
        *loss_out = value;

    Gradients grads;
    grads.weights.resize(w.weights.size());
    grads.biases.resize(w.biases.size());

    std::vector<double> delta(grad_raw.begin(), grad_raw.end());
    for (std::size_t li = w.arch.layers.size(); li-- > 0;) {
        const LayerSpec& spec = w.arch.layers[li];
        const std::vector<double>& input = trace.inputs[li];
        const std::vector<double>& pre = trace.preact[li];
        const std::vector<double>& weight = w.weights[li];

        if (spec.relu)
            for (std::size_t i = 0; i < delta.size(); ++i)
                if (pre[i] <= 0.0)
                    delta[i] = 0.0;

        grads.weights[li].assign(weight.size(), 0.0);
        grads.biases[li].assign(w.biases[li].size(), 0.0);
        std::vector<double> delta_in(input.size(), 0.0);

        if (spec.kind == LayerSpec::Kind::Conv1d) {
            int in_len = static_cast<int>(input.size()) / spec.in_ch;
            int out_len = conv_out_len(in_len, spec.kernel, spec.stride);
            for (int o = 0; o < spec.out_ch; ++o) {
                for (int j = 0; j < out_len; ++j) {
                    double d = delta[static_cast<std::size_t>(o * out_len + j)];
                    if (d == 0.0)
                        continue;
                    grads.biases[li][static_cast<std::size_t>(o)] += d;
                    for (int i = 0; i < spec.in_ch; ++i) {
                        for (int t = 0; t < spec.kernel; ++t) {
                            std::size_t wi =
                                static_cast<std::size_t>((o * spec.in_ch + i) * spec.kernel + t);
                            std::size_t xi = static_cast<std::size_t>(i * in_len + j * spec.stride + t);
                            grads.weights[li][wi] += d * input[xi];
                            delta_in[xi] += d * weight[wi];
                        }
                    }
                }
            }
        } else {
            for (int o = 0; o < spec.out_dim; ++o) {
                double d = delta[static_cast<std::size_t>(o)];
                if (d == 0.0)
                    continue;
                grads.biases[li][static_cast<std::size_t>(o)] += d;
                const double* row = weight.data() + static_cast<std::size_t>(o) * spec.in_dim;
                for (int i = 0; i < spec.in_dim; ++i) {
                    grads.weights[li][static_cast<std::size_t>(o) * spec.in_dim + static_cast<std::size_t>(i)] +=
                        d * input[static_cast<std::size_t>(i)];
                    delta_in[static_cast<std::size_t>(i)] += d * row[i];
                }
            }
        }
        delta = std::move(delta_in);
    }
    return grads;
}

AdamState AdamState::for_weights(const ModelWeights& w) {
    AdamState s;
    for (const auto& layer : w.weights) {
        s.m_weights.emplace_back(layer.size(), 0.0);
        s.v_weights.emplace_back(layer.size(), 0.0);
    }
    for (const auto& layer : w.biases) {
        s.m_biases.emplace_back(layer.size(), 0.0);
        s.v_biases.emplace_back(layer.size(), 0.0);
    }
    return s;
}

void adam_step(ModelWeights& w, const Gradients& grads, AdamState& state, double lr) {
    if (grads.weights.size() != w.weights.size() || grads.biases.size() != w.biases.size())
        throw std::invalid_argument("adam_step: gradient shape mismatch");
    ++state.step;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    auto update = [&](std::vector<double>& param, const std::vector<double>& grad,
                      std::vector<double>& m, std::vector<double>& v) {
        if (grad.size() != param.size())
            throw std::invalid_argument("adam_step: gradient shape mismatch");
        for (std::size_t i = 0; i < param.size(); ++i) {
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * grad[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
            double m_hat = m[i] / bc1;
            double v_hat = v[i] / bc2;
            param[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    };
    for (std::size_t li = 0; li < w.weights.size(); ++li) {
        update(w.weights[li], grads.weights[li], state.m_weights[li], state.v_weights[li]);
        update(w.biases[li], grads.biases[li], state.m_biases[li], state.v_biases[li]);
    }
    snap_to_float(w);
}

PlateauScheduler::PlateauScheduler(double initial_lr, double factor, int patience, double min_lr)
    : lr_(initial_lr), factor_(factor), min_lr_(min_lr), patience_(patience),
      best_(std::numeric_limits<double>::infinity()) {
    if (initial_lr <= 0.0 || factor <= 0.0 || factor >= 1.0 || patience < 0 || min_lr <= 0.0)
        throw std::invalid_argument("PlateauScheduler: invalid configuration");
}

double PlateauScheduler::observe(double val_loss) {
    if (val_loss < best_) {
        best_ = val_loss;
        bad_epochs_ = 0;
    } else if (++bad_epochs_ > patience_) {
        lr_ = std::max(lr_ * factor_, min_lr_);
        bad_epochs_ = 0;
        best_ = std::numeric_limits<double>::infinity();
    }
    return lr_;
}

double evaluate_loss(const ModelWeights& w, const std::vector<TrainSample>& samples,
                     double cil_weight) {
    if (samples.empty())
        throw std::invalid_argument("evaluate_loss: empty sample set");
    double total = 0.0;
    for (const TrainSample& s : samples)
        total += loss(raw_to_params(forward(w, s.hist)), s.gt, cil_weight);
    return total / static_cast<double>(samples.size());
}

TrainResult train(const std::vector<TrainSample>& train_set,
                  const std::vector<TrainSample>& val_set, const TrainConfig& cfg) {
    if (train_set.empty() || val_set.empty())
        throw std::invalid_argument("train: empty dataset");
    if (cfg.batch_size < 1 || cfg.max_epochs < 0)
        throw std::invalid_argument("train: invalid configuration");

    ModelWeights w = init_weights(Architecture::reference(), cfg.seed);
    AdamState opt = AdamState::for_weights(w);
    PlateauScheduler sched(cfg.learning_rate, cfg.plateau_factor, cfg.plateau_patience, cfg.min_lr);
    std::mt19937_64 shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);

    TrainResult result;
    result.best = w;
    result.best_val_loss = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        // Fisher-Yates with our own index draw; std::shuffle is not
        // reproducible across standard libraries.
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_rng() % i)]);

        double lr_used = sched.lr();
        double epoch_loss = 0.0;
        std::size_t iterations = 0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            double batch_n = static_cast<double>(end - start);
            Gradients acc;
            double batch_loss = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                const TrainSample& s = train_set[order[k]];
                double sample_loss = 0.0;
                Gradients g = backward(w, s.hist, s.gt, cfg.cil_weight, &sample_loss);
                batch_loss += sample_loss;
                if (acc.weights.empty()) {
                    acc = std::move(g);
                } else {
                    for (std::size_t li = 0; li < g.weights.size(); ++li) {
                        for (std::size_t i = 0; i < g.weights[li].size(); ++i)
                            acc.weights[li][i] += g.weights[li][i];
                        for (std::size_t i = 0; i < g.biases[li].size(); ++i)
                            acc.biases[li][i] += g.biases[li][i];
                    }
                }
            }
            for (auto& layer : acc.weights)
                for (double& v : layer)
                    v /= batch_n;
            for (auto& layer : acc.biases)
                for (double& v : layer)
                    v /= batch_n;
            adam_step(w, acc, opt, lr_used);
            epoch_loss += batch_loss / batch_n;
            ++iterations;
        }

        double val_loss = evaluate_loss(w, val_set, cfg.cil_weight);
        if (val_loss < result.best_val_loss) {
            result.best_val_loss = val_loss;
            result.best = w;
        }
        result.history.push_back({epoch, epoch_loss / static_cast<double>(iterations), val_loss,
                                  lr_used});
        sched.observe(val_loss);
    }

    if (cfg.max_epochs == 0)
        result.best_val_loss = evaluate_loss(w, val_set, cfg.cil_weight);
    return result;
}

namespace {

std::string float_repr(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), static_cast<float>(v));
    return std::string(buf, res.ptr);
}

struct TensorRecord {
    std::string name;
    std::vector<int> dims;
    std::vector<double> values;
};

// Tensor names: "<stage>.weight" / "<stage>.bias" where <stage> is
// "conv<N>.s<stride>" or "dense<N>". The suffix determines how many
// dimensions follow on the layer line.
bool parse_stage(const std::string& stage, bool* is_conv, int* stride) {
    if (stage.rfind("conv", 0) == 0) {
        auto dot = stage.find(".s");
        if (dot == std::string::npos || dot + 2 >= stage.size())
            return false;
        int s = 0;
        auto res = std::from_chars(stage.data() + dot + 2, stage.data() + stage.size(), s);
        if (res.ec != std::errc() || res.ptr != stage.data() + stage.size() || s < 1)
            return false;
        *is_conv = true;
        *stride = s;
        return true;
    }
    if (stage.rfind("dense", 0) == 0) {
        *is_conv = false;
        *stride = 0;
        return true;
    }
    return false;
}

} // namespace

void save_weights(const ModelWeights& w, const std::filesystem::path& path) {
    check_shapes(w);
    w.arch.validate();
    for (const auto& layer : w.weights)
        for (double v : layer)
            if (!std::isfinite(v))
                throw std::invalid_argument("save_weights: non-finite weight");
    for (const auto& layer : w.biases)
        for (double v : layer)
            if (!std::isfinite(v))
                throw std::invalid_argument("save_weights: non-finite bias");

    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    out << "TGTM-WEIGHTS v1\n";
    for (std::size_t li = 0; li < w.arch.layers.size(); ++li) {
        const LayerSpec& l = w.arch.layers[li];
        std::string stage = l.name;
        if (l.kind == LayerSpec::Kind::Conv1d)
            stage += ".s" + std::to_string(l.stride);
        out << "layer " << stage << ".weight";
        if (l.kind == LayerSpec::Kind::Conv1d)
            out << ' ' << l.out_ch << ' ' << l.in_ch << ' ' << l.kernel;
        else
            out << ' ' << l.out_dim << ' ' << l.in_dim;
        out << '\n';
        for (std::size_t i = 0; i < w.weights[li].size(); ++i)
            out << (i ? " " : "") << float_repr(w.weights[li][i]);
        out << '\n';
        out << "layer " << stage << ".bias " << w.biases[li].size() << '\n';
        for (std::size_t i = 0; i < w.biases[li].size(); ++i)
            out << (i ? " " : "") << float_repr(w.biases[li][i]);
        out << '\n';
    }
    if (!out)
        throw DataError("short write to " + path.string());
}

ModelWeights load_weights(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::string header;
    std::getline(in, header);
    if (header != "TGTM-WEIGHTS v1")
        throw DataError(path.string() + ": expected header 'TGTM-WEIGHTS v1'");

    std::vector<TensorRecord> records;
    std::string token;
    while (in >> token) {
        if (token != "layer")
            throw DataError(path.string() + ": expected 'layer', got '" + token + "'");
        TensorRecord rec;
        if (!(in >> rec.name))
            throw DataError(path.string() + ": truncated layer record");
        bool is_weight = rec.name.size() > 7 && rec.name.ends_with(".weight");
        bool is_bias = rec.name.size() > 5 && rec.name.ends_with(".bias");
        if (!is_weight && !is_bias)
            throw DataError(path.string() + ": tensor name '" + rec.name +
                            "' must end in .weight or .bias");
        std::string stage = rec.name.substr(0, rec.name.rfind('.'));
        bool is_conv = false;
        int stride = 0;
        if (!parse_stage(stage, &is_conv, &stride))
            throw DataError(path.string() + ": unrecognized layer name '" + rec.name + "'");
        int ndims = is_bias ? 1 : (is_conv ? 3 : 2);
        std::size_t count = 1;
        for (int d = 0; d < ndims; ++d) {
            int dim = 0;
            if (!(in >> dim) || dim < 1)
                throw DataError(path.string() + ": layer " + rec.name + ": bad dimensions");
            rec.dims.push_back(dim);
            count *= static_cast<std::size_t>(dim);
        }
        rec.values.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (!(in >> token))
                throw DataError(path.string() + ": layer " + rec.name + ": expected " +
                                std::to_string(count) + " values, got " + std::to_string(i));
            float f = 0.0f;
            auto res = std::from_chars(token.data(), token.data() + token.size(), f);
            if (res.ec != std::errc() || res.ptr != token.data() + token.size())
                throw DataError(path.string() + ": layer " + rec.name + ": bad value '" + token + "'");
            if (!std::isfinite(f))
                throw DataError(path.string() + ": layer " + rec.name + ": non-finite value");
            rec.values[i] = static_cast<double>(f);
        }
        records.push_back(std::move(rec));
    }
    if (records.empty() || records.size() % 2 != 0)
        throw DataError(path.string() + ": expected weight/bias tensor pairs");

    ModelWeights w;
    for (std::size_t r = 0; r < records.size(); r += 2) {
        const TensorRecord& weight = records[r];
        const TensorRecord& bias = records[r + 1];
        if (!weight.name.ends_with(".weight") || !bias.name.ends_with(".bias"))
            throw DataError(path.string() + ": tensors must alternate weight, bias");
        std::string stage = weight.name.substr(0, weight.name.rfind('.'));
        if (bias.name.substr(0, bias.name.rfind('.')) != stage)
            throw DataError(path.string() + ": bias '" + bias.name + "' does not match '" +
                            weight.name + "'");
        bool is_conv = false;
        int stride = 0;
        parse_stage(stage, &is_conv, &stride);
        bool last = r + 2 == records.size();
        LayerSpec spec;
        if (is_conv) {
            spec = LayerSpec::conv1d(stage.substr(0, stage.find('.')), weight.dims[1],
                                     weight.dims[0], weight.dims[2], stride, !last);
        } else {
            spec = LayerSpec::dense(stage, weight.dims[1], weight.dims[0], !last);
        }
        if (bias.dims[0] != spec.bias_count())
            throw DataError(path.string() + ": layer " + stage + ": bias size " +
                            std::to_string(bias.dims[0]) + " does not match " +
                            std::to_string(spec.bias_count()) + " outputs");
        w.arch.layers.push_back(spec);
        w.weights.push_back(weight.values);
        w.biases.push_back(bias.values);
    }
    try {
        w.arch.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return w;
}

} // namespace tgtm
