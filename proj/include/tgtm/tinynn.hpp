#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tgtm/histogram.hpp"
#include "tgtm/tone_curve.hpp"

namespace tgtm {

/// Hard budgets every shipped architecture must satisfy.
inline constexpr int kMaxParams = 1100;
inline constexpr int kMaxForwardFlops = 9000;

struct LayerSpec {
    enum class Kind { Conv1d, Dense };
    Kind kind = Kind::Dense;
    std::string name;
    // Conv1d: weight [out_ch, in_ch, kernel], valid padding, given stride.
    int in_ch = 0, out_ch = 0, kernel = 0, stride = 0;
    // Dense: weight [out_dim, in_dim].
    int in_dim = 0, out_dim = 0;
    bool relu = false;

    static LayerSpec conv1d(std::string name, int in_ch, int out_ch, int kernel, int stride,
                            bool relu);
    static LayerSpec dense(std::string name, int in_dim, int out_dim, bool relu);
    int weight_count() const;
    int bias_count() const;
};

/// Ordered layer stack from the 2x256 histogram tensor to 4 raw outputs.
struct Architecture {
    std::vector<LayerSpec> layers;

    /// The shipped topology: two strided 1-D convolutions over the histogram
    /// axis, flatten, and two dense layers. 1,067 parameters, 8,778 FLOPs
    /// under the 2-FLOPs-per-MAC convention.
    static Architecture reference();

    int param_count() const;
    int forward_flops() const;
    /// Checks layer composition (2x256 in, 4 out) and both budgets.
    void validate() const;
};

struct ModelWeights {
    Architecture arch;
    std::vector<std::vector<double>> weights; // per layer, row-major
    std::vector<std::vector<double>> biases;  // per layer

    int param_count() const { return arch.param_count(); }
    int forward_flops() const { return arch.forward_flops(); }
};

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

/// Glorot-uniform initialization, zero biases, snapped to float32 values.
ModelWeights init_weights(const Architecture& arch, uint64_t seed);

/// Raw 4-vector network output for one histogram pair.
std::array<double, 4> forward(const ModelWeights& w, const HistogramPair& hist);

/// Squashes raw outputs onto the valid parameter ranges; gain2 is mapped in
/// the log domain. Finite inputs always yield in-range parameters.
ToneCurveParams raw_to_params(const std::array<double, 4>& raw);

/// Range-normalized mean absolute error over the four parameters plus
/// cil_weight times the absolute difference of the gain2 curve integrals.
double loss(const ToneCurveParams& pred, const ToneCurveParams& gt, double cil_weight);

/// Exact reverse-mode gradients of loss(raw_to_params(forward(w, hist)), gt)
/// with respect to every weight and bias. Returns the loss value through
/// loss_out when non-null.
Gradients backward(const ModelWeights& w, const HistogramPair& hist, const ToneCurveParams& gt,
                   double cil_weight, double* loss_out = nullptr);

struct AdamState {
    std::vector<std::vector<double>> m_weights, v_weights;
    std::vector<std::vector<double>> m_biases, v_biases;
    int64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_weights(const ModelWeights& w);
};

/// One bias-corrected Adam update; weights are snapped back to float32
/// values afterwards so any reachable state serializes losslessly.
void adam_step(ModelWeights& w, const Gradients& grads, AdamState& state, double lr);

/// Reduce-on-plateau: after more than `patience` consecutive epochs without
/// a new best validation loss, multiplies the rate by `factor` (floored at
/// min_lr) and restarts best-loss tracking.
class PlateauScheduler {
public:
    PlateauScheduler(double initial_lr, double factor, int patience, double min_lr);
    /// Feed one epoch's validation loss; returns the rate for the next epoch.
    double observe(double val_loss);
    double lr() const { return lr_; }

private:
    double lr_;
    double factor_;
    double min_lr_;
    int patience_;
    double best_;
    int bad_epochs_ = 0;
};

struct TrainConfig {
    double learning_rate = 1e-4;
    int batch_size = 16;
    double plateau_factor = 0.3;
    int plateau_patience = 6;
    double min_lr = 1e-8;
    int max_epochs = 97;
    uint64_t seed = 0;
    double cil_weight = 1.0;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double lr = 0.0;
};

struct TrainResult {
    ModelWeights best;      // weights at the best validation loss
    double best_val_loss = 0.0;
    std::vector<EpochStats> history;
};

/// Seeded mini-batch training with Adam and plateau scheduling. Validation
/// runs once per epoch; the returned weights are the best-validation
/// snapshot. max_epochs = 0 performs a validation-only pass.
struct TrainSample;
TrainResult train(const std::vector<TrainSample>& train_set,
                  const std::vector<TrainSample>& val_set, const TrainConfig& cfg);

/// Mean loss of the network over a sample set, forward passes only.
double evaluate_loss(const ModelWeights& w, const std::vector<TrainSample>& samples,
                     double cil_weight);

/// Line-oriented text format, header "TGTM-WEIGHTS v1", one "layer <name>
/// <dims...>" record per tensor followed by its values as shortest
/// round-trip float32 decimals. Conv strides ride in the tensor names
/// (e.g. conv1.s4.weight), so a file fully determines the architecture.
void save_weights(const ModelWeights& w, const std::filesystem::path& path);
ModelWeights load_weights(const std::filesystem::path& path);

} // namespace tgtm
