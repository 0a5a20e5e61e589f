// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_NEURAL_HPP
#define WCSEE_NEURAL_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "wcsee/rng.hpp"
#include "wcsee/types.hpp"

namespace wcsee::nn {

// Fully connected network, ReLU on hidden layers, linear output. All
// parameters live in one flat vector: for each layer the weight matrix
// (out x in, column-major) followed by the bias.
class Mlp {
  public:
    Mlp() = default;
    explicit Mlp(std::vector<int> widths);

    // Weights and biases uniform in +-1/sqrt(fan_in).
    void init(RngStream& rng);

    const std::vector<int>& widths() const { return widths_; }
    int input_dim() const { return widths_.front(); }
    int output_dim() const { return widths_.back(); }
    int layers() const { return static_cast<int>(widths_.size()) - 1; }

    Vec& params() { return params_; }
    const Vec& params() const { return params_; }
    std::size_t size() const { return static_cast<std::size_t>(params_.size()); }

    Eigen::Map<Mat> weight(int layer);
    Eigen::Map<const Mat> weight(int layer) const;
    Eigen::Map<Vec> bias(int layer);
    Eigen::Map<const Vec> bias(int layer) const;

    // Inputs of every layer, kept for the backward pass.
    struct Tape {
        std::vector<Mat> inputs;
    };

    // Columns are samples. Throws DimensionMismatch.
    Mat forward(const Mat& x) const;
    Mat forward(const Mat& x, Tape& tape) const;

    // Adds dL/dparams into grad (same layout as params()) and returns dL/dx.
    Mat backward(const Tape& tape, const Mat& dy, Vec& grad) const;

    void save(std::ostream& out) const;
    static Mlp load(std::istream& in);

  private:
    std::vector<int> widths_;
    std::vector<Eigen::Index> offsets_;
    Vec params_;
};

// target <- tau * online + (1 - tau) * target.
void polyak(Mlp& target, const Mlp& online, double tau);

class Adam {
  public:
    Adam() = default;
    Adam(std::size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    void step(Vec& params, const Vec& grad);
    double lr() const { return lr_; }
    void set_lr(double lr) { lr_ = lr; }
    long steps() const { return t_; }

  private:
    double lr_ = 1e-3;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    long t_ = 0;
    Vec m_, v_;
};

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kSquashEps = 1e-6;

// a = tanh(mean + exp(log_std) * noise), batched over columns.
struct SquashedBatch {
    Mat action;
    Vec log_prob;
    Mat log_std;   // after clamping
    Mat noise;
    Mat in_range;  // 1 where the raw log-std was inside the clamp
};

SquashedBatch squashed_forward(const Mat& mean, const Mat& raw_log_std, const Mat& noise);

// Chain rule through the head: given dL/daction and dL/dlog_prob, writes
// dL/dmean and dL/draw_log_std.
void squashed_backward(const SquashedBatch& head, const Mat& d_action, const Vec& d_log_prob,
                       Mat& d_mean, Mat& d_raw_log_std);

struct Transition {
    Vec state;
    Vec action;
    double reward = 0.0;
    Vec next_state;
    double done = 0.0;
};

struct Batch {
    Mat state;       // columns are samples
    Mat action;
    Vec reward;
    Mat next_state;
    Vec done;
};

// FIFO ring of transitions.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity = 100000);

    void push(Transition t);
    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    // i = 0 is the oldest stored transition.
    const Transition& at(std::size_t i) const;

    // n distinct transitions, uniformly at random. Throws DomainError if n > size().
    Batch sample(std::size_t n, RngStream& rng) const;

  private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<Transition> data_;
};

Batch make_batch(const std::vector<const Transition*>& rows);

// Several networks in one file: u32 count, then each network as written by Mlp::save.
void save_checkpoint(std::ostream& out, const std::vector<const Mlp*>& nets);
std::vector<Mlp> load_checkpoint(std::istream& in);

}  // namespace wcsee::nn

#endif
