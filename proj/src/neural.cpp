// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/neural.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "wcsee/error.hpp"

namespace wcsee::nn {

Mlp::Mlp(std::vector<int> widths) : widths_(std::move(widths)) {
    if (widths_.size() < 2) throw DimensionMismatch("Mlp needs at least an input and an output width");
    Eigen::Index total = 0;
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
        if (widths_[l] <= 0 || widths_[l + 1] <= 0) throw DimensionMismatch("Mlp widths must be positive");
        offsets_.push_back(total);
        total += static_cast<Eigen::Index>(widths_[l + 1]) * (widths_[l] + 1);
    }
    params_ = Vec::Zero(total);
}

void Mlp::init(RngStream& rng) {
    for (int l = 0; l < layers(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(widths_[l]));
        auto w = weight(l);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-bound, bound);
        auto b = bias(l);
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.uniform(-bound, bound);
    }
}

Eigen::Map<Mat> Mlp::weight(int layer) {
    return {params_.data() + offsets_[layer], widths_[layer + 1], widths_[layer]};
}

Eigen::Map<const Mat> Mlp::weight(int layer) const {
    return {params_.data() + offsets_[layer], widths_[layer + 1], widths_[layer]};
}

Eigen::Map<Vec> Mlp::bias(int layer) {
    const Eigen::Index at = offsets_[layer] + static_cast<Eigen::Index>(widths_[layer + 1]) * widths_[layer];
    return {params_.data() + at, widths_[layer + 1]};
}

Eigen::Map<const Vec> Mlp::bias(int layer) const {
    const Eigen::Index at = offsets_[layer] + static_cast<Eigen::Index>(widths_[layer + 1]) * widths_[layer];
    return {params_.data() + at, widths_[layer + 1]};
}

Mat Mlp::forward(const Mat& x) const {
    Tape unused;
    return forward(x, unused);
}

Mat Mlp::forward(const Mat& x, Tape& tape) const {
    if (widths_.empty() || x.rows() != input_dim()) {
        throw DimensionMismatch("Mlp::forward: input has " + std::to_string(x.rows()) + " rows");
    }
    tape.inputs.clear();
    Mat h = x;
    for (int l = 0; l < layers(); ++l) {
        tape.inputs.push_back(h);
        Mat z = weight(l) * h;
        z.colwise() += bias(l);
        if (l + 1 < layers()) z = z.cwiseMax(0.0);
        h = std::move(z);
    }
    return h;
}

Mat Mlp::backward(const Tape& tape, const Mat& dy, Vec& grad) const {
    if (grad.size() != params_.size()) grad = Vec::Zero(params_.size());
    Mat delta = dy;
    for (int l = layers() - 1; l >= 0; --l) {
        const Mat& in = tape.inputs[l];
        const Eigen::Index rows = widths_[l + 1];
        const Eigen::Index cols = widths_[l];
        Eigen::Map<Mat> gw(grad.data() + offsets_[l], rows, cols);
        Eigen::Map<Vec> gb(grad.data() + offsets_[l] + rows * cols, rows);
        gw.noalias() += delta * in.transpose();
        gb += delta.rowwise().sum();
        Mat back = weight(l).transpose() * delta;
        // The input of layer l is the ReLU output of layer l-1.
        if (l > 0) back = back.cwiseProduct((in.array() > 0.0).cast<double>().matrix());
        delta = std::move(back);
    }
    return delta;
}

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'C', 'S', 'E', 'E', 'N', 'N', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(out, bits);
}

std::uint64_t get_bytes(std::istream& in, int n) {
    std::array<unsigned char, 8> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), n)) throw ParseError("truncated checkpoint");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in) {
    const std::uint64_t bits = get_bytes(in, 8);
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

// Layout: magic "WCSEENN1", u32 number of widths, u32 widths, u64 parameter
// count, f64 parameters. Little-endian throughout.
void Mlp::save(std::ostream& out) const {
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, static_cast<std::uint32_t>(widths_.size()));
    for (int w : widths_) put_u32(out, static_cast<std::uint32_t>(w));
    put_u64(out, static_cast<std::uint64_t>(params_.size()));
    for (Eigen::Index i = 0; i < params_.size(); ++i) put_f64(out, params_(i));
}

Mlp Mlp::load(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ParseError("not a network checkpoint");
    const auto count = static_cast<std::uint32_t>(get_bytes(in, 4));
    if (count < 2 || count > 64) throw ParseError("checkpoint has an implausible layer count");
    std::vector<int> widths(count);
    for (auto& w : widths) w = static_cast<int>(get_bytes(in, 4));
    Mlp net(widths);
    const std::uint64_t n = get_bytes(in, 8);
    if (n != net.size()) throw ParseError("checkpoint parameter count does not match its widths");
    for (Eigen::Index i = 0; i < net.params_.size(); ++i) net.params_(i) = get_f64(in);
    return net;
}

void polyak(Mlp& target, const Mlp& online, double tau) {
    if (target.size() != online.size()) throw DimensionMismatch("polyak: shapes differ");
    if (tau == 1.0) {
        target.params() = online.params();
        return;
    }
    target.params() = tau * online.params() + (1.0 - tau) * target.params();
}

Adam::Adam(std::size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(Vec::Zero(static_cast<Eigen::Index>(n))), v_(Vec::Zero(static_cast<Eigen::Index>(n))) {}

void Adam::step(Vec& params, const Vec& grad) {
    if (grad.size() != m_.size() || params.size() != m_.size()) throw DimensionMismatch("Adam: size mismatch");
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

SquashedBatch squashed_forward(const Mat& mean, const Mat& raw_log_std, const Mat& noise) {
    if (mean.rows() != raw_log_std.rows() || mean.cols() != raw_log_std.cols() || mean.rows() != noise.rows() ||
        mean.cols() != noise.cols()) {
        throw DimensionMismatch("squashed_forward: shape mismatch");
    }
    SquashedBatch out;
    out.noise = noise;
    out.log_std = raw_log_std.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
    out.in_range = ((raw_log_std.array() >= kLogStdMin) && (raw_log_std.array() <= kLogStdMax)).cast<double>();
    const Mat u = mean + out.log_std.array().exp().matrix().cwiseProduct(noise);
    out.action = u.array().tanh().matrix();
    const double half_log_2pi = 0.5 * std::log(kTwoPi);
    out.log_prob = Vec::Zero(mean.cols());
    for (Eigen::Index c = 0; c < mean.cols(); ++c) {
        double lp = 0.0;
        for (Eigen::Index r = 0; r < mean.rows(); ++r) {
            const double a = out.action(r, c);
            lp += -0.5 * noise(r, c) * noise(r, c) - out.log_std(r, c) - half_log_2pi -
                  std::log(1.0 - a * a + kSquashEps);
        }
        out.log_prob(c) = lp;
    }
    return out;
}

void squashed_backward(const SquashedBatch& head, const Mat& d_action, const Vec& d_log_prob, Mat& d_mean,
                       Mat& d_raw_log_std) {
    const Eigen::Index rows = head.action.rows();
    const Eigen::Index cols = head.action.cols();
    d_mean.resize(rows, cols);
    d_raw_log_std.resize(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double a = head.action(r, c);
            const double one_m = 1.0 - a * a;
            const double du = d_action(r, c) * one_m + d_log_prob(c) * 2.0 * a * one_m / (one_m + kSquashEps);
            d_mean(r, c) = du;
            const double sigma = std::exp(head.log_std(r, c));
            d_raw_log_std(r, c) = head.in_range(r, c) * (du * sigma * head.noise(r, c) - d_log_prob(c));
        }
    }
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw DomainError("replay buffer capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
        return;
    }
    data_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= data_.size()) throw DomainError("replay index out of range");
    return data_[(head_ + i) % data_.size()];
}

Batch ReplayBuffer::sample(std::size_t n, RngStream& rng) const {
    if (n > data_.size()) throw DomainError("cannot sample more transitions than stored");
    // Floyd's algorithm; picks stay in draw order so the batch is reproducible.
    std::vector<std::size_t> picks;
    picks.reserve(n);
    const std::size_t size = data_.size();
    for (std::size_t j = size - n; j < size; ++j) {
        const auto r = static_cast<std::size_t>(rng.below(j + 1));
        if (std::find(picks.begin(), picks.end(), r) == picks.end()) {
            picks.push_back(r);
        } else {
            picks.push_back(j);
        }
    }
    std::vector<const Transition*> rows;
    rows.reserve(n);
    for (std::size_t i : picks) rows.push_back(&data_[i]);
    return make_batch(rows);
}

Batch make_batch(const std::vector<const Transition*>& rows) {
    Batch b;
    if (rows.empty()) return b;
    const auto n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index ds = rows.front()->state.size();
    const Eigen::Index da = rows.front()->action.size();
    b.state.resize(ds, n);
    b.next_state.resize(ds, n);
    b.action.resize(da, n);
    b.reward.resize(n);
    b.done.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Transition& t = *rows[static_cast<std::size_t>(i)];
        b.state.col(i) = t.state;
        b.next_state.col(i) = t.next_state;
        b.action.col(i) = t.action;
        b.reward(i) = t.reward;
        b.done(i) = t.done;
    }
    return b;
}

void save_checkpoint(std::ostream& out, const std::vector<const Mlp*>& nets) {
    put_u32(out, static_cast<std::uint32_t>(nets.size()));
    for (const Mlp* n : nets) n->save(out);
}

std::vector<Mlp> load_checkpoint(std::istream& in) {
    const auto count = static_cast<std::uint32_t>(get_bytes(in, 4));
    if (count > 1024) throw ParseError("checkpoint has an implausible network count");
    std::vector<Mlp> nets;
    for (std::uint32_t i = 0; i < count; ++i) nets.push_back(Mlp::load(in));
    return nets;
}

}  // namespace wcsee::nn
