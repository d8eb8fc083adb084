// core/include/cabkws/model/params.h

// Copyright 2026  The cabkws Authors

// See LICENSE at the repository root for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CABKWS_MODEL_PARAMS_H_
#define CABKWS_MODEL_PARAMS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cabkws/common/tensor.h"
#include "cabkws/model/config.h"

namespace cabkws {

enum class InitKind { kUniform, kZeros, kOnes };

// One learnable tensor. Vectors are stored as 1 x n.
struct TensorSpec {
  std::string name;
  int rows = 1;
  int cols = 1;
  bool is_vector = false;
  std::size_t offset = 0;
  InitKind init = InitKind::kZeros;
  int fan_in = 0;
  int fan_out = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

// Tensor ids of the network, resolved once per layout.
struct ParamIds {
  struct Conv {
    int weight, bias;
  };
  struct Residual {
    Conv conv1;
    int norm1_scale, norm1_shift;
    Conv conv2;
    int norm2_scale, norm2_shift;
  };
  struct Encoder {
    int ln1_gamma, ln1_beta;
    int qkv_weight, qkv_bias;
    int out_weight, out_bias;
    int ln2_gamma, ln2_beta;
    int fc1_weight, fc1_bias;
    int fc2_weight, fc2_bias;
  };
  std::vector<Conv> conv;
  std::vector<Residual> residual;
  int pool_weight, pool_bias;
  std::vector<Encoder> encoder;
  int bn_weight, bn_bias;
  int proj_weight, proj_bias;
  int recon_weight, recon_bias;
};

// Fixed enumeration of every tensor, in this order:
//   conv{l}.weight [k*k*Cin, C], conv{l}.bias
//   res{b}.conv1.weight/bias, res{b}.norm1.scale/shift,
//   res{b}.conv2.weight/bias, res{b}.norm2.scale/shift
//   pool.weight [C, bins], pool.bias [C]
//   enc{m}.ln1.gamma/beta, enc{m}.attn.qkv.weight [D, 3D]/bias,
//   enc{m}.attn.out.weight [D, D]/bias, enc{m}.ln2.gamma/beta,
//   enc{m}.ffn.fc1.weight [D, F]/bias, enc{m}.ffn.fc2.weight [F, D]/bias
//   bn.weight [r*D, U_bn]/bias, proj.weight [U_bn, S]/bias,
//   recon.weight [U_bn, U_x]/bias
// Convolution weight rows are indexed (ky * k + kx) * Cin + cin.
class ParamLayout {
 public:
  explicit ParamLayout(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  const std::vector<TensorSpec>& tensors() const { return tensors_; }
  const TensorSpec& tensor(int id) const { return tensors_.at(static_cast<std::size_t>(id)); }
  std::size_t total_size() const { return total_; }
  int num_tensors() const { return static_cast<int>(tensors_.size()); }
  // -1 if absent.
  int Find(const std::string& name) const;
  const ParamIds& ids() const { return ids_; }

 private:
  int Add(const std::string& name, int rows, int cols, bool is_vector, InitKind init,
          int fan_in = 0, int fan_out = 0);

  ModelConfig config_;
  std::vector<TensorSpec> tensors_;
  std::size_t total_ = 0;
  ParamIds ids_{};
};

// Flat parameter (or gradient) buffer laid out by a ParamLayout.
template <typename T>
class ParamStore {
 public:
  ParamStore() = default;
  explicit ParamStore(std::shared_ptr<const ParamLayout> layout)
      : layout_(std::move(layout)), data_(layout_->total_size(), T(0)) {}

  const ParamLayout& layout() const { return *layout_; }
  std::shared_ptr<const ParamLayout> layout_ptr() const { return layout_; }

  MatMap<T> operator[](int id) {
    const auto& t = layout_->tensor(id);
    return MatMap<T>(data_.data() + t.offset, t.rows, t.cols);
  }
  ConstMatMap<T> operator[](int id) const {
    const auto& t = layout_->tensor(id);
    return ConstMatMap<T>(data_.data() + t.offset, t.rows, t.cols);
  }

  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }
  std::size_t size() const { return data_.size(); }

  void SetZero() { std::fill(data_.begin(), data_.end(), T(0)); }

  template <typename U>
  ParamStore<U> Cast() const {
    ParamStore<U> out(layout_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.flat()[i] = static_cast<U>(data_[i]);
    return out;
  }

 private:
  std::shared_ptr<const ParamLayout> layout_;
  // Aligned so that vectorized reductions over a tensor see the same
  // alignment, and round the same way, wherever the buffer lands.
  std::vector<T, Eigen::aligned_allocator<T>> data_;
};

// Weights ~ Uniform(-s, s) with s = sqrt(6 / (fan_in + fan_out)); biases and
// norm shifts 0, norm scales 1. Each tensor draws from its own seeded stream.
template <typename T>
ParamStore<T> InitParams(const ModelConfig& config, uint64_t seed);

}  // namespace cabkws

#endif  // CABKWS_MODEL_PARAMS_H_
