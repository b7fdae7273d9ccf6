/*
 * Copyright 2026 The PACL Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pacl/projector.h"

#include <cmath>

#include "pacl/error.h"
#include "pacl/loss.h"
#include "pacl/rng.h"

namespace pacl {
namespace {

DenseLayer UniformLayer(int d_in, int d_out, double bound, Rng& rng) {
  DenseLayer layer{Matrix(d_out, d_in), Matrix::Zero(1, d_out)};
  for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
    layer.weight.data()[i] = rng.Uniform(-bound, bound);
  }
  return layer;
}

double GlorotBound(int fan_in, int fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

Matrix Affine(const DenseLayer& layer, const Matrix& x) {
  Matrix y = x * layer.weight.transpose();
  y.rowwise() += layer.bias.row(0);
  return y;
}

}  // namespace

Projector Projector::Create(int d_in, int d_out, uint64_t seed,
                            const ProjectorInit& init) {
  if (d_in <= 0 || d_out <= 0 || init.hidden_dim < 0) {
    throw Error(ErrorCode::kBadDims, "projector dims must be positive");
  }
  Projector p;
  if (init.identity) {
    if (d_in != d_out || init.hidden_dim != 0) {
      throw Error(ErrorCode::kBadDims,
                  "identity projector needs d_in == d_out and no hidden layer");
    }
    p.layers_.push_back({Matrix::Identity(d_out, d_in), Matrix::Zero(1, d_out)});
    return p;
  }
  Rng rng(seed);
  if (init.hidden_dim == 0) {
    const double a = init.uniform_bound.value_or(GlorotBound(d_in, d_out));
    p.layers_.push_back(UniformLayer(d_in, d_out, a, rng));
  } else {
    const int h = init.hidden_dim;
    p.layers_.push_back(
        UniformLayer(d_in, h, init.uniform_bound.value_or(GlorotBound(d_in, h)), rng));
    p.layers_.push_back(
        UniformLayer(h, d_out, init.uniform_bound.value_or(GlorotBound(h, d_out)), rng));
  }
  for (const DenseLayer& layer : p.layers_) {
    if (layer.weight.isZero(0.0)) {
      throw Error(ErrorCode::kDegenerateInit,
                  "all-zero projector weights cannot produce unit-norm output");
    }
  }
  return p;
}

int Projector::input_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols());
}

int Projector::output_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

Matrix Projector::ForwardRaw(const Matrix& x) const {
  if (layers_.empty() || x.cols() != input_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "projector expects dim " + std::to_string(input_dim()) + ", got " +
                    std::to_string(x.cols()));
  }
  if (!has_hidden()) return Affine(layers_[0], x);
  return Affine(layers_[1], Affine(layers_[0], x).array().tanh().matrix());
}

Matrix Projector::Forward(const Matrix& x) const {
  return L2NormalizeRows(ForwardRaw(x));
}

Matrix Projector::Forward(const Matrix& x, Cache* cache) const {
  if (layers_.empty() || x.cols() != input_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "projector expects dim " + std::to_string(input_dim()) + ", got " +
                    std::to_string(x.cols()));
  }
  cache->input = x;
  if (has_hidden()) {
    cache->hidden_pre = Affine(layers_[0], x);
    cache->hidden = cache->hidden_pre.array().tanh().matrix();
    cache->output = Affine(layers_[1], cache->hidden);
  } else {
    cache->hidden_pre.resize(0, 0);
    cache->hidden.resize(0, 0);
    cache->output = Affine(layers_[0], x);
  }
  return L2NormalizeRows(cache->output);
}

std::vector<Matrix> Projector::Backward(const Cache& cache,
                                        const Matrix& d_normalized) const {
  const Matrix d_out = L2NormalizeRowsBackward(cache.output, d_normalized);
  std::vector<Matrix> grads;
  if (!has_hidden()) {
    grads.push_back(d_out.transpose() * cache.input);
    grads.push_back(d_out.colwise().sum());
    return grads;
  }
  const Matrix d_hidden = d_out * layers_[1].weight;
  const Matrix d_pre =
      (d_hidden.array() * (1.0 - cache.hidden.array().square())).matrix();
  grads.push_back(d_pre.transpose() * cache.input);
  grads.push_back(d_pre.colwise().sum());
  grads.push_back(d_out.transpose() * cache.hidden);
  grads.push_back(d_out.colwise().sum());
  return grads;
}

std::vector<Matrix*> Projector::Parameters() {
  std::vector<Matrix*> out;
  for (DenseLayer& layer : layers_) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  return out;
}

std::vector<const Matrix*> Projector::Parameters() const {
  std::vector<const Matrix*> out;
  for (const DenseLayer& layer : layers_) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  return out;
}

std::vector<std::string> Projector::ParameterNames() const {
  std::vector<std::string> out;
  for (size_t i = 0; i < layers_.size(); ++i) {
    out.push_back("layer" + std::to_string(i) + ".weight");
    out.push_back("layer" + std::to_string(i) + ".bias");
  }
  return out;
}

bool Projector::AllFinite() const {
  for (const Matrix* p : Parameters()) {
    if (!p->allFinite()) return false;
  }
  return true;
}

bool Projector::operator==(const Projector& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (size_t i = 0; i < layers_.size(); ++i) {
    const auto& a = layers_[i];
    const auto& b = other.layers_[i];
    if (a.weight.rows() != b.weight.rows() || a.weight.cols() != b.weight.cols() ||
        a.weight != b.weight || a.bias != b.bias) {
      return false;
    }
  }
  return true;
}

Projectors InitProjectors(int d_img, int d_txt, int d_proj, uint64_t seed,
                          const ProjectorInit& init) {
  const uint64_t base = DeriveSeed(seed, SeedStream::kProjectorInit);
  ProjectorInit text_init = init;
  // The identity override only makes sense where dims agree.
  if (init.identity && d_txt != d_proj) text_init.identity = false;
  ProjectorInit image_init = init;
  if (init.identity && d_img != d_proj) image_init.identity = false;
  return Projectors{Projector::Create(d_img, d_proj, DeriveSeed(base, 0), image_init),
                    Projector::Create(d_txt, d_proj, DeriveSeed(base, 1), text_init)};
}

}  // namespace pacl
