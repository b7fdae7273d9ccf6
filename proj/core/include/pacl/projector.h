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

#ifndef PACL_PROJECTOR_H_
#define PACL_PROJECTOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pacl/matrix.h"

namespace pacl {

// Affine layer y = x W^T + b.
struct DenseLayer {
  Matrix weight;  // out x in
  Matrix bias;    // 1 x out
};

struct ProjectorInit {
  // Width of an optional tanh hidden layer; 0 means a single affine layer.
  int hidden_dim = 0;
  // Identity weights and zero bias; requires d_in == d_out and no hidden layer.
  bool identity = false;
  // Overrides the Glorot bound sqrt(6 / (fan_in + fan_out)).
  std::optional<double> uniform_bound;
};

// Trainable head: affine map (optionally affine-tanh-affine) followed by
// row-wise L2 normalization.
class Projector {
 public:
  Projector() = default;

  // Weights uniform in (-a, a), bias zero. Throws kBadDims on nonpositive
  // sizes, kDegenerateInit when every weight would be zero.
  static Projector Create(int d_in, int d_out, uint64_t seed,
                          const ProjectorInit& init = {});

  int input_dim() const;
  int output_dim() const;
  bool has_hidden() const { return layers_.size() > 1; }

  struct Cache {
    Matrix input;
    Matrix hidden_pre;  // empty without a hidden layer
    Matrix hidden;
    Matrix output;      // before normalization
  };

  // Unit-norm rows. Throws kDimMismatch / kNormalizationError.
  Matrix Forward(const Matrix& x) const;
  Matrix Forward(const Matrix& x, Cache* cache) const;
  // Affine part only, before normalization.
  Matrix ForwardRaw(const Matrix& x) const;

  // Parameter gradients (same order as Parameters()) from dL/dz.
  std::vector<Matrix> Backward(const Cache& cache, const Matrix& d_normalized) const;

  std::vector<Matrix*> Parameters();
  std::vector<const Matrix*> Parameters() const;
  // "layer0.weight", "layer0.bias", ...
  std::vector<std::string> ParameterNames() const;

  bool AllFinite() const;
  bool operator==(const Projector& other) const;

 private:
  std::vector<DenseLayer> layers_;
};

struct Projectors {
  Projector visual;
  Projector textual;

  bool operator==(const Projectors&) const = default;
};

Projectors InitProjectors(int d_img, int d_txt, int d_proj, uint64_t seed,
                          const ProjectorInit& init = {});

}  // namespace pacl

#endif  // PACL_PROJECTOR_H_
