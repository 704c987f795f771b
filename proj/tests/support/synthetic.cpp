// Copyright 2026 The VoteCut Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vctest {

votecut::BinaryMask Scene::object_mask(std::size_t i) const {
  const int cell = side / cells;
  const Rect& r = objects.at(i);
  votecut::BinaryMask m(side, side);
  for (int y = r.row * cell; y < (r.row + r.rows) * cell; ++y) {
    for (int x = r.col * cell; x < (r.col + r.cols) * cell; ++x) m.set(y, x);
  }
  return m;
}

std::vector<std::vector<double>> prototypes(int num_objects, int dim) {
  if (dim < num_objects + 2) throw std::invalid_argument("feature dim too small for objects");
  std::vector<std::vector<double>> p(num_objects + 1, std::vector<double>(dim, 0.0));
  p[0][0] = -1.0;
  const double norm = std::sqrt(1.0 + 0.8 * 0.8);
  for (int i = 0; i < num_objects; ++i) {
    p[i + 1][0] = 1.0 / norm;
    p[i + 1][i + 2] = 0.8 / norm;
  }
  return p;
}

double min_prototype_distance(const std::vector<std::vector<double>>& protos) {
  double best = INFINITY;
  for (std::size_t a = 0; a < protos.size(); ++a) {
    for (std::size_t b = a + 1; b < protos.size(); ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < protos[a].size(); ++k) {
        s += (protos[a][k] - protos[b][k]) * (protos[a][k] - protos[b][k]);
      }
      best = std::min(best, std::sqrt(s));
    }
  }
  return best;
}

namespace {

bool fits(const std::vector<Rect>& placed, const Rect& r, int cells) {
  if (r.row < 1 || r.col < 1 || r.row + r.rows > cells - 1 || r.col + r.cols > cells - 1) {
    return false;
  }
  for (const Rect& o : placed) {
    // Require a gap of at least one cell on some axis.
    const bool apart_rows = r.row + r.rows < o.row || o.row + o.rows < r.row;
    const bool apart_cols = r.col + r.cols < o.col || o.col + o.cols < r.col;
    if (!apart_rows && !apart_cols) return false;
  }
  return true;
}

}  // namespace

Scene make_scene_with(std::mt19937_64& rng, std::vector<Rect> objects, const SceneOptions& opts) {
  Scene s;
  s.side = opts.side;
  s.cells = opts.cells;
  s.objects = std::move(objects);
  const int n_obj = static_cast<int>(s.objects.size());
  const int dim = std::max(opts.dim, n_obj + 2);
  const auto protos = prototypes(n_obj, dim);
  const double sigma = opts.noise_fraction * min_prototype_distance(protos);
  std::normal_distribution<double> noise(0.0, sigma);

  std::vector<int> cell_label(static_cast<std::size_t>(opts.cells) * opts.cells, 0);
  for (int i = 0; i < n_obj; ++i) {
    const Rect& r = s.objects[i];
    for (int y = r.row; y < r.row + r.rows; ++y) {
      for (int x = r.col; x < r.col + r.cols; ++x) cell_label[y * opts.cells + x] = i + 1;
    }
  }
  for (std::size_t m = 0; m < opts.grids.size(); ++m) {
    const int g = opts.grids[m];
    if (g % opts.cells != 0) throw std::invalid_argument("grid must be a multiple of cells");
    const int per = g / opts.cells;
    votecut::FeatureMap fm;
    fm.model_id = "m" + std::to_string(g);
    fm.grid_h = fm.grid_w = g;
    fm.dim = dim;
    fm.data.resize(static_cast<std::size_t>(g) * g * dim);
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) {
        const auto& p = protos[cell_label[(y / per) * opts.cells + x / per]];
        float* out = fm.data.data() + (static_cast<std::size_t>(y) * g + x) * dim;
        for (int k = 0; k < dim; ++k) out[k] = static_cast<float>(p[k] + noise(rng));
      }
    }
    s.maps.push_back(std::move(fm));
  }
  s.image = votecut::make_image(opts.side, opts.side);
  const int cell = opts.side / opts.cells;
  for (int y = 0; y < opts.side; ++y) {
    for (int x = 0; x < opts.side; ++x) {
      const int label = cell_label[(y / cell) * opts.cells + x / cell];
      std::uint8_t* px = s.image.at(y, x);
      if (label == 0) {
        px[0] = px[1] = px[2] = 96;
      } else {
        px[0] = static_cast<std::uint8_t>(40 + 50 * (label % 4));
        px[1] = static_cast<std::uint8_t>(200 - 30 * (label % 5));
        px[2] = static_cast<std::uint8_t>(60 + 35 * (label % 3));
      }
    }
  }
  return s;
}

Scene make_scene(std::mt19937_64& rng, const SceneOptions& opts) {
  std::uniform_int_distribution<int> count(opts.min_objects, opts.max_objects);
  std::uniform_int_distribution<int> extent(1, opts.max_object_cells);
  std::uniform_int_distribution<int> pos(1, opts.cells - 2);
  for (;;) {
    const int n = count(rng);
    std::vector<Rect> placed;
    for (int tries = 0; tries < 500 && static_cast<int>(placed.size()) < n; ++tries) {
      Rect r{pos(rng), pos(rng), extent(rng), extent(rng)};
      if (fits(placed, r, opts.cells)) placed.push_back(r);
    }
    if (static_cast<int>(placed.size()) == n) return make_scene_with(rng, std::move(placed), opts);
  }
}

void write_scene(const Scene& scene, const std::string& id, const std::filesystem::path& features_dir,
                 const std::filesystem::path& images_dir) {
  std::filesystem::create_directories(features_dir);
  for (const auto& fm : scene.maps) {
    votecut::write_feature_file(fm, features_dir / votecut::feature_file_name(id, fm.model_id));
  }
  if (!images_dir.empty()) {
    std::filesystem::create_directories(images_dir);
    votecut::write_ppm(scene.image, images_dir / (id + ".ppm"));
  }
}

}  // namespace vctest
