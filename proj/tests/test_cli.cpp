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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "synthetic.hpp"
#include "votecut/featureio.hpp"

namespace fs = std::filesystem;

namespace {

// Runs the CLI with stdout and stderr captured to files in `dir`.
int cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string("\"") + VOTECUT_CLI + "\" " + args + " >\"" +
                          (dir / "stdout.txt").string() + "\" 2>\"" + (dir / "stderr.txt").string() +
                          "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

// Two scenes with features and images, written once per test binary.
const fs::path& fixture() {
  static const fs::path root = [] {
    const fs::path r = vctest::scratch_dir("cli_fixture");
    std::mt19937_64 rng(131);
    vctest::SceneOptions opts;
    opts.side = 120;
    for (const char* id : {"alpha", "beta", "gamma"}) {
      vctest::write_scene(vctest::make_scene(rng, opts), id, r / "features", r / "images");
    }
    return r;
  }();
  return root;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  const fs::path dir = vctest::scratch_dir("cli_usage");
  CHECK(cli("", dir) == 2);
  CHECK(cli("frobnicate", dir) == 2);
  CHECK(cli("run --out " + q(dir / "o.json"), dir) == 2);
  CHECK(cli("run --features " + q(dir / "missing") + " --out " + q(dir / "o.json"), dir) == 2);
  fs::create_directories(dir / "empty");
  CHECK(cli("run --features " + q(dir / "empty") + " --out " + q(dir / "o.json"), dir) == 2);
  CHECK(!slurp(dir / "stderr.txt").empty());
  CHECK(cli("run --features " + q(fixture() / "features") + " --out " + q(dir / "o.json") +
                " --tau-m 1.5",
            dir) == 2);
  CHECK(cli("run --features " + q(fixture() / "features") + " --out " + q(dir / "o.json") +
                " --crf maybe",
            dir) == 2);
  CHECK(cli("eval --pred " + q(dir / "nope.json") + " --gt " + q(dir / "nope.json"), dir) == 2);
  CHECK_FALSE(fs::exists(dir / "o.json"));
  CHECK(cli("--version", dir) == 0);
  CHECK(slurp(dir / "stdout.txt").find("0.1.0") != std::string::npos);
}

TEST_CASE("run output is byte-identical across worker counts") {
  const fs::path dir = vctest::scratch_dir("cli_jobs");
  std::string first;
  for (int jobs : {1, 2, 8}) {
    const fs::path out = dir / ("out" + std::to_string(jobs) + ".json");
    CHECK(cli("run --features " + q(fixture() / "features") + " --out " + q(out) +
                  " --crf off -q --jobs " + std::to_string(jobs),
              dir) == 0);
    const std::string text = slurp(out);
    CHECK(!text.empty());
    if (first.empty()) first = text;
    CHECK(text == first);
  }
  const votecut::AnnotationSet set = votecut::read_annotations(dir / "out1.json");
  CHECK(set.images.size() == 3);
  CHECK(!set.annotations.empty());
}

TEST_CASE("a corrupted feature file is a partial failure") {
  const fs::path dir = vctest::scratch_dir("cli_partial");
  fs::copy(fixture() / "features", dir / "features");
  {
    std::ofstream bad(dir / "features" / "beta.m30.vcft", std::ios::binary | std::ios::trunc);
    bad << "VCFT";
  }
  CHECK(cli("run --features " + q(dir / "features") + " --out " + q(dir / "o.json") + " --crf off",
            dir) == 1);
  CHECK(slurp(dir / "stderr.txt").find("beta") != std::string::npos);
  const votecut::AnnotationSet set = votecut::read_annotations(dir / "o.json");
  REQUIRE(set.images.size() == 2);
  CHECK(set.images[0].id == "alpha");
  CHECK(set.images[1].id == "gamma");
}

TEST_CASE("run flags reach the pipeline") {
  const fs::path dir = vctest::scratch_dir("cli_flags");
  CHECK(cli("run --features " + q(fixture() / "features") + " --out " + q(dir / "o.json") +
                " --crf off --min-score 0.5 --max-instances 2 --models m40,m60",
            dir) == 0);
  const votecut::AnnotationSet set = votecut::read_annotations(dir / "o.json");
  std::map<std::string, int> per_image;
  for (const auto& a : set.annotations) {
    CHECK(a.score >= 0.5);
    ++per_image[a.image_id];
  }
  for (const auto& [id, n] : per_image) CHECK(n <= 2);

  // A config file is read first; flags override it.
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "max_instances = 1\ncrf = off\n";
  }
  CHECK(cli("run --features " + q(fixture() / "features") + " --out " + q(dir / "c.json") +
                " --config " + q(dir / "run.cfg"),
            dir) == 0);
  std::map<std::string, int> capped;
  for (const auto& a : votecut::read_annotations(dir / "c.json").annotations) ++capped[a.image_id];
  for (const auto& [id, n] : capped) CHECK(n == 1);
}

TEST_CASE("eval, filter and render") {
  const fs::path dir = vctest::scratch_dir("cli_tools");
  const fs::path pred = dir / "pred.json";
  REQUIRE(cli("run --features " + q(fixture() / "features") + " --images " +
                  q(fixture() / "images") + " --out " + q(pred) + " --crf off",
              dir) == 0);

  CHECK(cli("eval --pred " + q(pred) + " --gt " + q(pred) + " --iou mask --report " +
                q(dir / "report.json"),
            dir) == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["ap"] == 1.0);
  CHECK(report["iou_type"] == "mask");
  CHECK(slurp(dir / "stdout.txt").find("AP50") != std::string::npos);
  CHECK(cli("eval --pred " + q(pred) + " --gt " + q(pred) + " --iou polygon", dir) == 2);

  CHECK(cli("filter --in " + q(pred) + " --out " + q(dir / "kept.json") + " --min-score 0.6",
            dir) == 0);
  const votecut::AnnotationSet all = votecut::read_annotations(pred);
  const votecut::AnnotationSet kept = votecut::read_annotations(dir / "kept.json");
  std::size_t expect = 0;
  for (const auto& a : all.annotations) expect += a.score >= 0.6;
  CHECK(kept.annotations.size() == expect);
  CHECK(kept.images == all.images);

  const fs::path overlay = dir / "alpha_overlay.ppm";
  CHECK(cli("render --image " + q(fixture() / "images" / "alpha.ppm") + " --pred " + q(pred) +
                " --out " + q(overlay),
            dir) == 0);
  const votecut::RgbImage img = votecut::read_ppm(overlay);
  CHECK(img.width == 120);
  CHECK(img != votecut::read_ppm(fixture() / "images" / "alpha.ppm"));
  CHECK(cli("render --image " + q(fixture() / "images" / "alpha.ppm") + " --pred " + q(pred) +
                " --out " + q(overlay) + " --alpha 2",
            dir) == 2);
}
