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

#include <fstream>

#include "helpers.hpp"
#include "synthetic.hpp"
#include "votecut/batch.hpp"

using namespace votecut;
using vctest::kind_name;
using vctest::thrown_kind;
namespace fs = std::filesystem;

namespace {

struct Captured {
  std::vector<std::pair<LogLevel, std::string>> lines;
  LogSink sink() {
    return [this](LogLevel l, const std::string& m) { lines.emplace_back(l, m); };
  }
  int count(LogLevel l) const {
    int n = 0;
    for (const auto& [level, msg] : lines) n += level == l;
    return n;
  }
};

RunManifest manifest_for(const fs::path& dir) {
  RunManifest m;
  m.features_dir = dir;
  m.config.crf_enabled = false;
  return m;
}

void touch(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

TEST_CASE("scan_feature_dir groups files by image and model") {
  const fs::path dir = vctest::scratch_dir("scan");
  for (const char* name : {"a.m1.vcft", "a.m2.vcft", "b.c.m1.vcft", "noext.vcft", "x.m1.txt", ".m3.vcft"}) {
    touch(dir / name, "");
  }
  fs::create_directories(dir / "sub.m1.vcft");
  const auto found = scan_feature_dir(dir);
  REQUIRE(found.size() == 2);
  CHECK(found.at("a").size() == 2);
  CHECK(found.at("a").at("m2") == dir / "a.m2.vcft");
  CHECK(found.at("b.c").size() == 1);
  CHECK(found.at("b.c").count("m1") == 1);
  CHECK(thrown_kind([&] { scan_feature_dir(dir / "missing"); }) == kind_name(ErrorKind::usage));
}

TEST_CASE("run_batch: empty or unusable input is a usage error") {
  const fs::path dir = vctest::scratch_dir("empty");
  CHECK(thrown_kind([&] { run_batch(manifest_for(dir)); }) == kind_name(ErrorKind::usage));
  std::mt19937_64 rng(101);
  vctest::write_scene(vctest::make_scene(rng), "img", dir);
  RunManifest m = manifest_for(dir);
  m.model_ids = {"absent"};
  CHECK(thrown_kind([&] { run_batch(m); }) == kind_name(ErrorKind::usage));
  m = manifest_for(dir);
  m.jobs = 0;
  CHECK(thrown_kind([&] { run_batch(m); }) == kind_name(ErrorKind::usage));
}

TEST_CASE("run_batch: skips incomplete images and counts failures") {
  const fs::path dir = vctest::scratch_dir("mixed");
  std::mt19937_64 rng(102);
  vctest::write_scene(vctest::make_scene(rng), "good", dir);
  vctest::write_scene(vctest::make_scene(rng), "partial", dir);
  fs::remove(dir / feature_file_name("partial", "m40"));
  vctest::write_scene(vctest::make_scene(rng), "broken", dir);
  touch(dir / feature_file_name("broken", "m60"), "VCFT garbage");

  Captured log;
  const RunSummary s = run_batch(manifest_for(dir), log.sink());
  CHECK(s.images_found == 3);
  CHECK(s.images_processed == 1);
  CHECK(s.images_skipped == 1);
  CHECK(s.images_failed == 1);
  CHECK(log.count(LogLevel::warning) == 1);
  CHECK(log.count(LogLevel::error) == 1);
  REQUIRE(s.annotations.images.size() == 1);
  CHECK(s.annotations.images[0].id == "good");
  CHECK(s.annotations.images[0].width == 480);
  CHECK(s.annotations.images[0].file_name.empty());
  CHECK(s.instances == static_cast<int>(s.annotations.annotations.size()));
  CHECK(s.instances > 0);
  validate(s.annotations);
}

TEST_CASE("run_batch: a model subset ignores other files") {
  const fs::path dir = vctest::scratch_dir("subset");
  std::mt19937_64 rng(103);
  vctest::write_scene(vctest::make_scene(rng), "img", dir);
  RunManifest m = manifest_for(dir);
  m.model_ids = {"m30", "m60"};
  const RunSummary s = run_batch(m);
  CHECK(s.images_processed == 1);
  CHECK(s.images_skipped == 0);
}

TEST_CASE("run_batch: output is ordered and independent of the worker count") {
  const fs::path dir = vctest::scratch_dir("jobs");
  std::mt19937_64 rng(104);
  for (const char* id : {"d", "a", "c", "b"}) vctest::write_scene(vctest::make_scene(rng), id, dir);
  const RunSummary one = run_batch(manifest_for(dir));
  REQUIRE(one.annotations.images.size() == 4);
  for (std::size_t i = 1; i < one.annotations.images.size(); ++i) {
    CHECK(one.annotations.images[i - 1].id < one.annotations.images[i].id);
  }
  for (std::size_t i = 1; i < one.annotations.annotations.size(); ++i) {
    const auto& p = one.annotations.annotations[i - 1];
    const auto& q = one.annotations.annotations[i];
    CHECK((p.image_id < q.image_id || (p.image_id == q.image_id && p.score >= q.score)));
  }
  for (int jobs : {2, 3, 8}) {
    RunManifest m = manifest_for(dir);
    m.jobs = jobs;
    CAPTURE(jobs);
    CHECK(run_batch(m).annotations == one.annotations);
  }
}

TEST_CASE("run_batch: images enable the CRF and set output dimensions") {
  const fs::path root = vctest::scratch_dir("images");
  std::mt19937_64 rng(105);
  vctest::SceneOptions opts;
  opts.side = 240;
  vctest::write_scene(vctest::make_scene(rng, opts), "img", root / "features", root / "images");
  RunManifest m = manifest_for(root / "features");
  m.images_dir = root / "images";
  m.config.crf_enabled = true;
  Captured log;
  const RunSummary s = run_batch(m, log.sink());
  CHECK(log.count(LogLevel::warning) == 0);
  REQUIRE(s.images_processed == 1);
  CHECK(s.annotations.images[0].file_name == "img.ppm");
  CHECK(s.annotations.images[0].width == 240);
  CHECK(s.annotations.images[0].height == 240);
  validate(s.annotations);

  // Without images the CRF is skipped with a warning.
  Captured log2;
  RunManifest bare = manifest_for(root / "features");
  bare.config.crf_enabled = true;
  run_batch(bare, log2.sink());
  CHECK(log2.count(LogLevel::warning) == 1);

  // A missing image file fails that image only.
  fs::remove(root / "images" / "img.ppm");
  const RunSummary f = run_batch(m);
  CHECK(f.images_failed == 1);
  CHECK(f.images_processed == 0);
}
