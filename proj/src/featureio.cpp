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

#include "votecut/featureio.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace votecut {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<char, 4> kMagic = {'V', 'C', 'F', 'T'};
constexpr std::size_t kHeaderBytes = 4 + 4 * 4;

std::uint32_t load_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32(unsigned char* p, std::uint32_t v) {
  p[0] = static_cast<unsigned char>(v & 0xff);
  p[1] = static_cast<unsigned char>((v >> 8) & 0xff);
  p[2] = static_cast<unsigned char>((v >> 16) & 0xff);
  p[3] = static_cast<unsigned char>((v >> 24) & 0xff);
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

std::string model_from_file_name(const std::filesystem::path& path) {
  // "<image_id>.<model_id>.vcft": the stem's last extension is the model.
  const auto stem = path.stem();
  const auto ext = stem.extension().string();
  return ext.size() > 1 ? ext.substr(1) : std::string{};
}

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorKind::format, "annotation schema: " + what);
}

std::string read_id(const json& v, const char* field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  schema_error(std::string(field) + " must be a string or integer");
}

int read_int(const json& v, const char* field) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 2e9) return static_cast<int>(d);
  }
  schema_error(std::string(field) + " must be an integer");
}

const json& member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

void validate(const FeatureMap& fm) {
  if (fm.grid_h < 1 || fm.grid_w < 1 || fm.dim < 1) {
    throw Error(ErrorKind::data, "feature map dimensions must be positive");
  }
  const std::size_t expected = static_cast<std::size_t>(fm.grid_h) * fm.grid_w * fm.dim;
  if (fm.data.size() != expected) {
    throw Error(ErrorKind::data, "feature map holds " + std::to_string(fm.data.size()) +
                                     " values, expected " + std::to_string(expected));
  }
  for (std::size_t i = 0; i < fm.data.size(); ++i) {
    if (!std::isfinite(fm.data[i])) {
      throw Error(ErrorKind::data, "non-finite feature value at flat index " + std::to_string(i));
    }
  }
}

FeatureMap read_feature_file(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string where = path.string() + ": ";
  if (bytes.size() < kHeaderBytes) throw Error(ErrorKind::format, where + "truncated header");
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorKind::format, where + "bad magic");
  }
  const std::uint32_t version = load_u32(bytes.data() + 4);
  if (version != kFeatureFormatVersion) {
    throw Error(ErrorKind::format, where + "unsupported version " + std::to_string(version));
  }
  const std::uint32_t gh = load_u32(bytes.data() + 8);
  const std::uint32_t gw = load_u32(bytes.data() + 12);
  const std::uint32_t dim = load_u32(bytes.data() + 16);
  if (gh == 0 || gw == 0 || dim == 0 || gh > 1u << 15 || gw > 1u << 15 || dim > 1u << 20) {
    throw Error(ErrorKind::format, where + "implausible header dimensions");
  }
  const std::uint64_t count = static_cast<std::uint64_t>(gh) * gw * dim;
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  if (payload != count * 4) {
    throw Error(ErrorKind::format, where + "payload has " + std::to_string(payload) +
                                       " bytes, header declares " + std::to_string(count * 4));
  }
  FeatureMap fm;
  fm.model_id = model_from_file_name(path);
  fm.grid_h = static_cast<int>(gh);
  fm.grid_w = static_cast<int>(gw);
  fm.dim = static_cast<int>(dim);
  fm.data.resize(count);
  const unsigned char* p = bytes.data() + kHeaderBytes;
  for (std::uint64_t i = 0; i < count; ++i, p += 4) {
    fm.data[i] = std::bit_cast<float>(load_u32(p));
  }
  try {
    validate(fm);
  } catch (const Error& e) {
    throw Error(ErrorKind::data, where + e.what());
  }
  return fm;
}

void write_feature_file(const FeatureMap& fm, const std::filesystem::path& path) {
  validate(fm);
  std::vector<unsigned char> bytes(kHeaderBytes + fm.data.size() * 4);
  std::memcpy(bytes.data(), kMagic.data(), kMagic.size());
  store_u32(bytes.data() + 4, kFeatureFormatVersion);
  store_u32(bytes.data() + 8, static_cast<std::uint32_t>(fm.grid_h));
  store_u32(bytes.data() + 12, static_cast<std::uint32_t>(fm.grid_w));
  store_u32(bytes.data() + 16, static_cast<std::uint32_t>(fm.dim));
  unsigned char* p = bytes.data() + kHeaderBytes;
  for (float v : fm.data) {
    store_u32(p, std::bit_cast<std::uint32_t>(v));
    p += 4;
  }
  write_bytes(path, bytes.data(), bytes.size());
}

std::string feature_file_name(const std::string& image_id, const std::string& model_id) {
  return image_id + "." + model_id + ".vcft";
}

RgbImage make_image(int height, int width) {
  if (height < 1 || width < 1) throw Error(ErrorKind::shape, "image dimensions must be positive");
  RgbImage img;
  img.height = height;
  img.width = width;
  img.pixels.assign(static_cast<std::size_t>(height) * width * 3, 0);
  return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string where = path.string() + ": ";
  std::size_t pos = 0;
  // Header tokens are whitespace separated and may carry '#' comments.
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
      tok.push_back(static_cast<char>(bytes[pos++]));
    }
    return tok;
  };
  if (next_token() != "P6") throw Error(ErrorKind::format, where + "not a binary PPM (P6)");
  int dims[3] = {0, 0, 0};
  for (int& d : dims) {
    const std::string tok = next_token();
    try {
      d = std::stoi(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::format, where + "bad PPM header token '" + tok + "'");
    }
  }
  if (dims[2] != 255) throw Error(ErrorKind::format, where + "only maxval 255 is supported");
  ++pos;  // single whitespace byte before the raster
  RgbImage img = make_image(dims[1], dims[0]);
  if (bytes.size() < pos + img.pixels.size()) {
    throw Error(ErrorKind::format, where + "truncated PPM raster");
  }
  std::memcpy(img.pixels.data(), bytes.data() + pos, img.pixels.size());
  return img;
}

void write_ppm(const RgbImage& image, const std::filesystem::path& path) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::string bytes = header;
  bytes.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  write_bytes(path, bytes.data(), bytes.size());
}

const ImageRecord* AnnotationSet::find_image(const std::string& id) const {
  for (const auto& img : images) {
    if (img.id == id) return &img;
  }
  return nullptr;
}

void validate(const AnnotationSet& set) {
  std::set<std::string> ids;
  for (const auto& img : set.images) {
    if (!ids.insert(img.id).second) {
      throw Error(ErrorKind::validation, "duplicate image id '" + img.id + "'");
    }
  }
  for (const auto& ann : set.annotations) {
    if (!ids.count(ann.image_id)) {
      throw Error(ErrorKind::validation,
                  "annotation references unknown image id '" + ann.image_id + "'");
    }
    if (!(ann.score >= 0.0 && ann.score <= 1.0)) {
      throw Error(ErrorKind::validation, "annotation score outside [0,1] for image '" +
                                             ann.image_id + "'");
    }
    const ImageRecord* img = set.find_image(ann.image_id);
    if (img->width > 0 && img->height > 0 &&
        (ann.segmentation.height != img->height || ann.segmentation.width != img->width)) {
      throw Error(ErrorKind::validation,
                  "segmentation size disagrees with image '" + ann.image_id + "'");
    }
  }
}

AnnotationSet parse_annotations(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::format, std::string("annotation JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("top level must be an object");
  const json& images = member(doc, "images");
  const json& annotations = member(doc, "annotations");
  if (!images.is_array() || !annotations.is_array()) {
    schema_error("'images' and 'annotations' must be arrays");
  }
  AnnotationSet set;
  for (const auto& im : images) {
    if (!im.is_object()) schema_error("image entry must be an object");
    ImageRecord rec;
    rec.id = read_id(member(im, "id"), "id");
    if (const auto it = im.find("file_name"); it != im.end()) {
      if (!it->is_string()) schema_error("file_name must be a string");
      rec.file_name = it->get<std::string>();
    }
    rec.width = read_int(member(im, "width"), "width");
    rec.height = read_int(member(im, "height"), "height");
    set.images.push_back(std::move(rec));
  }
  for (const auto& an : annotations) {
    if (!an.is_object()) schema_error("annotation entry must be an object");
    Annotation ann;
    ann.image_id = read_id(member(an, "image_id"), "image_id");
    const json& bbox = member(an, "bbox");
    if (!bbox.is_array() || bbox.size() != 4) schema_error("bbox must be [x,y,w,h]");
    ann.box = {read_int(bbox[0], "bbox"), read_int(bbox[1], "bbox"), read_int(bbox[2], "bbox"),
               read_int(bbox[3], "bbox")};
    if (const auto it = an.find("score"); it != an.end()) {
      if (!it->is_number()) schema_error("score must be a number");
      ann.score = it->get<double>();
    }
    const json& seg = member(an, "segmentation");
    if (!seg.is_object()) schema_error("segmentation must be an object with size and counts");
    const json& size = member(seg, "size");
    const json& counts = member(seg, "counts");
    if (!size.is_array() || size.size() != 2) schema_error("segmentation size must be [h,w]");
    if (!counts.is_array()) schema_error("segmentation counts must be an array");
    ann.segmentation.height = read_int(size[0], "size");
    ann.segmentation.width = read_int(size[1], "size");
    for (const auto& c : counts) {
      if (!c.is_number_unsigned()) schema_error("segmentation counts must be non-negative integers");
      ann.segmentation.counts.push_back(c.get<std::uint32_t>());
    }
    set.annotations.push_back(std::move(ann));
  }
  validate(set);
  return set;
}

std::string serialize_annotations(const AnnotationSet& set) {
  validate(set);
  json doc = json::object();
  doc["images"] = json::array();
  doc["annotations"] = json::array();
  for (const auto& img : set.images) {
    json j = json::object();
    j["id"] = img.id;
    j["file_name"] = img.file_name;
    j["width"] = img.width;
    j["height"] = img.height;
    doc["images"].push_back(std::move(j));
  }
  for (const auto& ann : set.annotations) {
    json j = json::object();
    j["image_id"] = ann.image_id;
    j["bbox"] = {ann.box.x, ann.box.y, ann.box.w, ann.box.h};
    j["score"] = ann.score;
    j["segmentation"] = {{"size", {ann.segmentation.height, ann.segmentation.width}},
                         {"counts", ann.segmentation.counts}};
    doc["annotations"].push_back(std::move(j));
  }
  return doc.dump();
}

AnnotationSet read_annotations(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  try {
    return parse_annotations(std::string(bytes.begin(), bytes.end()));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_annotations(const AnnotationSet& set, const std::filesystem::path& path) {
  const std::string text = serialize_annotations(set) + "\n";
  write_bytes(path, text.data(), text.size());
}

Annotation to_annotation(const ScoredInstance& inst) {
  return {inst.image_id, inst.box, inst.score, rle_encode(inst.mask)};
}

ScoredInstance to_instance(const Annotation& ann) {
  ScoredInstance inst;
  inst.mask = rle_decode(ann.segmentation);
  inst.box = ann.box;
  inst.score = ann.score;
  inst.image_id = ann.image_id;
  return inst;
}

}  // namespace votecut
