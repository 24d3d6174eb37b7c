#pragma once

// ROI sidecar file:
//   {"default": [{"x0":..,"y0":..,"w":..,"h":..,"label":".."}, ...],
//    "frames":  {"3": [ ...boxes for frame 3... ]}}
// Frame keys are positions in the sequence (0 = first frame).

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vidtone/core.hpp"

namespace vidtone::sidecar {

struct RoiSidecar {
  std::vector<RoiBox> defaults;
  std::map<std::size_t, std::vector<RoiBox>> overrides;

  const std::vector<RoiBox>& boxes_for(std::size_t frame) const {
    auto it = overrides.find(frame);
    return it == overrides.end() ? defaults : it->second;
  }
};

namespace detail {

inline std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline RoiBox parse_box(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::parse, where + ": box must be an object");
  auto integer = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
      throw Error(ErrorKind::parse, where + ": box field '" + key + "' must be an integer");
    return j[key].get<int>();
  };
  RoiBox b{integer("x0"), integer("y0"), integer("w"), integer("h"), ""};
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw Error(ErrorKind::parse, where + ": label must be a string");
    b.label = j["label"].get<std::string>();
  }
  return b;
}

inline std::vector<RoiBox> parse_list(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::parse, where + " must be a list of boxes");
  std::vector<RoiBox> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_box(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline RoiSidecar parse_sidecar(const std::string& text, const std::string& source = "sidecar") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse,
                source + ": " + detail::line_context(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                    e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::parse, source + ": top level must be an object");

  RoiSidecar s;
  if (doc.contains("default")) s.defaults = detail::parse_list(doc["default"], source + ": default");
  if (doc.contains("frames")) {
    if (!doc["frames"].is_object())
      throw Error(ErrorKind::parse, source + ": 'frames' must map frame index to a box list");
    for (const auto& [key, value] : doc["frames"].items()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw Error(ErrorKind::parse, source + ": frame key '" + key + "' is not an index");
      }
      s.overrides[idx] = detail::parse_list(value, source + ": frames." + key);
    }
  }
  return s;
}

inline RoiSidecar load_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open sidecar " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_sidecar(text, path.string());
}

inline void validate(const RoiSidecar& s, int width, int height, std::size_t frame_count) {
  const Frame probe(width, height);
  auto check = [&](const std::vector<RoiBox>& boxes, const std::string& where) {
    for (std::size_t i = 0; i < boxes.size(); ++i)
      if (!probe.contains(boxes[i]))
        throw Error(ErrorKind::bounds, where + " box " + std::to_string(i) + " " +
                                           describe(boxes[i]) + " exceeds frame bounds " +
                                           std::to_string(width) + "x" + std::to_string(height));
  };
  check(s.defaults, "default");
  for (const auto& [idx, boxes] : s.overrides) {
    if (idx >= frame_count)
      throw Error(ErrorKind::bounds, "sidecar references frame " + std::to_string(idx) +
                                         " but the sequence has " + std::to_string(frame_count) +
                                         " frames");
    check(boxes, "frame " + std::to_string(idx));
  }
}

inline std::string to_text(const RoiSidecar& s) {
  auto list = [](const std::vector<RoiBox>& boxes) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& b : boxes)
      a.push_back({{"x0", b.x0}, {"y0", b.y0}, {"w", b.w}, {"h", b.h}, {"label", b.label}});
    return a;
  };
  nlohmann::json doc{{"default", list(s.defaults)}, {"frames", nlohmann::json::object()}};
  for (const auto& [idx, boxes] : s.overrides) doc["frames"][std::to_string(idx)] = list(boxes);
  return doc.dump(2) + "\n";
}

}  // namespace vidtone::sidecar
