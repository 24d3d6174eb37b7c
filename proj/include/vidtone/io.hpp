#pragma once

// Lossless frame I/O (PNG through libpng, binary PPM) and numbered
// frame-sequence directories named frame_%06d.{png,ppm}.

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "vidtone/core.hpp"

namespace vidtone::io {

namespace fs = std::filesystem;

enum class ImageFormat { png, ppm };

inline const char* extension(ImageFormat f) { return f == ImageFormat::png ? "png" : "ppm"; }

inline ImageFormat parse_format(const std::string& s) {
  if (s == "png") return ImageFormat::png;
  if (s == "ppm") return ImageFormat::ppm;
  throw Error(ErrorKind::io, "unsupported frame format '" + s + "' (expected png or ppm)");
}

inline ImageFormat format_of(const fs::path& p) {
  std::string ext = p.extension().string();
  if (!ext.empty() && ext[0] == '.') ext.erase(0, 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return parse_format(ext);
}

// --- PPM (P6, maxval 255) ---

inline Frame read_ppm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> void {
    throw Error(ErrorKind::parse, path.string() + ": " + why);
  };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_space();
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) fail("malformed PPM header");
    return std::stol(bytes.substr(start, pos - start));
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') fail("not a binary PPM (P6)");
  pos = 2;
  const long w = read_int(), h = read_int(), maxval = read_int();
  if (w < 1 || h < 1 || w > (1 << 20) || h > (1 << 20)) fail("bad PPM dimensions");
  if (maxval != 255) fail("only 8-bit PPM (maxval 255) is supported");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    fail("malformed PPM header");
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * h * 3;
  if (bytes.size() - pos < n) fail("truncated PPM pixel data");
  std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                 bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return Frame(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

inline void write_ppm(const fs::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << "P6\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  const auto px = frame.data();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

// --- PNG ---

inline Frame read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw Error(ErrorKind::parse, path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::parse, path.string() + ": " + msg);
  }
  return Frame(static_cast<int>(image.width), static_cast<int>(image.height), std::move(data));
}

inline void write_png(const fs::path& path, const Frame& frame) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width());
  image.height = static_cast<png_uint_32>(frame.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, frame.data().data(), 0, nullptr))
    throw Error(ErrorKind::io, "cannot write " + path.string() + ": " + image.message);
}

inline Frame read_image(const fs::path& path) {
  return format_of(path) == ImageFormat::png ? read_png(path) : read_ppm(path);
}

inline void write_image(const fs::path& path, const Frame& frame) {
  if (format_of(path) == ImageFormat::png)
    write_png(path, frame);
  else
    write_ppm(path, frame);
}

// --- numbered sequences ---

inline std::string frame_filename(std::size_t index, ImageFormat format) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu.%s", index, extension(format));
  return buf;
}

struct FrameSequence {
  std::vector<Frame> frames;
  std::size_t first_index = 0;
  ImageFormat format = ImageFormat::png;
};

inline FrameSequence load_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::io, "not a directory: " + dir.string());
  static const std::regex pattern(R"(frame_(\d{6})\.(png|ppm))", std::regex::icase);

  std::map<std::size_t, fs::path> found;
  std::optional<ImageFormat> format;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) continue;
    const ImageFormat f = format_of(entry.path());
    if (format && *format != f)
      throw Error(ErrorKind::io, "mixed frame formats in " + dir.string());
    format = f;
    const std::size_t idx = std::stoul(m[1].str());
    if (!found.emplace(idx, entry.path()).second)
      throw Error(ErrorKind::io, "duplicate frame index " + std::to_string(idx));
  }
  if (found.empty()) throw Error(ErrorKind::io, "no frame_NNNNNN.{png,ppm} files in " + dir.string());

  FrameSequence seq;
  seq.format = *format;
  seq.first_index = found.begin()->first;
  std::size_t expected = seq.first_index;
  for (const auto& [idx, path] : found) {
    if (idx != expected)
      throw Error(ErrorKind::io, "missing " + frame_filename(expected, seq.format) + " (frames " +
                                     std::to_string(expected - 1) + " and " + std::to_string(idx) +
                                     " are not contiguous)");
    Frame f = read_image(path);
    if (!seq.frames.empty() && (f.width() != seq.frames.front().width() ||
                                f.height() != seq.frames.front().height()))
      throw Error(ErrorKind::io, path.filename().string() + " is " + std::to_string(f.width()) +
                                     "x" + std::to_string(f.height()) + ", expected " +
                                     std::to_string(seq.frames.front().width()) + "x" +
                                     std::to_string(seq.frames.front().height()));
    seq.frames.push_back(std::move(f));
    ++expected;
  }
  return seq;
}

inline void store_frames(const fs::path& dir, std::span<const Frame> frames,
                         ImageFormat format = ImageFormat::png, std::size_t first_index = 0) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < frames.size(); ++i)
    write_image(dir / frame_filename(first_index + i, format), frames[i]);
}

}  // namespace vidtone::io
