// Copyright 2026 The ehrcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ehr/ai/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include "ehr/core/error.hpp"

namespace ehr::ai {
namespace {

[[noreturn]] void undecodable(const std::string& why) {
  throw Error(ErrorKind::validation_error, "undecodable image: " + why, {"image"});
}

struct JpegErr {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_fail(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Returns false with err->message set on failure. No C++ objects with
// destructors live in this frame, so longjmp is safe.
bool jpeg_decode_raw(const unsigned char* data, unsigned long size, Image* out,
                     std::uint8_t* (*alloc)(Image*, std::size_t), JpegErr* err) {
  jpeg_decompress_struct cinfo;
  cinfo.err = jpeg_std_error(&err->mgr);
  err->mgr.error_exit = jpeg_fail;
  if (setjmp(err->jump)) {
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data, size);
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.num_components != 1) cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out->width = static_cast<int>(cinfo.output_width);
  out->height = static_cast<int>(cinfo.output_height);
  out->channels = cinfo.output_components;
  const std::size_t stride = static_cast<std::size_t>(out->width) * out->channels;
  std::uint8_t* pixels = alloc(out, stride * out->height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

std::uint16_t u16(std::string_view b, std::size_t off) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[off]) |
                                    (static_cast<unsigned char>(b[off + 1]) << 8));
}

std::uint32_t u32(std::string_view b, std::size_t off) {
  return static_cast<std::uint32_t>(u16(b, off)) |
         (static_cast<std::uint32_t>(u16(b, off + 2)) << 16);
}

bool long_length_vr(std::string_view vr) {
  return vr == "OB" || vr == "OW" || vr == "OF" || vr == "SQ" || vr == "UT" || vr == "UN" ||
         vr == "OD" || vr == "OL" || vr == "UC" || vr == "UR";
}

}  // namespace

std::string_view to_string(ImageFormat f) noexcept {
  switch (f) {
    case ImageFormat::dicom_pixel_data: return "dicom_pixel_data";
    case ImageFormat::png: return "png";
    case ImageFormat::jpeg: return "jpeg";
  }
  return "png";
}

std::optional<ImageFormat> image_format_from_string(std::string_view name) noexcept {
  if (name == "png") return ImageFormat::png;
  if (name == "jpeg" || name == "jpg") return ImageFormat::jpeg;
  if (name == "dicom_pixel_data" || name == "dicom" || name == "dcm") {
    return ImageFormat::dicom_pixel_data;
  }
  return std::nullopt;
}

std::optional<ImageFormat> sniff_format(std::string_view b) noexcept {
  if (b.size() >= 8 && std::memcmp(b.data(), "\x89PNG\r\n\x1a\n", 8) == 0) return ImageFormat::png;
  if (b.size() >= 3 && std::memcmp(b.data(), "\xff\xd8\xff", 3) == 0) return ImageFormat::jpeg;
  if (b.size() >= 132 && b.substr(128, 4) == "DICM") return ImageFormat::dicom_pixel_data;
  return std::nullopt;
}

Image decode_png(std::string_view bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    undecodable(img.message);
  }
  const bool gray = (img.format & PNG_FORMAT_FLAG_COLOR) == 0;
  img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  Image out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.channels = gray ? 1 : 3;
  out.pixels.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string why = img.message;
    png_image_free(&img);
    undecodable(why);
  }
  return out;
}

Image decode_jpeg(std::string_view bytes) {
  if (bytes.empty()) undecodable("empty jpeg");
  Image out;
  JpegErr err{};
  auto alloc = [](Image* img, std::size_t n) {
    img->pixels.resize(n);
    return img->pixels.data();
  };
  if (!jpeg_decode_raw(reinterpret_cast<const unsigned char*>(bytes.data()),
                       static_cast<unsigned long>(bytes.size()), &out, alloc, &err)) {
    undecodable(err.message);
  }
  return out;
}

Image decode_dicom(std::string_view b) {
  if (b.size() < 132 || b.substr(128, 4) != "DICM") undecodable("missing DICM preamble");
  std::size_t pos = 132;
  int rows = 0, cols = 0, bits = 8, samples = 1, pixel_rep = 0;
  std::string transfer_syntax;
  std::string_view pixel_data;

  while (pos + 8 <= b.size()) {
    const auto group = u16(b, pos);
    const auto element = u16(b, pos + 2);
    const std::string_view vr = b.substr(pos + 4, 2);
    std::uint32_t len = 0;
    std::size_t value_at = 0;
    if (long_length_vr(vr)) {
      if (pos + 12 > b.size()) undecodable("truncated element header");
      len = u32(b, pos + 8);
      value_at = pos + 12;
    } else {
      len = u16(b, pos + 6);
      value_at = pos + 8;
    }
    if (len == 0xFFFFFFFFu) undecodable("undefined-length elements are not supported");
    if (value_at + len > b.size()) undecodable("element runs past end of file");
    const std::string_view value = b.substr(value_at, len);

    if (group == 0x0002 && element == 0x0010) {
      transfer_syntax = std::string(value);
      while (!transfer_syntax.empty() &&
             (transfer_syntax.back() == '\0' || transfer_syntax.back() == ' ')) {
        transfer_syntax.pop_back();
      }
      if (transfer_syntax != "1.2.840.10008.1.2.1") {
        undecodable("transfer syntax " + transfer_syntax + " is not explicit VR little endian");
      }
    } else if (group == 0x0028 && len == 2) {
      const int v = u16(b, value_at);
      if (element == 0x0010) rows = v;
      if (element == 0x0011) cols = v;
      if (element == 0x0100) bits = v;
      if (element == 0x0002) samples = v;
      if (element == 0x0103) pixel_rep = v;
    } else if (group == 0x7FE0 && element == 0x0010) {
      pixel_data = value;
      break;
    }
    pos = value_at + len;
  }

  if (pixel_data.empty()) undecodable("no pixel data element");
  if (rows <= 0 || cols <= 0) undecodable("missing image dimensions");
  if (samples != 1 && samples != 3) undecodable("unsupported samples per pixel");
  if (bits != 8 && bits != 16) undecodable("unsupported bits allocated");
  if (bits == 16 && samples != 1) undecodable("16-bit colour is not supported");
  const std::size_t n = static_cast<std::size_t>(rows) * cols * samples;
  if (pixel_data.size() < n * (bits / 8)) undecodable("pixel data shorter than image");

  Image out;
  out.width = cols;
  out.height = rows;
  out.channels = samples;
  out.pixels.resize(n);
  if (bits == 8) {
    std::memcpy(out.pixels.data(), pixel_data.data(), n);
  } else {
    // Window to the observed range.
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = u16(pixel_data, i * 2);
      raw[i] = pixel_rep ? static_cast<std::int16_t>(v) : v;
    }
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double span = std::max(1, *hi - *lo);
    for (std::size_t i = 0; i < n; ++i) {
      out.pixels[i] = static_cast<std::uint8_t>(std::lround((raw[i] - *lo) * 255.0 / span));
    }
  }
  return out;
}

Image decode_image(std::string_view bytes, ImageFormat format) {
  switch (format) {
    case ImageFormat::png: return decode_png(bytes);
    case ImageFormat::jpeg: return decode_jpeg(bytes);
    case ImageFormat::dicom_pixel_data: return decode_dicom(bytes);
  }
  undecodable("unknown format");
}

ImageTensor to_model_input(const Image& image, std::string source_name) {
  if (image.width <= 0 || image.height <= 0 || (image.channels != 1 && image.channels != 3)) {
    undecodable("empty image");
  }
  ImageTensor t;
  t.source_name = std::move(source_name);
  t.data.resize(static_cast<std::size_t>(t.width) * t.height * t.channels);
  const double sx = static_cast<double>(image.width) / t.width;
  const double sy = static_cast<double>(image.height) / t.height;
  auto px = [&](int x, int y, int c) -> double {
    const int cc = image.channels == 1 ? 0 : c;
    return image.pixels[(static_cast<std::size_t>(y) * image.width + x) * image.channels + cc];
  };
  for (int y = 0; y < t.height; ++y) {
    // Pixel-centre alignment.
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < t.width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double top = px(x0, y0, c) * (1 - wx) + px(x1, y0, c) * wx;
        const double bottom = px(x0, y1, c) * (1 - wx) + px(x1, y1, c) * wx;
        t.data[(static_cast<std::size_t>(y) * t.width + x) * 3 + c] =
            static_cast<float>((top * (1 - wy) + bottom * wy) / 255.0);
      }
    }
  }
  return t;
}

}  // namespace ehr::ai
