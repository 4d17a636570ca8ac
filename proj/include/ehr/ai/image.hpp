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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ehr::ai {

enum class ImageFormat { dicom_pixel_data, png, jpeg };

std::string_view to_string(ImageFormat f) noexcept;
std::optional<ImageFormat> image_format_from_string(std::string_view name) noexcept;
// Guess from magic bytes; nullopt when unrecognised.
std::optional<ImageFormat> sniff_format(std::string_view bytes) noexcept;

// Interleaved 8-bit pixels, 1 (gray) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;
};

// Throws Error(validation_error) when the bytes cannot be decoded.
Image decode_image(std::string_view bytes, ImageFormat format);

Image decode_png(std::string_view bytes);
Image decode_jpeg(std::string_view bytes);
// Explicit VR little endian files with native (uncompressed) pixel data only.
Image decode_dicom(std::string_view bytes);

inline constexpr int kModelInputSize = 224;

// Row-major [y][x][c] floats in [0,1], always 3 channels.
struct ImageTensor {
  int width = kModelInputSize;
  int height = kModelInputSize;
  int channels = 3;
  std::vector<float> data;
  std::string source_name;  // upload file name, if any

  float at(int y, int x, int c) const { return data[(y * width + x) * channels + c]; }
};

// Bilinear resample to 224x224; gray input is replicated to three channels.
ImageTensor to_model_input(const Image& image, std::string source_name = {});

}  // namespace ehr::ai
