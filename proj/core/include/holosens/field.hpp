#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace holosens {

using Complex = std::complex<double>;

/// Row-major real-valued grid. Reconstructed intensities live here; unlike
/// Image they are not required to stay within [0, 1].
struct Grid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> data;

  std::size_t size() const noexcept { return data.size(); }
  double at(std::size_t row, std::size_t col) const { return data[row * width + col]; }
  bool operator==(const Grid&) const = default;
};

/// Intensity image, every sample finite and in [0, 1].
class Image {
 public:
  /// Throws InvalidArgument on empty dimensions, wrong data length, or
  /// out-of-range samples.
  Image(std::size_t width, std::size_t height, std::vector<double> data);

  static Image constant(std::size_t width, std::size_t height, double value);

  std::size_t width() const noexcept { return grid_.width; }
  std::size_t height() const noexcept { return grid_.height; }
  std::span<const double> data() const noexcept { return grid_.data; }
  double at(std::size_t row, std::size_t col) const { return grid_.at(row, col); }
  const Grid& grid() const noexcept { return grid_; }

  bool operator==(const Image&) const = default;

 private:
  Grid grid_;
};

/// Square M x M grid of complex amplitudes sampled at pitch (meters).
class ComplexField {
 public:
  ComplexField(std::size_t size, double pitch);
  ComplexField(std::size_t size, double pitch, std::vector<Complex> data);

  std::size_t size() const noexcept { return size_; }
  double pitch() const noexcept { return pitch_; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * size_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * size_ + col];
  }

  /// |data|^2 as a grid.
  Grid intensity() const;
  double energy() const noexcept;

 private:
  std::size_t size_;
  double pitch_;
  std::vector<Complex> data_;
};

/// Binary PGM (P5), 8- or 16-bit. Samples are divided by the declared maxval.
Image load_grayscale(const std::filesystem::path& path);

/// Writes P5 with the given maxval (255 or 65535 typical). Samples are
/// quantized by rounding value * maxval.
void save_grayscale(const Image& image, const std::filesystem::path& path,
                    unsigned maxval = 255);

/// Raw P5 raster access for bit-exact round trips.
struct PgmRaster {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 0;
  std::vector<std::uint16_t> samples;
};
PgmRaster read_pgm(const std::filesystem::path& path);
void write_pgm(const PgmRaster& raster, const std::filesystem::path& path);

/// Bilinear resampling to M x M with independent axis scaling
/// (pixel-center alignment, edge clamped).
Image resize_bilinear(const Image& image, std::size_t target);

/// Clamp an arbitrary grid into [0, 1] to obtain a displayable Image.
Image to_image_clamped(const Grid& grid);

/// data[p] = sqrt(img[p]) * exp(i * phase[p]).
ComplexField field_from_target(const Image& image, double pitch, std::span<const double> phase);

}  // namespace holosens
