#include "holosens/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "holosens/error.hpp"

namespace holosens {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return "Io";
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::VarianceZero: return "VarianceZero";
  }
  return "Unknown";
}

Image::Image(std::size_t width, std::size_t height, std::vector<double> data) {
  require(width >= 1 && height >= 1, ErrorKind::InvalidArgument, "image dimensions must be >= 1");
  require(data.size() == width * height, ErrorKind::InvalidArgument,
          "image data length does not match dimensions");
  for (double v : data) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorKind::InvalidArgument,
            "image sample outside [0,1]");
  }
  grid_ = Grid{width, height, std::move(data)};
}

Image Image::constant(std::size_t width, std::size_t height, double value) {
  return Image(width, height, std::vector<double>(width * height, value));
}

ComplexField::ComplexField(std::size_t size, double pitch)
    : ComplexField(size, pitch, std::vector<Complex>(size * size)) {}

ComplexField::ComplexField(std::size_t size, double pitch, std::vector<Complex> data)
    : size_(size), pitch_(pitch), data_(std::move(data)) {
  require(size >= 1, ErrorKind::InvalidArgument, "field size must be >= 1");
  require(std::isfinite(pitch) && pitch > 0.0, ErrorKind::InvalidArgument,
          "field pitch must be positive");
  require(data_.size() == size * size, ErrorKind::SizeMismatch, "field data length != M^2");
}

Grid ComplexField::intensity() const {
  Grid g{size_, size_, std::vector<double>(data_.size())};
  std::transform(data_.begin(), data_.end(), g.data.begin(),
                 [](const Complex& c) { return std::norm(c); });
  return g;
}

double ComplexField::energy() const noexcept {
  double sum = 0.0;
  for (const Complex& c : data_) sum += std::norm(c);
  return sum;
}

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return token;
}

std::size_t parse_header_number(std::istream& in, const char* what) {
  const std::string tok = next_token(in);
  require(!tok.empty() && std::all_of(tok.begin(), tok.end(), ::isdigit),
          ErrorKind::MalformedHeader, std::string("bad PGM ") + what);
  try {
    return std::stoul(tok);
  } catch (const std::exception&) {
    throw Error(ErrorKind::MalformedHeader, std::string("PGM ") + what + " out of range");
  }
}

}  // namespace

PgmRaster read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());

  require(next_token(in) == "P5", ErrorKind::MalformedHeader, "not a binary PGM (P5)");
  PgmRaster r;
  r.width = parse_header_number(in, "width");
  r.height = parse_header_number(in, "height");
  const std::size_t maxval = parse_header_number(in, "maxval");
  require(r.width >= 1 && r.height >= 1, ErrorKind::MalformedHeader, "PGM has zero size");
  require(maxval >= 1 && maxval <= 65535, ErrorKind::MalformedHeader,
          "PGM maxval must be in [1, 65535]");
  r.maxval = static_cast<unsigned>(maxval);
  // next_token consumed exactly one whitespace byte after maxval.

  const std::size_t count = r.width * r.height;
  const std::size_t bytes_per = r.maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(count * bytes_per);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  require(static_cast<std::size_t>(in.gcount()) == raw.size(), ErrorKind::MalformedHeader,
          "PGM raster truncated");

  r.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned v = bytes_per == 1 ? raw[i] : (unsigned{raw[2 * i]} << 8) | raw[2 * i + 1];
    require(v <= r.maxval, ErrorKind::MalformedHeader, "PGM sample exceeds maxval");
    r.samples[i] = static_cast<std::uint16_t>(v);
  }
  return r;
}

void write_pgm(const PgmRaster& raster, const std::filesystem::path& path) {
  require(raster.maxval >= 1 && raster.maxval <= 65535, ErrorKind::InvalidArgument,
          "PGM maxval must be in [1, 65535]");
  require(raster.samples.size() == raster.width * raster.height, ErrorKind::SizeMismatch,
          "PGM raster length mismatch");
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
  out << "P5\n" << raster.width << ' ' << raster.height << '\n' << raster.maxval << '\n';
  std::vector<unsigned char> raw;
  raw.reserve(raster.samples.size() * 2);
  for (std::uint16_t s : raster.samples) {
    if (raster.maxval < 256) {
      raw.push_back(static_cast<unsigned char>(s));
    } else {
      raw.push_back(static_cast<unsigned char>(s >> 8));
      raw.push_back(static_cast<unsigned char>(s & 0xFF));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path.string());
}

Image load_grayscale(const std::filesystem::path& path) {
  const PgmRaster r = read_pgm(path);
  std::vector<double> data(r.samples.size());
  const double scale = static_cast<double>(r.maxval);
  std::transform(r.samples.begin(), r.samples.end(), data.begin(),
                 [scale](std::uint16_t s) { return static_cast<double>(s) / scale; });
  return Image(r.width, r.height, std::move(data));
}

void save_grayscale(const Image& image, const std::filesystem::path& path, unsigned maxval) {
  PgmRaster r{image.width(), image.height(), maxval, {}};
  r.samples.reserve(image.data().size());
  for (double v : image.data()) {
    r.samples.push_back(static_cast<std::uint16_t>(std::lround(v * maxval)));
  }
  write_pgm(r, path);
}

Image resize_bilinear(const Image& image, std::size_t target) {
  require(target >= 1, ErrorKind::InvalidArgument, "resize target must be >= 1");
  const std::size_t in_w = image.width();
  const std::size_t in_h = image.height();
  if (in_w == target && in_h == target) return image;

  struct Tap {
    std::size_t lo, hi;
    double frac;
  };
  auto taps = [target](std::size_t in) {
    std::vector<Tap> t(target);
    const double scale = static_cast<double>(in) / static_cast<double>(target);
    const double last = static_cast<double>(in - 1);
    for (std::size_t i = 0; i < target; ++i) {
      const double src = std::clamp((static_cast<double>(i) + 0.5) * scale - 0.5, 0.0, last);
      const auto lo = static_cast<std::size_t>(std::floor(src));
      t[i] = Tap{lo, std::min(lo + 1, in - 1), src - static_cast<double>(lo)};
    }
    return t;
  };
  const std::vector<Tap> rows = taps(in_h);
  const std::vector<Tap> cols = taps(in_w);

  std::vector<double> out(target * target);
  for (std::size_t r = 0; r < target; ++r) {
    const Tap& ty = rows[r];
    for (std::size_t c = 0; c < target; ++c) {
      const Tap& tx = cols[c];
      const double top = image.at(ty.lo, tx.lo) * (1.0 - tx.frac) + image.at(ty.lo, tx.hi) * tx.frac;
      const double bot = image.at(ty.hi, tx.lo) * (1.0 - tx.frac) + image.at(ty.hi, tx.hi) * tx.frac;
      // Convex combination; clamp guards the last ulp.
      out[r * target + c] = std::clamp(top * (1.0 - ty.frac) + bot * ty.frac, 0.0, 1.0);
    }
  }
  return Image(target, target, std::move(out));
}

Image to_image_clamped(const Grid& grid) {
  std::vector<double> data(grid.data.size());
  std::transform(grid.data.begin(), grid.data.end(), data.begin(), [](double v) {
    return std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
  });
  return Image(grid.width, grid.height, std::move(data));
}

ComplexField field_from_target(const Image& image, double pitch, std::span<const double> phase) {
  require(image.width() == image.height(), ErrorKind::SizeMismatch, "target must be square");
  require(phase.size() == image.data().size(), ErrorKind::SizeMismatch,
          "phase length does not match image");
  const auto img = image.data();
  std::vector<Complex> data(img.size());
  for (std::size_t p = 0; p < img.size(); ++p) data[p] = std::polar(std::sqrt(img[p]), phase[p]);
  return ComplexField(image.width(), pitch, std::move(data));
}

}  // namespace holosens
