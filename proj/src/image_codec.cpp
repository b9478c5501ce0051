#include "frqi/image_codec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "frqi/errors.hpp"

namespace frqi {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Skips whitespace and '#' comments between PGM header tokens.
bool next_header_token(std::istream& is, std::string& token) {
  token.clear();
  int c = is.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = is.get();
    } else if (std::isspace(c)) {
      c = is.get();
    } else {
      break;
    }
  }
  if (c == EOF) return false;
  while (c != EOF && !std::isspace(c) && c != '#') {
    token.push_back(static_cast<char>(c));
    c = is.get();
  }
  if (c == '#') is.unget();
  return true;
}

uint64_t parse_header_number(std::istream& is, const char* what) {
  std::string token;
  if (!next_header_token(is, token)) {
    throw FrqiError(errc::truncated, std::string("missing ") + what);
  }
  uint64_t value = 0;
  for (char ch : token) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw FrqiError(errc::not_pgm, std::string("malformed ") + what);
    }
    value = value * 10 + static_cast<uint64_t>(ch - '0');
    if (value > 1u << 24) {
      throw FrqiError(errc::too_large, std::string(what) + " out of range");
    }
  }
  return value;
}

uint32_t round_half_up_clamped(double value) {
  double rounded = std::floor(value + 0.5);
  if (rounded < 0.0) return 0;
  if (rounded > 255.0) return 255;
  return static_cast<uint32_t>(rounded);
}

}  // namespace

bool is_encodable_side(uint32_t side) {
  return side >= 2 && (side & (side - 1)) == 0;
}

uint32_t side_exponent(uint32_t side) {
  uint32_t n = 0;
  while ((uint32_t{1} << n) < side) ++n;
  return n;
}

void validate_image(const Image& image) {
  if (!is_encodable_side(image.side)) {
    throw FrqiError(image.side == 1 ? errc::non_encodable : errc::side_not_power_of_two,
                    "image side must be a power of two >= 2");
  }
  if (image.pixels.size() != static_cast<size_t>(image.side) * image.side) {
    throw FrqiError(errc::truncated, "pixel buffer does not match side*side");
  }
}

Image load_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw FrqiError(errc::io_error, "cannot open " + path);
  }

  char magic[2] = {0, 0};
  is.read(magic, 2);
  if (!is || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2')) {
    throw FrqiError(errc::not_pgm, path + " has no P5/P2 magic");
  }
  const bool binary = magic[1] == '5';

  const uint64_t width = parse_header_number(is, "width");
  const uint64_t height = parse_header_number(is, "height");
  const uint64_t maxval = parse_header_number(is, "maxval");
  if (width != height) {
    throw FrqiError(errc::non_square, path + " is not square");
  }
  if (maxval != 255) {
    throw FrqiError(errc::maxval_not_255, path + " maxval must be 255");
  }
  if (width == 1) {
    throw FrqiError(errc::non_encodable, path + " is 1x1; smallest encodable image is 2x2");
  }
  if (!is_encodable_side(static_cast<uint32_t>(width))) {
    throw FrqiError(errc::side_not_power_of_two, path + " side is not a power of two");
  }

  Image image;
  image.side = static_cast<uint32_t>(width);
  const size_t count = static_cast<size_t>(width) * height;
  image.pixels.resize(count);

  if (binary) {
    // Exactly one whitespace byte separates the header from pixel data.
    is.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(count));
    if (static_cast<size_t>(is.gcount()) != count) {
      throw FrqiError(errc::truncated, path + " ends before pixel data is complete");
    }
  } else {
    for (size_t i = 0; i < count; ++i) {
      uint64_t value;
      try {
        value = parse_header_number(is, "pixel");
      } catch (const FrqiError& e) {
        if (e.code() == errc::truncated) {
          throw FrqiError(errc::truncated, path + " ends before pixel data is complete");
        }
        throw;
      }
      if (value > 255) {
        throw FrqiError(errc::not_pgm, path + " pixel value exceeds 255");
      }
      image.pixels[i] = static_cast<uint8_t>(value);
    }
  }
  return image;
}

void save_pgm(const Image& image, const std::string& path) {
  validate_image(image);
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw FrqiError(errc::io_error, "cannot open " + path + " for writing");
  }
  os << "P5\n" << image.side << " " << image.side << "\n255\n";
  os.write(reinterpret_cast<const char*>(image.pixels.data()),
           static_cast<std::streamsize>(image.pixels.size()));
  if (!os) {
    throw FrqiError(errc::io_error, "write to " + path + " failed");
  }
}

Image downscale(const Image& image, uint32_t target_side) {
  validate_image(image);
  if (!is_encodable_side(target_side) || target_side > image.side ||
      image.side % target_side != 0) {
    throw FrqiError(errc::incompatible_sides, "target side must be a power of two >= 2 dividing the source side");
  }
  const uint32_t block = image.side / target_side;
  const uint64_t block_area = static_cast<uint64_t>(block) * block;

  Image out;
  out.side = target_side;
  out.pixels.resize(static_cast<size_t>(target_side) * target_side);
  for (uint32_t row = 0; row < target_side; ++row) {
    for (uint32_t col = 0; col < target_side; ++col) {
      uint64_t sum = 0;
      for (uint32_t dr = 0; dr < block; ++dr) {
        for (uint32_t dc = 0; dc < block; ++dc) {
          const size_t src = static_cast<size_t>(row * block + dr) * image.side + col * block + dc;
          sum += image.pixels[src];
        }
      }
      // round half up of sum / block_area
      const uint64_t mean = (2 * sum + block_area) / (2 * block_area);
      out.pixels[static_cast<size_t>(row) * target_side + col] = static_cast<uint8_t>(mean);
    }
  }
  return out;
}

AngleVector gray_to_angles(const Image& image, EncodingMode mode) {
  validate_image(image);
  AngleVector angles;
  angles.n = side_exponent(image.side);
  angles.thetas.resize(image.pixels.size());
  for (size_t i = 0; i < image.pixels.size(); ++i) {
    const double v = static_cast<double>(image.pixels[i]) / 255.0;
    angles.thetas[i] = mode == EncodingMode::Linear ? v * (kPi / 2.0) : std::asin(v);
  }
  return angles;
}

DecodeResult probs_to_image(const Distribution& dist, uint32_t n, EncodingMode mode,
                            DecodeVariant decode) {
  const uint64_t num_pixels = uint64_t{1} << (2 * n);
  if (dist.num_qubits != 2 * n + 1 || dist.probs.size() != 2 * num_pixels) {
    throw FrqiError(errc::dim_mismatch,
                    "distribution must cover 2^(2n+1) states; marginalize ancillas first");
  }

  DecodeResult result;
  result.image.side = uint32_t{1} << n;
  result.image.pixels.resize(num_pixels);

  for (uint64_t j = 0; j < num_pixels; ++j) {
    const double p0 = dist.probs[j];
    const double p1 = dist.probs[num_pixels + j];
    double value = 0.0;
    if (decode == DecodeVariant::Scaled) {
      value = static_cast<double>(uint64_t{1} << n) * std::sqrt(std::max(p1, 0.0)) * 255.0;
    } else {
      const double total = p0 + p1;
      if (total <= 0.0) {
        result.zero_mass_pixels.push_back(static_cast<uint32_t>(j));
        value = 0.0;
      } else {
        const double ratio = std::clamp(p0 / total, 0.0, 1.0);
        if (mode == EncodingMode::Linear) {
          value = std::acos(std::sqrt(ratio)) * 255.0 * 2.0 / kPi;
        } else {
          value = std::sqrt(std::clamp(p1 / total, 0.0, 1.0)) * 255.0;
        }
      }
    }
    result.image.pixels[j] = static_cast<uint8_t>(round_half_up_clamped(value));
  }
  return result;
}

double relative_difference(const Image& a, const Image& b) {
  validate_image(a);
  validate_image(b);
  if (a.side != b.side) {
    throw FrqiError(errc::side_mismatch, "images must have equal sides");
  }
  uint64_t total = 0;
  for (size_t i = 0; i < a.pixels.size(); ++i) {
    total += static_cast<uint64_t>(std::abs(int(a.pixels[i]) - int(b.pixels[i])));
  }
  return static_cast<double>(total) / static_cast<double>(a.pixels.size()) * 100.0 / 255.0;
}

}  // namespace frqi
