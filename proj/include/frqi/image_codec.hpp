#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frqi/distribution.hpp"

namespace frqi {

// Square 8-bit grayscale raster, side a power of two >= 2, pixels row-major.
struct Image {
  uint32_t side = 0;
  std::vector<uint8_t> pixels;
};

enum class EncodingMode { Linear, Arcsin };
enum class DecodeVariant { Ratio, Scaled };

// Per-pixel rotation angles theta_i in [0, pi/2], length 2^(2n).
struct AngleVector {
  uint32_t n = 0;
  std::vector<double> thetas;
};

struct DecodeResult {
  Image image;
  // Pixels whose gray-qubit mass was zero in both branches (Ratio decode only);
  // these decode to 0.
  std::vector<uint32_t> zero_mass_pixels;
};

bool is_encodable_side(uint32_t side);
uint32_t side_exponent(uint32_t side);  // side == 2^n -> n
void validate_image(const Image& image);

Image load_pgm(const std::string& path);
void save_pgm(const Image& image, const std::string& path);

// Box-average pooling; target_side must divide side, both powers of two >= 2.
Image downscale(const Image& image, uint32_t target_side);

AngleVector gray_to_angles(const Image& image, EncodingMode mode);

// Inverts the encoding from a distribution over 2^(2n+1) basis states
// (positions = qubits 0..2n-1, gray qubit = qubit 2n). Ancilla qubits, if any,
// must be marginalized out by the caller first.
DecodeResult probs_to_image(const Distribution& dist, uint32_t n, EncodingMode mode,
                            DecodeVariant decode);

// Mean absolute pixel deviation in percent of the 255 gray range, in [0, 100].
double relative_difference(const Image& a, const Image& b);

}  // namespace frqi
