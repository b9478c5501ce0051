#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>

#include "frqi/errors.hpp"
#include "frqi/frqi_builder.hpp"
#include "frqi/image_codec.hpp"
#include "frqi/simulator.hpp"

using namespace frqi;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "frqi_codec_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& bytes) {
  const auto path = temp_dir() / name;
  std::ofstream os(path, std::ios::binary);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  return path.string();
}

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const FrqiError& e) {
    return e.code();
  }
  FAIL("expected a FrqiError");
  return errc::bad_argument;
}

Image random_image(uint32_t side, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Image image;
  image.side = side;
  image.pixels.resize(static_cast<size_t>(side) * side);
  for (auto& p : image.pixels) p = static_cast<uint8_t>(rng() % 256);
  return image;
}

// Exact FRQI distribution for given angles, built directly from the state
// definition: amplitude cos/sin(theta_j)/2^n on (gray, j).
Distribution exact_frqi_distribution(const AngleVector& angles) {
  const uint64_t pixels = uint64_t{1} << (2 * angles.n);
  Distribution dist;
  dist.num_qubits = 2 * angles.n + 1;
  dist.probs.resize(2 * pixels);
  const double norm = 1.0 / static_cast<double>(pixels);
  for (uint64_t j = 0; j < pixels; ++j) {
    const double c = std::cos(angles.thetas[j]);
    const double s = std::sin(angles.thetas[j]);
    dist.probs[j] = c * c * norm;
    dist.probs[pixels + j] = s * s * norm;
  }
  return dist;
}

}  // namespace

TEST_CASE("P5 files load with exact pixel order") {
  const std::string path =
      write_file("basic.pgm", std::string("P5\n2 2\n255\n") + '\x0a' + '\x55' + '\xaa' + '\xff');
  const Image image = load_pgm(path);
  CHECK(image.side == 2);
  REQUIRE(image.pixels.size() == 4);
  CHECK(image.pixels[0] == 10);
  CHECK(image.pixels[1] == 85);
  CHECK(image.pixels[2] == 170);
  CHECK(image.pixels[3] == 255);
}

TEST_CASE("P2 files and header comments are accepted") {
  const std::string path = write_file("ascii.pgm",
                                      "P2\n# a comment\n2 2\n255\n10 85\n170 255\n");
  const Image image = load_pgm(path);
  CHECK(image.pixels == std::vector<uint8_t>{10, 85, 170, 255});
}

TEST_CASE("PGM loader rejects malformed inputs with specific codes") {
  CHECK(code_of([&] { (void)load_pgm(write_file("magic.pgm", "P6\n2 2\n255\n....")); }) ==
        errc::not_pgm);
  CHECK(code_of([&] { (void)load_pgm(write_file("rect.pgm", "P5\n4 2\n255\n01234567")); }) ==
        errc::non_square);
  CHECK(code_of([&] {
          (void)load_pgm(write_file("pow2.pgm", "P5\n3 3\n255\n012345678"));
        }) == errc::side_not_power_of_two);
  CHECK(code_of([&] { (void)load_pgm(write_file("tiny.pgm", "P5\n1 1\n255\nx")); }) ==
        errc::non_encodable);
  CHECK(code_of([&] { (void)load_pgm(write_file("maxval.pgm", "P5\n2 2\n254\nabcd")); }) ==
        errc::maxval_not_255);
  CHECK(code_of([&] { (void)load_pgm(write_file("short.pgm", "P5\n2 2\n255\nab")); }) ==
        errc::truncated);
  CHECK(code_of([&] { (void)load_pgm(temp_dir() / "missing.pgm"); }) == errc::io_error);
}

TEST_CASE("save_pgm writes the exact header contract") {
  Image image;
  image.side = 4;
  image.pixels.assign(16, 7);
  const auto path = temp_dir() / "header.pgm";
  save_pgm(image, path.string());

  std::ifstream is(path, std::ios::binary);
  std::string contents((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK(contents.substr(0, 11) == "P5\n4 4\n255\n");
  CHECK(contents.size() == 11 + 16);
}

TEST_CASE("save then load round-trips bit-exactly") {
  for (uint32_t side : {2u, 4u, 8u}) {
    const Image image = random_image(side, side * 31);
    const auto path = temp_dir() / ("roundtrip_" + std::to_string(side) + ".pgm");
    save_pgm(image, path.string());
    const Image back = load_pgm(path.string());
    CHECK(back.side == image.side);
    CHECK(back.pixels == image.pixels);
  }
}

TEST_CASE("all-zero image writes zero bytes after the header") {
  Image image;
  image.side = 2;
  image.pixels.assign(4, 0);
  const auto path = temp_dir() / "zeros.pgm";
  save_pgm(image, path.string());
  std::ifstream is(path, std::ios::binary);
  std::string contents((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK(contents == std::string("P5\n2 2\n255\n") + std::string(4, '\0'));
}

TEST_CASE("downscale box-averages with round-half-up") {
  Image constant;
  constant.side = 4;
  constant.pixels.assign(16, 100);
  CHECK(downscale(constant, 2).pixels == std::vector<uint8_t>(4, 100));

  Image blocky;
  blocky.side = 4;
  blocky.pixels.assign(16, 0);
  // top-left 2x2 block: [0, 0, 255, 255] -> mean 127.5 -> 128
  blocky.pixels[0 * 4 + 0] = 0;
  blocky.pixels[0 * 4 + 1] = 0;
  blocky.pixels[1 * 4 + 0] = 255;
  blocky.pixels[1 * 4 + 1] = 255;
  CHECK(downscale(blocky, 2).pixels[0] == 128);
}

TEST_CASE("downscale rejects incompatible targets") {
  const Image image = random_image(4, 9);
  CHECK(code_of([&] { (void)downscale(image, 1); }) == errc::incompatible_sides);
  CHECK(code_of([&] { (void)downscale(image, 8); }) == errc::incompatible_sides);
  const Image odd = random_image(8, 10);
  CHECK(code_of([&] { (void)downscale(odd, 3); }) == errc::incompatible_sides);
}

TEST_CASE("linear angles reproduce the 2x2 sample exactly") {
  Image image;
  image.side = 2;
  image.pixels = {10, 85, 170, 255};
  const AngleVector angles = gray_to_angles(image, EncodingMode::Linear);
  REQUIRE(angles.thetas.size() == 4);
  CHECK(angles.thetas[0] == doctest::Approx(kPi / 51).epsilon(1e-15));
  CHECK(angles.thetas[1] == doctest::Approx(kPi / 6).epsilon(1e-15));
  CHECK(angles.thetas[2] == doctest::Approx(kPi / 3).epsilon(1e-15));
  CHECK(angles.thetas[3] == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("angle transforms hit both endpoints and stay monotone") {
  for (EncodingMode mode : {EncodingMode::Linear, EncodingMode::Arcsin}) {
    Image image;
    image.side = 2;
    image.pixels = {0, 255, 13, 14};
    const AngleVector angles = gray_to_angles(image, mode);
    CHECK(angles.thetas[0] == 0.0);
    CHECK(angles.thetas[1] == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(angles.thetas[2] < angles.thetas[3]);

    const Image ramp = random_image(4, 77);
    const AngleVector all = gray_to_angles(ramp, mode);
    for (size_t i = 0; i < ramp.pixels.size(); ++i) {
      for (size_t j = 0; j < ramp.pixels.size(); ++j) {
        if (ramp.pixels[i] <= ramp.pixels[j]) {
          CHECK(all.thetas[i] <= all.thetas[j]);
        }
      }
    }
  }
}

TEST_CASE("decoding the exact 2x2 sample distribution recovers the pixels") {
  Image image;
  image.side = 2;
  image.pixels = {10, 85, 170, 255};
  const AngleVector angles = gray_to_angles(image, EncodingMode::Linear);
  const Distribution dist = exact_frqi_distribution(angles);
  const DecodeResult decoded = probs_to_image(dist, 1, EncodingMode::Linear, DecodeVariant::Ratio);
  CHECK(decoded.image.pixels == image.pixels);
  CHECK(decoded.zero_mass_pixels.empty());
}

TEST_CASE("decode corner cases") {
  Distribution dist;
  dist.num_qubits = 3;

  SUBCASE("all mass on gray=0 gives black pixels") {
    dist.probs = {0.25, 0.25, 0.25, 0.25, 0, 0, 0, 0};
    const DecodeResult out = probs_to_image(dist, 1, EncodingMode::Linear, DecodeVariant::Ratio);
    CHECK(out.image.pixels == std::vector<uint8_t>(4, 0));
  }

  SUBCASE("balanced mass rounds 127.5 up to 128") {
    dist.probs = {0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125};
    const DecodeResult out = probs_to_image(dist, 1, EncodingMode::Linear, DecodeVariant::Ratio);
    CHECK(out.image.pixels == std::vector<uint8_t>(4, 128));
  }

  SUBCASE("zero-mass pixels decode to 0 and are flagged") {
    dist.probs = {0.5, 0, 0.25, 0, 0, 0, 0.25, 0};  // pixels 1 and 3 empty
    const DecodeResult out = probs_to_image(dist, 1, EncodingMode::Linear, DecodeVariant::Ratio);
    CHECK(out.image.pixels[1] == 0);
    CHECK(out.image.pixels[3] == 0);
    CHECK(out.zero_mass_pixels == std::vector<uint32_t>{1, 3});
  }

  SUBCASE("dimension mismatch is rejected") {
    dist.probs.assign(8, 0.125);
    CHECK(code_of([&] { (void)probs_to_image(dist, 2, EncodingMode::Linear, DecodeVariant::Ratio); }) ==
          errc::dim_mismatch);
  }
}

TEST_CASE("scaled decode equals the arcsin ratio decode on exact distributions") {
  const Image image = random_image(4, 123);
  const AngleVector angles = gray_to_angles(image, EncodingMode::Arcsin);
  const Distribution dist = exact_frqi_distribution(angles);
  const DecodeResult ratio = probs_to_image(dist, 2, EncodingMode::Arcsin, DecodeVariant::Ratio);
  const DecodeResult scaled = probs_to_image(dist, 2, EncodingMode::Arcsin, DecodeVariant::Scaled);
  CHECK(ratio.image.pixels == scaled.image.pixels);
  CHECK(ratio.image.pixels == image.pixels);
}

TEST_CASE("relative difference matches hand-computed values") {
  Image a, b;
  a.side = b.side = 2;
  a.pixels = {10, 85, 170, 255};
  b.pixels = {125, 125, 125, 125};
  CHECK(relative_difference(a, a) == 0.0);
  CHECK(relative_difference(a, b) == doctest::Approx(32.353).epsilon(1e-3));

  Image black, white;
  black.side = white.side = 2;
  black.pixels.assign(4, 0);
  white.pixels.assign(4, 255);
  CHECK(relative_difference(black, white) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("relative difference is symmetric and bounded") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Image a = random_image(4, seed * 2);
    const Image b = random_image(4, seed * 2 + 1);
    const double d1 = relative_difference(a, b);
    const double d2 = relative_difference(b, a);
    CHECK(d1 == d2);
    CHECK(d1 >= 0.0);
    CHECK(d1 <= 100.0);
    if (a.pixels == b.pixels) {
      CHECK(d1 == 0.0);
    } else {
      CHECK(d1 > 0.0);
    }
  }
  Image a = random_image(2, 5);
  Image b = random_image(4, 6);
  CHECK(code_of([&] { (void)relative_difference(a, b); }) == errc::side_mismatch);
}

TEST_CASE("full encode-simulate-decode round trip stays within one gray level") {
  for (uint32_t n : {1u, 2u}) {
    for (uint64_t seed = 0; seed < 3; ++seed) {
      const Image image = random_image(uint32_t{1} << n, 500 + seed);
      const AngleVector angles = gray_to_angles(image, EncodingMode::Linear);
      for (bool use_mary : {false, true}) {
        const Circuit circuit =
            use_mary ? build_mary_circuit(angles) : build_mcry_circuit(angles);
        const Distribution dist =
            marginalize_qubits(exact_probabilities(circuit), circuit.layout.ancillas);
        const DecodeResult out = probs_to_image(dist, n, EncodingMode::Linear, DecodeVariant::Ratio);
        for (size_t i = 0; i < image.pixels.size(); ++i) {
          CHECK(std::abs(int(out.image.pixels[i]) - int(image.pixels[i])) <= 1);
        }
      }
    }
  }
}
