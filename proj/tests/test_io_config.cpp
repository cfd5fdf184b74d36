#include "jrs/config.hpp"
#include "jrs/image_io.hpp"

#include "oracles.hpp"

#include <doctest.h>
#include <png.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace jrs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("JRS_TEST_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "jrs_tests";
  fs::create_directories(dir);
  return dir / name;
}

// 16-bit grey PNG written straight through libpng, independent of write_png.
void write_png16(const fs::path& path, const std::vector<std::uint16_t>& px, int h, int w) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  REQUIRE(fp);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  png_set_IHDR(png, info, w, h, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<unsigned char> row(2 * w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      row[2 * c] = px[r * w + c] >> 8;
      row[2 * c + 1] = px[r * w + c] & 0xff;
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("8-bit PNG round trip is exact on the 1/255 lattice") {
  std::mt19937_64 rng(1);
  for (Index ch : {1, 3}) {
    ImageField x({5, 7, ch});
    std::uniform_int_distribution<int> level(0, 255);
    for (Index i = 0; i < x.values.size(); ++i) x.values.data()[i] = level(rng) / 255.0;
    const fs::path p = scratch("rt" + std::to_string(ch) + ".png");
    write_png(p.string(), x);
    const ImageField back = read_image(p.string());
    CHECK(back.grid == x.grid);
    CHECK((back.values - x.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("write_png clamps out-of-range values") {
  ImageField x({1, 3, 1});
  x.values << -0.5, 0.5, 2.0;
  const fs::path p = scratch("clamp.png");
  write_png(p.string(), x);
  const ImageField back = read_image(p.string());
  CHECK(back.values(0) == 0.0);
  CHECK(back.values(1) == doctest::Approx(128.0 / 255.0));
  CHECK(back.values(2) == 1.0);
}

TEST_CASE("16-bit PNG keeps full precision") {
  const std::vector<std::uint16_t> px = {0, 1, 257, 40000, 65535, 12345};
  const fs::path p = scratch("deep.png");
  write_png16(p, px, 2, 3);
  const ImageField img = read_image(p.string());
  REQUIRE(img.grid == PixelGrid{2, 3, 1});
  for (int i = 0; i < 6; ++i) CHECK(img.values(i) == doctest::Approx(px[i] / 65535.0).epsilon(1e-12));
}

TEST_CASE("netpbm variants") {
  {
    std::ofstream(scratch("a.pgm")) << "P2\n# comment\n3 1\n10\n0 5 10\n";
    const ImageField img = read_image(scratch("a.pgm").string());
    CHECK(img.grid == PixelGrid{1, 3, 1});
    CHECK(img.values(1) == doctest::Approx(0.5));
  }
  {
    std::ofstream(scratch("b.ppm")) << "P3 1 2 255\n255 0 0\n0 0 255\n";
    const ImageField img = read_image(scratch("b.ppm").string());
    CHECK(img.grid == PixelGrid{2, 1, 3});
    CHECK(img.values(0, 0) == 1.0);
    CHECK(img.values(1, 2) == 1.0);
    CHECK(img.values(1, 0) == 0.0);
  }
  {
    std::ofstream f(scratch("c.pgm"), std::ios::binary);
    f << "P5\n2 1\n65535\n";
    const unsigned char bytes[] = {0x80, 0x00, 0xff, 0xff};
    f.write(reinterpret_cast<const char*>(bytes), 4);
  }
  const ImageField img = read_image(scratch("c.pgm").string());
  CHECK(img.values(0) == doctest::Approx(32768.0 / 65535.0));
  CHECK(img.values(1) == 1.0);
  {
    std::ofstream f(scratch("d.ppm"), std::ios::binary);
    f << "P6\n1 1\n255\n";
    f.put(static_cast<char>(51)).put(static_cast<char>(102)).put(static_cast<char>(255));
  }
  const ImageField rgb = read_image(scratch("d.ppm").string());
  CHECK(rgb.values(0, 0) == doctest::Approx(0.2));
  CHECK(rgb.values(0, 1) == doctest::Approx(0.4));

  std::ofstream(scratch("short.pgm"), std::ios::binary) << "P5 4 4 255\nab";
  CHECK_THROWS_AS(read_image(scratch("short.pgm").string()), std::runtime_error);
  std::ofstream(scratch("junk.txt")) << "hello";
  CHECK_THROWS_AS(read_image(scratch("junk.txt").string()), std::runtime_error);
  CHECK_THROWS_AS(read_image(scratch("missing.png").string()), std::runtime_error);
}

TEST_CASE("masks are thresholded on write and averaged over channels on read") {
  Vector u(6);
  u << 0.0, 0.49, 0.5, 0.51, 1.0, 0.2;
  const fs::path p = scratch("mask.png");
  write_mask_png(p.string(), u, 2, 3);
  PixelGrid g;
  const Vector back = read_mask(p.string(), &g);
  CHECK(g == PixelGrid{2, 3, 1});
  Vector expect(6);
  expect << 0, 0, 1, 1, 1, 0;
  CHECK((back - expect).norm() == 0.0);
  CHECK_THROWS(write_mask_png(p.string(), u, 3, 3));

  std::ofstream(scratch("m.ppm")) << "P3 2 1 255\n255 255 255 255 0 0\n";
  const Vector m = read_mask(scratch("m.ppm").string());
  CHECK(m(0) == 1.0);
  CHECK(m(1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("config presets parse and extra keys override them") {
  const JointConfig c = parse_config(R"({"preset": "deblurring", "beta": 0.5, "K": 30, "energy": "off"})");
  CHECK(c.alpha == 2.0);
  CHECK(c.beta == 0.5);
  CHECK(c.rank == 30);
  CHECK(c.energy == EnergyMode::off);
  CHECK(c.model == "blur");

  const JointConfig s = parse_config(R"({"preset": "synthetic"})");
  CHECK(s.u0 == 0.5);
  CHECK(s.sigma == 0.3);
  CHECK(parse_config("{}").iterations == JointConfig::denoising().iterations);
}

TEST_CASE("config errors name the offending key") {
  try {
    parse_config(R"({"betta": 1})");
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("betta") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"beta": "high"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"preset": "nope"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"energy": "sometimes"})"), std::invalid_argument);
  CHECK_THROWS_AS(load_config(scratch("absent.json").string()), std::runtime_error);
}

TEST_CASE("validation rejects infeasible parameters") {
  auto bad = [](auto mutate) {
    JointConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  };
  JointConfig{}.validate();
  JointConfig::deblurring().validate();
  JointConfig::synthetic().validate();
  bad([](JointConfig& c) { c.tau = 2 * c.epsilon; });
  bad([](JointConfig& c) { c.tau = 0; });
  bad([](JointConfig& c) { c.eta = 0; });
  bad([](JointConfig& c) { c.sigma = -1; });
  bad([](JointConfig& c) { c.u0 = 1.5; });
  bad([](JointConfig& c) { c.model = "radon"; });
  bad([](JointConfig& c) { c.model = "blur"; c.blur_length = 0; });
  bad([](JointConfig& c) { c.k_s = 0; });
  JointConfig ok;
  ok.beta = 0;
  ok.eta = 0;
  ok.validate();
}

TEST_CASE("overrides and JSON output round trip") {
  JointConfig c = JointConfig::deblurring();
  apply_override(c, "beta", "0.25");
  apply_override(c, "model", "identity");
  apply_override(c, "exact_mode", "true");
  apply_override(c, "seed", "42");
  apply_override(c, "output_dir", "out dir");
  CHECK(c.beta == 0.25);
  CHECK(c.model == "identity");
  CHECK(c.exact_mode);
  CHECK(c.seed == 42);
  CHECK(c.output_dir == "out dir");
  CHECK_THROWS_AS(apply_override(c, "nonsense", "1"), std::invalid_argument);

  const JointConfig back = parse_config(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.alpha == c.alpha);
  CHECK(back.init_fidelity == c.init_fidelity);
  CHECK(back.exact_mode);

  const fs::path p = scratch("cfg.json");
  std::ofstream(p) << to_json(c);
  CHECK(to_json(load_config(p.string())) == to_json(c));
}
