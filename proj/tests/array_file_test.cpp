#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <bit>
#include <random>

#include "kinlim/array_file.hpp"

using namespace kinlim;
namespace fs = std::filesystem;

namespace {

class ArrayFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kinlim-array-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path path(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

}  // namespace

TEST_F(ArrayFileTest, RoundTripIsBitExact) {
  ArrayFile file;
  file.metadata_json = R"({"label":"x","n":3})";
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  NamedArray a{"a", {2, 3}, {}};
  for (int i = 0; i < 6; ++i) a.data.push_back(d(rng) * 1e-300);
  NamedArray b{"b", {4}, {0.1, -0.0, std::numeric_limits<double>::max(), std::numeric_limits<double>::denorm_min()}};
  file.arrays = {a, b};
  write_array_file(path("x.kla"), file);

  const ArrayFile back = read_array_file(path("x.kla"));
  ASSERT_EQ(back.arrays.size(), 2u);
  EXPECT_EQ(back.find("a").shape, a.shape);
  EXPECT_EQ(back.find("b").shape, b.shape);
  for (std::size_t i = 0; i < a.data.size(); ++i) EXPECT_EQ(std::bit_cast<std::uint64_t>(back.find("a").data[i]),
                                                            std::bit_cast<std::uint64_t>(a.data[i]));
  for (std::size_t i = 0; i < b.data.size(); ++i) EXPECT_EQ(std::bit_cast<std::uint64_t>(back.find("b").data[i]),
                                                            std::bit_cast<std::uint64_t>(b.data[i]));
  EXPECT_NE(back.metadata_json.find("\"label\""), std::string::npos);
  EXPECT_THROW(back.find("c"), std::out_of_range);
}

TEST_F(ArrayFileTest, FileStartsWithMagic) {
  write_array_file(path("m.kla"), ArrayFile{});
  std::ifstream in(path("m.kla"), std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  EXPECT_EQ(std::string(magic, 8), "KLARRAY1");
}

TEST_F(ArrayFileTest, RejectsCorruptFiles) {
  {
    std::ofstream out(path("bad.kla"), std::ios::binary);
    out << "NOTARRAY and then some";
  }
  EXPECT_THROW(read_array_file(path("bad.kla")), std::runtime_error);
  EXPECT_THROW(read_array_file(path("missing.kla")), std::runtime_error);

  ArrayFile file;
  file.arrays = {NamedArray{"a", {3}, {1.0, 2.0, 3.0}}};
  write_array_file(path("t.kla"), file);
  const auto size = fs::file_size(path("t.kla"));
  fs::resize_file(path("t.kla"), size - 4);
  EXPECT_THROW(read_array_file(path("t.kla")), std::runtime_error);
}

TEST_F(ArrayFileTest, RejectsShapeMismatchOnWrite) {
  ArrayFile file;
  file.arrays = {NamedArray{"a", {2, 2}, {1.0, 2.0, 3.0}}};
  EXPECT_THROW(write_array_file(path("s.kla"), file), std::invalid_argument);
}

TEST_F(ArrayFileTest, CheckpointRoundTrip) {
  const SpatialGrid space(8);
  const VelocityGrid velocity = build_velocity_grid(4);
  SolverConfig config;
  config.epsilon = 0.1;
  config.source = SourceSpec::single_mode(space, 0.05);
  const KineticSolver solver(space, velocity, config);
  DistributionField g = solver.zero_field();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& v : g.values()) v = u(rng);

  save_checkpoint(path("c.kla"), checkpoint_info(solver, 17, 3.5e-9), g);
  const Checkpoint c = load_checkpoint(path("c.kla"));
  EXPECT_EQ(c.g, g);
  EXPECT_EQ(c.info.steps, 17);
  EXPECT_EQ(c.info.residual, 3.5e-9);
  EXPECT_EQ(c.info.epsilon, 0.1);
  EXPECT_EQ(c.info.r, 0.5);
  EXPECT_EQ(c.info.q, 0.5);
  EXPECT_EQ(c.info.modes, 8);
  EXPECT_EQ(c.info.nodes_per_axis, 4);
  EXPECT_EQ(c.info.amplitude, 0.05);
  EXPECT_TRUE(c.info.nonlinear);

  const ArrayFile raw = read_array_file(path("c.kla"));
  EXPECT_EQ(raw.find("g").shape, (std::vector<std::uint64_t>{64, 8, 8}));

  ArrayFile not_checkpoint;
  write_array_file(path("plain.kla"), not_checkpoint);
  EXPECT_THROW(load_checkpoint(path("plain.kla")), std::runtime_error);
}

TEST_F(ArrayFileTest, FluidExportHasPhysicalFields) {
  const SpatialGrid grid(8);
  const Fft2d fft(grid);
  FluidState state = zero_state(grid);
  PhysicalField u1(grid.points());
  for (std::size_t x = 0; x < u1.size(); ++x) u1[x] = std::sin(grid.coordinate(static_cast<int>(x % 8)));
  state.u.x1 = to_spectral(fft, u1);
  export_fluid_state(path("f.kla"), fft, state, R"({"epsilon":0.1})");
  const ArrayFile f = read_array_file(path("f.kla"));
  for (const char* name : {"rho", "u1", "u2", "p", "theta"}) {
    EXPECT_EQ(f.find(name).shape, (std::vector<std::uint64_t>{8, 8})) << name;
  }
  for (std::size_t x = 0; x < u1.size(); ++x) EXPECT_NEAR(f.find("u1").data[x], u1[x], 1e-15);
  EXPECT_NE(f.metadata_json.find("epsilon"), std::string::npos);
}
