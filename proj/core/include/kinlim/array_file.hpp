#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kinlim/fluid_reference.hpp"
#include "kinlim/kinetic_solver.hpp"

namespace kinlim {

// Layout (see docs/array_file_format.md):
//   8 bytes   magic "KLARRAY1"
//   8 bytes   header length H, uint64 little endian
//   H bytes   UTF-8 JSON header
//   payload   float64 little endian, arrays back to back
struct NamedArray {
  std::string name;
  std::vector<std::uint64_t> shape;
  std::vector<double> data;
};

struct ArrayFile {
  // JSON object text, stored verbatim under "metadata".
  std::string metadata_json = "{}";
  std::vector<NamedArray> arrays;

  const NamedArray& find(const std::string& name) const;
};

void write_array_file(const std::filesystem::path& path, const ArrayFile& file);
ArrayFile read_array_file(const std::filesystem::path& path);

struct CheckpointInfo {
  double epsilon = 0.0;
  double r = 0.0;
  double q = 0.0;
  double nu0 = 0.0;
  double dt_safety = 0.0;
  double steady_tol = 0.0;
  long max_steps = 0;
  double amplitude = 0.0;
  bool nonlinear = true;
  int modes = 0;
  int nodes_per_axis = 0;
  long steps = 0;
  double residual = 0.0;
};

struct Checkpoint {
  CheckpointInfo info;
  DistributionField g;
};

CheckpointInfo checkpoint_info(const KineticSolver& solver, long steps, double residual);

// g is stored as one array "g" of shape [velocity nodes, M, M].
void save_checkpoint(const std::filesystem::path& path, const CheckpointInfo& info, const DistributionField& g);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Physical-space rho, u1, u2, p, theta, each of shape [M, M].
void export_fluid_state(const std::filesystem::path& path, const Fft2d& fft, const FluidState& state,
                        const std::string& metadata_json = "{}");

}  // namespace kinlim
