#include "kinlim/array_file.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace kinlim {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'K', 'L', 'A', 'R', 'R', 'A', 'Y', '1'};
constexpr int kFormatVersion = 1;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int b = 0; b < 8; ++b) out |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return out;
  }
}

void write_u64(std::ostream& out, std::uint64_t v) {
  const std::uint64_t le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t le = 0;
  in.read(reinterpret_cast<char*>(&le), sizeof le);
  return to_little(le);
}

std::uint64_t element_count(const std::vector<std::uint64_t>& shape) {
  std::uint64_t n = 1;
  for (auto extent : shape) n *= extent;
  return n;
}

std::runtime_error file_error(const std::filesystem::path& path, const std::string& what) {
  return std::runtime_error(path.string() + ": " + what);
}

}  // namespace

const NamedArray& ArrayFile::find(const std::string& name) const {
  auto it = std::find_if(arrays.begin(), arrays.end(), [&](const NamedArray& a) { return a.name == name; });
  if (it == arrays.end()) throw std::out_of_range("array file has no array named " + name);
  return *it;
}

void write_array_file(const std::filesystem::path& path, const ArrayFile& file) {
  json header;
  header["format"] = "kinlim-array";
  header["version"] = kFormatVersion;
  header["metadata"] = json::parse(file.metadata_json);
  header["arrays"] = json::array();
  std::uint64_t offset = 0;
  for (const auto& a : file.arrays) {
    if (element_count(a.shape) != a.data.size()) {
      throw std::invalid_argument("write_array_file: shape of " + a.name + " does not match its data");
    }
    header["arrays"].push_back({{"name", a.name}, {"shape", a.shape}, {"dtype", "float64-le"}, {"offset", offset}});
    offset += a.data.size() * sizeof(double);
  }
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw file_error(path, "cannot open for writing");
  out.write(kMagic, sizeof kMagic);
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& a : file.arrays) {
    for (double v : a.data) write_u64(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw file_error(path, "write failed");
}

ArrayFile read_array_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw file_error(path, "cannot open for reading");
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw file_error(path, "not a kinlim array file");
  const std::uint64_t length = read_u64(in);
  if (!in || length > (1u << 30)) throw file_error(path, "corrupt header length");
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw file_error(path, "truncated header");

  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw file_error(path, std::string("bad header: ") + e.what());
  }
  if (header.value("version", 0) != kFormatVersion) throw file_error(path, "unsupported format version");

  ArrayFile file;
  file.metadata_json = header.at("metadata").dump();
  std::uint64_t expected_offset = 0;
  for (const auto& entry : header.at("arrays")) {
    NamedArray a;
    a.name = entry.at("name").get<std::string>();
    a.shape = entry.at("shape").get<std::vector<std::uint64_t>>();
    if (entry.at("dtype").get<std::string>() != "float64-le") throw file_error(path, "unsupported dtype for " + a.name);
    if (entry.at("offset").get<std::uint64_t>() != expected_offset) throw file_error(path, "bad offset for " + a.name);
    a.data.resize(element_count(a.shape));
    for (auto& v : a.data) v = std::bit_cast<double>(read_u64(in));
    if (!in) throw file_error(path, "truncated data in " + a.name);
    expected_offset += a.data.size() * sizeof(double);
    file.arrays.push_back(std::move(a));
  }
  return file;
}

CheckpointInfo checkpoint_info(const KineticSolver& solver, long steps, double residual) {
  const auto& c = solver.config();
  CheckpointInfo info;
  info.epsilon = c.epsilon;
  info.r = c.regime.r;
  info.q = c.regime.q;
  info.nu0 = c.nu0;
  info.dt_safety = c.dt_safety;
  info.steady_tol = c.steady_tol;
  info.max_steps = c.max_steps;
  info.amplitude = c.source.amplitude;
  info.nonlinear = c.nonlinear;
  info.modes = solver.space().modes();
  info.nodes_per_axis = solver.velocity().nodes_per_axis();
  info.steps = steps;
  info.residual = residual;
  return info;
}

void save_checkpoint(const std::filesystem::path& path, const CheckpointInfo& info, const DistributionField& g) {
  const auto m = static_cast<std::uint64_t>(info.modes);
  if (m * m != g.points()) throw std::invalid_argument("save_checkpoint: grid size does not match the field");
  json meta = {{"kind", "kinetic-checkpoint"},
               {"epsilon", info.epsilon},
               {"r", info.r},
               {"q", info.q},
               {"nu0", info.nu0},
               {"dt_safety", info.dt_safety},
               {"steady_tol", info.steady_tol},
               {"max_steps", info.max_steps},
               {"amplitude", info.amplitude},
               {"nonlinear", info.nonlinear},
               {"modes", info.modes},
               {"nodes_per_axis", info.nodes_per_axis},
               {"steps", info.steps},
               {"residual", info.residual}};
  ArrayFile file;
  file.metadata_json = meta.dump();
  const auto values = g.values();
  file.arrays.push_back({"g", {g.velocities(), m, m}, std::vector<double>(values.begin(), values.end())});
  write_array_file(path, file);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const ArrayFile file = read_array_file(path);
  const json meta = json::parse(file.metadata_json);
  if (meta.value("kind", "") != "kinetic-checkpoint") throw file_error(path, "not a kinetic checkpoint");
  Checkpoint cp;
  auto& info = cp.info;
  try {
    info.epsilon = meta.at("epsilon").get<double>();
    info.r = meta.at("r").get<double>();
    info.q = meta.at("q").get<double>();
    info.nu0 = meta.at("nu0").get<double>();
    info.dt_safety = meta.at("dt_safety").get<double>();
    info.steady_tol = meta.at("steady_tol").get<double>();
    info.max_steps = meta.at("max_steps").get<long>();
    info.amplitude = meta.at("amplitude").get<double>();
    info.nonlinear = meta.at("nonlinear").get<bool>();
    info.modes = meta.at("modes").get<int>();
    info.nodes_per_axis = meta.at("nodes_per_axis").get<int>();
    info.steps = meta.at("steps").get<long>();
    info.residual = meta.at("residual").get<double>();
  } catch (const json::exception& e) {
    throw file_error(path, std::string("bad checkpoint metadata: ") + e.what());
  }
  const NamedArray& g = file.find("g");
  const auto m = static_cast<std::uint64_t>(info.modes);
  const auto nv = static_cast<std::uint64_t>(info.nodes_per_axis) * info.nodes_per_axis * info.nodes_per_axis;
  if (g.shape != std::vector<std::uint64_t>{nv, m, m}) throw file_error(path, "g has the wrong shape");
  cp.g = DistributionField(m * m, nv);
  std::copy(g.data.begin(), g.data.end(), cp.g.values().begin());
  return cp;
}

void export_fluid_state(const std::filesystem::path& path, const Fft2d& fft, const FluidState& state,
                        const std::string& metadata_json) {
  const auto m = static_cast<std::uint64_t>(fft.grid().modes());
  ArrayFile file;
  file.metadata_json = metadata_json;
  auto add = [&](const char* name, const SpectralField& field) {
    file.arrays.push_back({name, {m, m}, to_physical(fft, field)});
  };
  add("rho", state.rho);
  add("u1", state.u.x1);
  add("u2", state.u.x2);
  add("p", state.p);
  add("theta", state.theta);
  write_array_file(path, file);
}

}  // namespace kinlim
