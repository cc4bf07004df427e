#include "kinlim/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace kinlim {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

// Weight of a half-complex column in a full-spectrum sum.
double column_multiplicity(int column, int modes) {
  return (column == 0 || column == modes / 2) ? 1.0 : 2.0;
}

}  // namespace

void* fftw_allocate_bytes(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void fftw_release_bytes(void* p) noexcept { fftw_free(p); }

SpatialGrid::SpatialGrid(int modes_per_axis)
    : modes_(modes_per_axis),
      half_(modes_per_axis / 2 + 1),
      spacing_(2.0 * std::numbers::pi / modes_per_axis) {
  if (modes_per_axis < 4 || modes_per_axis % 2 != 0) {
    throw std::invalid_argument("SpatialGrid: modes per axis must be even and >= 4");
  }
}

double SpatialGrid::derivative_x1(int row) const {
  return is_nyquist_row(row) ? 0.0 : static_cast<double>(wavenumber_x1(row));
}

double SpatialGrid::derivative_x2(int column) const {
  return is_nyquist_column(column) ? 0.0 : static_cast<double>(wavenumber_x2(column));
}

struct Fft2d::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

Fft2d::Fft2d(const SpatialGrid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const int m = grid.modes();
  RealBuffer real(grid.points());
  ComplexBuffer spec(grid.spectral_size());
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_2d(m, m, real.data(), as_fftw(spec.data()), FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_2d(m, m, as_fftw(spec.data()), real.data(), FFTW_ESTIMATE);
  if (plans_->forward == nullptr || plans_->inverse == nullptr) {
    throw std::runtime_error("Fft2d: FFTW planning failed");
  }
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward != nullptr) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse != nullptr) fftw_destroy_plan(plans_->inverse);
}

void Fft2d::forward(std::span<const double> physical, std::span<std::complex<double>> spectral) const {
  if (physical.size() != grid_.points() || spectral.size() != grid_.spectral_size()) {
    throw std::invalid_argument("Fft2d::forward: size mismatch");
  }
  const bool aligned = fftw_alignment_of(const_cast<double*>(physical.data())) == 0 &&
                       fftw_alignment_of(reinterpret_cast<double*>(spectral.data())) == 0;
  if (aligned) {
    // r2c never writes its input.
    fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(physical.data()), as_fftw(spectral.data()));
  } else {
    RealBuffer in(physical.begin(), physical.end());
    ComplexBuffer out(spectral.size());
    fftw_execute_dft_r2c(plans_->forward, in.data(), as_fftw(out.data()));
    std::copy(out.begin(), out.end(), spectral.begin());
  }
  const double scale = 1.0 / static_cast<double>(grid_.points());
  for (auto& c : spectral) c *= scale;
}

void Fft2d::inverse_destroy(std::span<std::complex<double>> spectral, std::span<double> physical) const {
  if (physical.size() != grid_.points() || spectral.size() != grid_.spectral_size()) {
    throw std::invalid_argument("Fft2d::inverse: size mismatch");
  }
  const bool aligned = fftw_alignment_of(physical.data()) == 0 &&
                       fftw_alignment_of(reinterpret_cast<double*>(spectral.data())) == 0;
  if (aligned) {
    fftw_execute_dft_c2r(plans_->inverse, as_fftw(spectral.data()), physical.data());
  } else {
    ComplexBuffer in(spectral.begin(), spectral.end());
    RealBuffer out(physical.size());
    fftw_execute_dft_c2r(plans_->inverse, as_fftw(in.data()), out.data());
    std::copy(out.begin(), out.end(), physical.begin());
  }
}

void Fft2d::inverse(std::span<const std::complex<double>> spectral, std::span<double> physical) const {
  ComplexBuffer scratch(spectral.begin(), spectral.end());
  inverse_destroy(scratch, physical);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
  return *this;
}
SpectralField& SpectralField::operator-=(const SpectralField& other) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= other.coeffs[i];
  return *this;
}
SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs) c *= scale;
  return *this;
}
SpectralField operator+(SpectralField lhs, const SpectralField& rhs) { return lhs += rhs; }
SpectralField operator-(SpectralField lhs, const SpectralField& rhs) { return lhs -= rhs; }
SpectralField operator*(double scale, SpectralField rhs) { return rhs *= scale; }

SpectralVector& SpectralVector::operator+=(const SpectralVector& other) {
  x1 += other.x1;
  x2 += other.x2;
  return *this;
}
SpectralVector& SpectralVector::operator-=(const SpectralVector& other) {
  x1 -= other.x1;
  x2 -= other.x2;
  return *this;
}
SpectralVector& SpectralVector::operator*=(double scale) {
  x1 *= scale;
  x2 *= scale;
  return *this;
}
SpectralVector operator+(SpectralVector lhs, const SpectralVector& rhs) { return lhs += rhs; }
SpectralVector operator-(SpectralVector lhs, const SpectralVector& rhs) { return lhs -= rhs; }
SpectralVector operator*(double scale, SpectralVector rhs) { return rhs *= scale; }

SpectralField to_spectral(const Fft2d& fft, std::span<const double> physical) {
  SpectralField field(fft.grid());
  fft.forward(physical, field.coeffs);
  return field;
}

PhysicalField to_physical(const Fft2d& fft, const SpectralField& field) {
  PhysicalField out(fft.grid().points());
  fft.inverse(field.coeffs, out);
  return out;
}

SpectralField d_dx1(const SpatialGrid& grid, const SpectralField& field) {
  SpectralField out(grid);
  for (int i = 0; i < grid.modes(); ++i) {
    const std::complex<double> ik(0.0, grid.derivative_x1(i));
    for (int j = 0; j < grid.half_columns(); ++j) out.at(i, j) = ik * field.at(i, j);
  }
  return out;
}

SpectralField d_dx2(const SpatialGrid& grid, const SpectralField& field) {
  SpectralField out(grid);
  for (int i = 0; i < grid.modes(); ++i) {
    for (int j = 0; j < grid.half_columns(); ++j) {
      out.at(i, j) = std::complex<double>(0.0, grid.derivative_x2(j)) * field.at(i, j);
    }
  }
  return out;
}

SpectralField laplacian(const SpatialGrid& grid, const SpectralField& field) {
  SpectralField out(grid);
  for (int i = 0; i < grid.modes(); ++i) {
    const double k1 = grid.wavenumber_x1(i);
    for (int j = 0; j < grid.half_columns(); ++j) {
      const double k2 = grid.wavenumber_x2(j);
      out.at(i, j) = -(k1 * k1 + k2 * k2) * field.at(i, j);
    }
  }
  return out;
}

SpectralVector gradient(const SpatialGrid& grid, const SpectralField& field) {
  SpectralVector out;
  out.x1 = d_dx1(grid, field);
  out.x2 = d_dx2(grid, field);
  return out;
}

SpectralField divergence(const SpatialGrid& grid, const SpectralVector& field) {
  return d_dx1(grid, field.x1) + d_dx2(grid, field.x2);
}

double l2_inner(const SpatialGrid& grid, const SpectralField& a, const SpectralField& b) {
  double sum = 0.0;
  for (int i = 0; i < grid.modes(); ++i) {
    for (int j = 0; j < grid.half_columns(); ++j) {
      sum += column_multiplicity(j, grid.modes()) * std::real(a.at(i, j) * std::conj(b.at(i, j)));
    }
  }
  const double area = 4.0 * std::numbers::pi * std::numbers::pi;
  return area * sum;
}

double l2_inner(const SpatialGrid& grid, const SpectralVector& a, const SpectralVector& b) {
  return l2_inner(grid, a.x1, b.x1) + l2_inner(grid, a.x2, b.x2);
}

double l2_norm(const SpatialGrid& grid, const SpectralField& field) {
  return std::sqrt(std::max(0.0, l2_inner(grid, field, field)));
}

double l2_norm(const SpatialGrid& grid, const SpectralVector& field) {
  return std::sqrt(std::max(0.0, l2_inner(grid, field, field)));
}

double l2_norm(const SpatialGrid& grid, std::span<const double> physical) {
  double sum = 0.0;
  for (double v : physical) sum += v * v;
  return std::sqrt(sum * grid.cell_area());
}

double hermitian_defect(const SpectralField& field) {
  const int m = field.modes;
  double defect = 0.0;
  for (int column : {0, m / 2}) {
    for (int i = 0; i < m; ++i) {
      const int mirror = (m - i) % m;
      defect = std::max(defect, std::abs(field.at(i, column) - std::conj(field.at(mirror, column))));
    }
  }
  return defect;
}

}  // namespace kinlim
