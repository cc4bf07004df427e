#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <span>
#include <utility>
#include <vector>

// Fourier machinery on the periodic square [0, 2 pi)^2.
namespace kinlim {

// Allocator backed by fftw_malloc so buffers satisfy FFTW's SIMD alignment.
template <typename T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <typename U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;
  friend bool operator==(const FftwAllocator&, const FftwAllocator&) { return true; }
};

void* fftw_allocate_bytes(std::size_t bytes);
void fftw_release_bytes(void* p) noexcept;

template <typename T>
T* FftwAllocator<T>::allocate(std::size_t n) {
  return static_cast<T*>(fftw_allocate_bytes(n * sizeof(T)));
}
template <typename T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  fftw_release_bytes(p);
}

using RealBuffer = std::vector<double, FftwAllocator<double>>;
using ComplexBuffer = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

// M x M collocation grid. Physical arrays are row major with the x1 index
// outermost: value(x1_i, x2_j) lives at i * M + j. Spectral arrays use the
// half-complex layout of a real-to-complex transform: M x (M/2 + 1).
class SpatialGrid {
 public:
  explicit SpatialGrid(int modes_per_axis);

  int modes() const { return modes_; }
  std::size_t points() const { return static_cast<std::size_t>(modes_) * modes_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(modes_) * half_; }
  int half_columns() const { return half_; }
  double spacing() const { return spacing_; }
  double coordinate(int index) const { return spacing_ * index; }
  double cell_area() const { return spacing_ * spacing_; }

  // Signed wavenumber of spectral row i (x1 direction), in -M/2+1 .. M/2.
  int wavenumber_x1(int row) const { return row <= modes_ / 2 ? row : row - modes_; }
  // Wavenumber of spectral column j (x2 direction), in 0 .. M/2.
  int wavenumber_x2(int column) const { return column; }
  // Wavenumber used for first derivatives and advection phases: the Nyquist
  // entry is zeroed so odd operators keep real fields real.
  double derivative_x1(int row) const;
  double derivative_x2(int column) const;
  bool is_nyquist_row(int row) const { return row == modes_ / 2; }
  bool is_nyquist_column(int column) const { return column == modes_ / 2; }

 private:
  int modes_;
  int half_;
  double spacing_;
};

// Owns FFTW plans for one grid size. Transforms are normalized so that the
// zero mode of forward() is the spatial mean. Plans are created with
// FFTW_ESTIMATE, which makes every transform deterministic run to run.
// Executing a plan is thread safe; construction is serialized internally.
class Fft2d {
 public:
  explicit Fft2d(const SpatialGrid& grid);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  const SpatialGrid& grid() const { return grid_; }

  // physical (M*M) -> spectral (M*(M/2+1)); input is preserved.
  void forward(std::span<const double> physical, std::span<std::complex<double>> spectral) const;
  // spectral -> physical. The spectral buffer is used as scratch and is
  // overwritten.
  void inverse_destroy(std::span<std::complex<double>> spectral, std::span<double> physical) const;
  // Same as inverse_destroy but leaves its input intact.
  void inverse(std::span<const std::complex<double>> spectral, std::span<double> physical) const;

 private:
  struct Plans;
  SpatialGrid grid_;
  std::unique_ptr<Plans> plans_;
};

// Spectral representation of a real scalar field.
struct SpectralField {
  int modes = 0;
  ComplexBuffer coeffs;

  SpectralField() = default;
  explicit SpectralField(const SpatialGrid& grid) : modes(grid.modes()), coeffs(grid.spectral_size()) {}

  std::complex<double>& at(int row, int column) { return coeffs[static_cast<std::size_t>(row) * (modes / 2 + 1) + column]; }
  const std::complex<double>& at(int row, int column) const {
    return coeffs[static_cast<std::size_t>(row) * (modes / 2 + 1) + column];
  }
  std::complex<double> mean() const { return coeffs.empty() ? 0.0 : coeffs[0]; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
};

SpectralField operator+(SpectralField lhs, const SpectralField& rhs);
SpectralField operator-(SpectralField lhs, const SpectralField& rhs);
SpectralField operator*(double scale, SpectralField rhs);

// Two-component vector field (x1, x2) in spectral form.
struct SpectralVector {
  SpectralField x1;
  SpectralField x2;

  SpectralVector() = default;
  explicit SpectralVector(const SpatialGrid& grid) : x1(grid), x2(grid) {}
  SpectralVector(SpectralField first, SpectralField second) : x1(std::move(first)), x2(std::move(second)) {}

  SpectralVector& operator+=(const SpectralVector& other);
  SpectralVector& operator-=(const SpectralVector& other);
  SpectralVector& operator*=(double scale);
};

SpectralVector operator+(SpectralVector lhs, const SpectralVector& rhs);
SpectralVector operator-(SpectralVector lhs, const SpectralVector& rhs);
SpectralVector operator*(double scale, SpectralVector rhs);

// Physical scalar field sampled on the grid.
using PhysicalField = std::vector<double>;

SpectralField to_spectral(const Fft2d& fft, std::span<const double> physical);
PhysicalField to_physical(const Fft2d& fft, const SpectralField& field);

SpectralField d_dx1(const SpatialGrid& grid, const SpectralField& field);
SpectralField d_dx2(const SpatialGrid& grid, const SpectralField& field);
SpectralField laplacian(const SpatialGrid& grid, const SpectralField& field);
SpectralVector gradient(const SpatialGrid& grid, const SpectralField& field);
SpectralField divergence(const SpatialGrid& grid, const SpectralVector& field);

// Torus L2 norms: sqrt(sum |f|^2 dx^2) over the collocation points, evaluated
// spectrally via Parseval so no transform is needed.
double l2_norm(const SpatialGrid& grid, const SpectralField& field);
double l2_norm(const SpatialGrid& grid, const SpectralVector& field);
// Torus inner product of two real fields, also via Parseval.
double l2_inner(const SpatialGrid& grid, const SpectralField& a, const SpectralField& b);
double l2_inner(const SpatialGrid& grid, const SpectralVector& a, const SpectralVector& b);

// Physical-space L2 norm, for fields that only exist on the grid.
double l2_norm(const SpatialGrid& grid, std::span<const double> physical);

// Largest violation of Hermitian symmetry in the self-conjugate columns
// (x2 wavenumber 0 and M/2) and of reality of the self-conjugate modes.
double hermitian_defect(const SpectralField& field);

}  // namespace kinlim
