#include "kinlim/kinetic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kinlim/errors.hpp"

namespace kinlim {
namespace {

constexpr double kResidualFloor = 1e-14;
constexpr std::size_t kCollisionBlock = 64;

}  // namespace

bool DistributionField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

KineticSolver::KineticSolver(const SpatialGrid& space, const VelocityGrid& velocity, SolverConfig config)
    : space_(space), velocity_(velocity), config_(std::move(config)), fft_(std::make_unique<Fft2d>(space)) {
  if (!(config_.epsilon > 0.0)) throw std::invalid_argument("KineticSolver: epsilon must be positive");
  if (!(config_.nu0 > 0.0)) throw std::invalid_argument("KineticSolver: nu0 must be positive");
  if (!(config_.dt_safety > 0.0 && config_.dt_safety <= 1.0)) {
    throw std::invalid_argument("KineticSolver: dt_safety must lie in (0, 1]");
  }
  if (!(config_.regime.r > 0.0 && config_.regime.q > 0.0)) {
    throw std::invalid_argument("KineticSolver: r and q must be positive");
  }
  if (config_.threads < 1) config_.threads = 1;
  if (config_.source.f1.empty()) config_.source = SourceSpec::zero(space_);
  config_.source.validate(*fft_, 1e-10);

  dt_ = config_.dt_safety * config_.epsilon * space_.spacing() / velocity_.max_speed();
  lambda_ = config_.nu0 * dt_ / std::pow(config_.epsilon, 1.0 + config_.regime.q);
  if (!std::isfinite(lambda_)) throw StiffnessOverflow("KineticSolver: relaxation number is not finite");

  heat_profile_.resize(velocity_.size());
  const double shape = static_cast<double>(kHeatProfileNumerator) / kHeatProfileDenominator;
  for (std::size_t k = 0; k < velocity_.size(); ++k) {
    const auto& v = velocity_.node(k);
    heat_profile_[k] = shape * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 3.0);
  }
}

KineticSolver::~KineticSolver() = default;

template <typename Fn>
void KineticSolver::parallel_for(std::size_t count, Fn&& fn) const {
  // fn(begin, end, worker). Chunks are fixed by count and thread number, and
  // every output element is written by exactly one worker.
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config_.threads), count);
  if (workers <= 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  fn(std::size_t{0}, std::min(count, chunk), std::size_t{0});
}

DistributionField KineticSolver::zero_field() const {
  return DistributionField(space_.points(), velocity_.size());
}

double KineticSolver::source_scale() const {
  return std::pow(config_.epsilon, source_exponent(config_.regime));
}

void KineticSolver::transport_step(DistributionField& g, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("transport_step: dt must be positive");
  const int m = space_.modes();
  const int half = space_.half_columns();
  const int n = velocity_.nodes_per_axis();
  const double shift = dt / config_.epsilon;

  // exp(-i k v dt / eps) factors per axis node value.
  std::vector<std::complex<double>> phase1(static_cast<std::size_t>(n) * m);
  std::vector<std::complex<double>> phase2(static_cast<std::size_t>(n) * half);
  for (int a = 0; a < n; ++a) {
    const double v = velocity_.abscissae()[a];
    for (int i = 0; i < m; ++i) phase1[a * m + i] = std::polar(1.0, -space_.derivative_x1(i) * v * shift);
    for (int j = 0; j < half; ++j) phase2[a * half + j] = std::polar(1.0, -space_.derivative_x2(j) * v * shift);
  }

  parallel_for(velocity_.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
    ComplexBuffer spectrum(space_.spectral_size());
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t a = k / (static_cast<std::size_t>(n) * n);
      const std::size_t b = (k / n) % n;
      auto slice = g.node(k);
      fft_->forward(slice, spectrum);
      const auto* p1 = &phase1[a * m];
      const auto* p2 = &phase2[b * half];
      for (int i = 0; i < m; ++i) {
        auto* row = &spectrum[static_cast<std::size_t>(i) * half];
        const std::complex<double> pi = p1[i];
        for (int j = 0; j < half; ++j) row[j] *= pi * p2[j];
      }
      fft_->inverse_destroy(spectrum, slice);
    }
  });
}

void KineticSolver::collision_step(DistributionField& g, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("collision_step: dt must be positive");
  const double lambda = config_.nu0 * dt / std::pow(config_.epsilon, 1.0 + config_.regime.q);
  if (!std::isfinite(lambda)) throw StiffnessOverflow("collision_step: relaxation number is not finite");
  const double decay = std::exp(-lambda);
  const double quadratic =
      config_.nonlinear ? 0.5 * (1.0 - decay) * std::pow(config_.epsilon, config_.regime.r) : 0.0;

  const std::size_t nv = velocity_.size();
  const std::size_t np = space_.points();
  parallel_for(np, [&](std::size_t begin, std::size_t end, std::size_t) {
    // Blocks of kCollisionBlock points keep the ten coefficient accumulators
    // in cache. The velocity sum runs in node order for every point.
    std::array<double, 5 * kCollisionBlock> cg;
    std::array<double, 5 * kCollisionBlock> cg2;
    std::array<double, kCollisionBlock> pg;
    std::array<double, kCollisionBlock> pg2;
    for (std::size_t block = begin; block < end; block += kCollisionBlock) {
      const std::size_t width = std::min(kCollisionBlock, end - block);
      cg.fill(0.0);
      cg2.fill(0.0);
      for (std::size_t k = 0; k < nv; ++k) {
        const double* gk = g.node(k).data() + block;
        for (int mm = 0; mm < 5; ++mm) {
          const double row = velocity_.coefficient_row(mm)[k];
          double* c1 = &cg[mm * kCollisionBlock];
          double* c2 = &cg2[mm * kCollisionBlock];
          for (std::size_t x = 0; x < width; ++x) {
            c1[x] += row * gk[x];
            c2[x] += row * gk[x] * gk[x];
          }
        }
      }
      for (std::size_t k = 0; k < nv; ++k) {
        pg.fill(0.0);
        pg2.fill(0.0);
        for (int mm = 0; mm < 5; ++mm) {
          const double basis = velocity_.invariant_values(mm)[k];
          const double* c1 = &cg[mm * kCollisionBlock];
          const double* c2 = &cg2[mm * kCollisionBlock];
          for (std::size_t x = 0; x < width; ++x) {
            pg[x] += basis * c1[x];
            pg2[x] += basis * c2[x];
          }
        }
        double* gk = g.node(k).data() + block;
        for (std::size_t x = 0; x < width; ++x) {
          const double value = gk[x];
          gk[x] = pg[x] + decay * (value - pg[x]) + quadratic * (value * value - pg2[x]);
        }
      }
    }
  });
}

void KineticSolver::apply_source(DistributionField& g, double dt) const {
  const double scale = dt / config_.epsilon * source_scale();
  if (scale == 0.0) return;
  const auto& src = config_.source;
  parallel_for(velocity_.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto& v = velocity_.node(k);
      const double c1 = scale * v[0];
      const double c2 = scale * v[1];
      const double ch = scale * heat_profile_[k];
      auto slice = g.node(k);
      for (std::size_t x = 0; x < slice.size(); ++x) {
        slice[x] += c1 * src.f1[x] + c2 * src.f2[x] + ch * src.h[x];
      }
    }
  });
}

void KineticSolver::step(DistributionField& g) const {
  transport_step(g, 0.5 * dt_);
  collision_step(g, dt_);
  apply_source(g, dt_);
  transport_step(g, 0.5 * dt_);
}

double discrete_l2_norm(const SpatialGrid& space, const VelocityGrid& velocity, const DistributionField& g) {
  double sum = 0.0;
  for (std::size_t k = 0; k < velocity.size(); ++k) {
    double node_sum = 0.0;
    for (double v : g.node(k)) node_sum += v * v;
    sum += velocity.weights()[k] * node_sum;
  }
  return std::sqrt(sum * space.cell_area());
}

double KineticSolver::step_residual(const DistributionField& previous, const DistributionField& next) const {
  double diff = 0.0;
  double base = 0.0;
  for (std::size_t k = 0; k < velocity_.size(); ++k) {
    const auto a = previous.node(k);
    const auto b = next.node(k);
    double d = 0.0;
    double s = 0.0;
    for (std::size_t x = 0; x < a.size(); ++x) {
      const double delta = b[x] - a[x];
      d += delta * delta;
      s += a[x] * a[x];
    }
    diff += velocity_.weights()[k] * d;
    base += velocity_.weights()[k] * s;
  }
  const double area = space_.cell_area();
  return std::sqrt(diff * area) / (dt_ * std::sqrt(base * area) + kResidualFloor);
}

SteadyState KineticSolver::run_to_steady(DistributionField g0) const {
  if (g0.points() != space_.points() || g0.velocities() != velocity_.size()) {
    throw std::invalid_argument("run_to_steady: initial field does not match the grids");
  }
  // Adjacent half transports are fused into one full transport, so the loop
  // carries the post-collision state c^n with g^n = T(dt/2) c^n. T is unitary,
  // hence ||g^n - g^(n-1)|| = ||c^n - c^(n-1)|| and ||g^n|| = ||c^n||.
  auto not_converged = [&](double residual, long steps) {
    std::ostringstream msg;
    if (std::isfinite(residual)) {
      msg << "run_to_steady: residual " << residual << " above tolerance " << config_.steady_tol << " after "
          << steps << " steps";
    } else {
      msg << "run_to_steady: non-finite residual at step " << steps;
    }
    return NotConverged(msg.str(), residual, steps);
  };

  DistributionField current = std::move(g0);
  DistributionField previous = current;
  transport_step(current, 0.5 * dt_);
  collision_step(current, dt_);
  apply_source(current, dt_);
  {
    DistributionField first = current;
    transport_step(first, 0.5 * dt_);
    const double residual = step_residual(previous, first);
    if (!std::isfinite(residual)) throw not_converged(residual, 1);
    if (residual < config_.steady_tol || config_.max_steps <= 1) {
      if (!(residual < config_.steady_tol)) throw not_converged(residual, 1);
      return SteadyState{std::move(first), 1, residual};
    }
  }

  double residual = 0.0;
  for (long n = 2; n <= config_.max_steps; ++n) {
    std::copy(current.values().begin(), current.values().end(), previous.values().begin());
    transport_step(current, dt_);
    collision_step(current, dt_);
    apply_source(current, dt_);
    residual = step_residual(previous, current);
    if (!std::isfinite(residual)) throw not_converged(residual, n);
    if (residual < config_.steady_tol) {
      transport_step(current, 0.5 * dt_);
      return SteadyState{std::move(current), n, residual};
    }
  }
  throw not_converged(residual, config_.max_steps);
}

MomentFields KineticSolver::extract_moments(const DistributionField& g) const {
  const std::size_t np = space_.points();
  MomentFields mf;
  mf.rho.assign(np, 0.0);
  mf.u1.assign(np, 0.0);
  mf.u2.assign(np, 0.0);
  mf.u3.assign(np, 0.0);
  mf.theta.assign(np, 0.0);
  for (std::size_t k = 0; k < velocity_.size(); ++k) {
    const auto& v = velocity_.node(k);
    const double w = velocity_.weights()[k];
    const double wt = w * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 3.0) / 3.0;
    const auto slice = g.node(k);
    for (std::size_t x = 0; x < np; ++x) {
      const double value = slice[x];
      mf.rho[x] += w * value;
      mf.u1[x] += w * v[0] * value;
      mf.u2[x] += w * v[1] * value;
      mf.u3[x] += w * v[2] * value;
      mf.theta[x] += wt * value;
    }
  }
  return mf;
}

std::array<double, 5> KineticSolver::conserved_means(const DistributionField& g) const {
  std::array<double, 5> sums{};
  for (std::size_t k = 0; k < velocity_.size(); ++k) {
    double node_sum = 0.0;
    for (double value : g.node(k)) node_sum += value;
    const double w = velocity_.weights()[k] * node_sum;
    for (int m = 0; m < 5; ++m) sums[m] += w * velocity_.invariant_values(m)[k];
  }
  for (auto& s : sums) s /= static_cast<double>(space_.points());
  return sums;
}

void add_separable(DistributionField& g, const VelocityGrid& velocity, std::span<const double> spatial,
                   const VelocityPolynomial& profile) {
  const std::vector<double> values = velocity.sample(profile);
  for (std::size_t k = 0; k < velocity.size(); ++k) {
    auto slice = g.node(k);
    for (std::size_t x = 0; x < slice.size(); ++x) slice[x] += values[k] * spatial[x];
  }
}

}  // namespace kinlim
