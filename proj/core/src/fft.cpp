#include "modspec/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace modspec::fft {
namespace {

using Key = std::tuple<int, int, int, int, int, bool>;

struct PlanCache {
  std::mutex mu;
  std::map<Key, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan plan_for(int dim, const std::array<int, kMaxDim>& shape, Direction dir, bool inplace) {
  const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  const Key key{dim, shape[0], dim > 1 ? shape[1] : 1, dim > 2 ? shape[2] : 1, sign, inplace};
  auto& c = cache();
  std::lock_guard lock(c.mu);
  if (auto it = c.plans.find(key); it != c.plans.end()) return it->second;
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(shape[a]);
  auto* a = fftw_alloc_complex(n);
  auto* b = inplace ? a : fftw_alloc_complex(n);
  fftw_plan p = fftw_plan_dft(dim, shape.data(), a, b, sign, FFTW_ESTIMATE);
  if (!inplace) fftw_free(b);
  fftw_free(a);
  if (!p) throw std::runtime_error("fftw: plan creation failed");
  c.plans.emplace(key, p);
  return p;
}

std::size_t total(int dim, const std::array<int, kMaxDim>& shape) {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(shape[a]);
  return n;
}

}  // namespace

void execute(int dim, const std::array<int, kMaxDim>& shape, Direction dir, const cplx* in,
             cplx* out) {
  const bool inplace = in == out;
  fftw_plan p = plan_for(dim, shape, dir, inplace);
  // Out-of-place complex plans preserve their input by default.
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void forward_unitary(int dim, const std::array<int, kMaxDim>& shape, const cplx* in, cplx* out) {
  execute(dim, shape, Direction::Forward, in, out);
  const std::size_t n = total(dim, shape);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) out[i] *= s;
}

void inverse_unitary(int dim, const std::array<int, kMaxDim>& shape, const cplx* in, cplx* out) {
  execute(dim, shape, Direction::Backward, in, out);
  const std::size_t n = total(dim, shape);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) out[i] *= s;
}

std::size_t cached_plans() {
  auto& c = cache();
  std::lock_guard lock(c.mu);
  return c.plans.size();
}

}  // namespace modspec::fft
