#include "lsts/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace lsts {

namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans are created with FFTW_UNALIGNED so they can be executed on arbitrary
// arrays through the new-array interface, which is thread-safe.
fftw_plan r2c_plan(int n) {
  static std::map<int, Plan> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second.get();
  std::vector<double> in(static_cast<size_t>(n));
  std::vector<fftw_complex> out(static_cast<size_t>(n / 2 + 1));
  fftw_plan p = fftw_plan_dft_r2c_1d(n, in.data(), out.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
  cache.emplace(n, Plan(p));
  return p;
}

fftw_plan c2c_plan(int n) {
  static std::map<int, Plan> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second.get();
  std::vector<fftw_complex> in(static_cast<size_t>(n)), out(static_cast<size_t>(n));
  fftw_plan p = fftw_plan_dft_1d(n, in.data(), out.data(), FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, Plan(p));
  return p;
}

}  // namespace

std::vector<std::complex<double>> rfft(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> out(static_cast<size_t>(n / 2 + 1));
  if (n == 0) return {};
  std::vector<double> in(x);
  fftw_execute_dft_r2c(r2c_plan(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return {};
  std::vector<std::complex<double>> in(x), out(x.size());
  fftw_execute_dft(c2c_plan(n), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> cosine_sums(const std::vector<double>& x) {
  const auto z = rfft(x);
  std::vector<double> out(z.size());
  for (size_t k = 0; k < z.size(); ++k) out[k] = z[k].real();
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace lsts
