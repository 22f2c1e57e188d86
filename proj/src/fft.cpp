#include "pide/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "pide/errors.hpp"

namespace pide::fft {

namespace {

enum class PlanKind { R2C, C2R, Forward, Inverse };

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(PlanKind kind, std::size_t n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // Planning scratch only; execution always uses caller arrays.
    const int len = static_cast<int>(n);
    double* rbuf = fftw_alloc_real(n);
    fftw_complex* cbuf = fftw_alloc_complex(n);
    fftw_complex* cbuf2 = fftw_alloc_complex(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    switch (kind) {
      case PlanKind::R2C:
        plan = fftw_plan_dft_r2c_1d(len, rbuf, cbuf, flags);
        break;
      case PlanKind::C2R:
        plan = fftw_plan_dft_c2r_1d(len, cbuf, rbuf, flags);
        break;
      case PlanKind::Forward:
        plan = fftw_plan_dft_1d(len, cbuf, cbuf2, FFTW_FORWARD, flags);
        break;
      case PlanKind::Inverse:
        plan = fftw_plan_dft_1d(len, cbuf, cbuf2, FFTW_BACKWARD, flags);
        break;
    }
    fftw_free(rbuf);
    fftw_free(cbuf);
    fftw_free(cbuf2);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<PlanKind, std::size_t>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void forward_real(std::span<const double> in, std::span<cplx> out) {
  const std::size_t n = in.size();
  if (out.size() != n / 2 + 1) throw InvalidArgument("forward_real: output must hold n/2+1 bins");
  fftw_plan plan = cache().get(PlanKind::R2C, n);
  // r2c never writes its input, the cast only satisfies the C signature.
  fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()), as_fftw(out.data()));
}

void inverse_real(std::span<const cplx> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (in.size() != n / 2 + 1) throw InvalidArgument("inverse_real: input must hold n/2+1 bins");
  fftw_plan plan = cache().get(PlanKind::C2R, n);
  // c2r destroys its input.
  std::vector<cplx> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plan, as_fftw(scratch.data()), out.data());
}

void forward(std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != out.size()) throw InvalidArgument("fft::forward: size mismatch");
  fftw_plan plan = cache().get(PlanKind::Forward, in.size());
  fftw_execute_dft(plan, as_fftw(const_cast<cplx*>(in.data())), as_fftw(out.data()));
}

void inverse(std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != out.size()) throw InvalidArgument("fft::inverse: size mismatch");
  fftw_plan plan = cache().get(PlanKind::Inverse, in.size());
  fftw_execute_dft(plan, as_fftw(const_cast<cplx*>(in.data())), as_fftw(out.data()));
}

std::vector<cplx> expand_hermitian(std::span<const cplx> half, std::size_t n) {
  std::vector<cplx> full(n);
  std::copy(half.begin(), half.end(), full.begin());
  for (std::size_t k = n / 2 + 1; k < n; ++k) full[k] = std::conj(half[n - k]);
  return full;
}

}  // namespace pide::fft
