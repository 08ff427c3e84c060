#include "hvlab/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "hvlab/error.hpp"
#include "hvlab/grid.hpp"

namespace hvlab::spectral {
namespace {

struct PlanKey {
  std::vector<int> shape;
  int axis;
  int sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(shape, axis, sign) < std::tie(o.shape, o.axis, o.sign);
  }
};

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::span<const int> shape, int axis, int sign) {
    PlanKey key{std::vector<int>(shape.begin(), shape.end()), axis, sign};
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const int rank = static_cast<int>(shape.size());
    long inner = 1;
    for (int b = axis + 1; b < rank; ++b) inner *= shape[b];
    long outer = 1;
    for (int b = 0; b < axis; ++b) outer *= shape[b];
    const int n = shape[axis];

    fftw_iodim dim{n, static_cast<int>(inner), static_cast<int>(inner)};
    std::vector<fftw_iodim> many;
    if (outer > 1) {
      many.push_back({static_cast<int>(outer), static_cast<int>(n * inner), static_cast<int>(n * inner)});
    }
    if (inner > 1) many.push_back({static_cast<int>(inner), 1, 1});

    const std::size_t total = static_cast<std::size_t>(outer) * n * inner;
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    fftw_plan plan = fftw_plan_guru_dft(1, &dim, static_cast<int>(many.size()), many.data(), scratch,
                                        scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw std::runtime_error("fftw: failed to build plan");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void dft_axis(cplx* data, std::span<const int> shape, int axis, int sign) {
  if (axis < 0 || axis >= static_cast<int>(shape.size())) {
    throw DomainError("dft_axis: axis " + std::to_string(axis) + " out of range");
  }
  fftw_plan plan = cache().get(shape, axis, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

void dft_columns(Eigen::MatrixXcd& a, int sign) {
  // Column-major rows x cols is row-major (cols, rows).
  const int shape[2] = {static_cast<int>(a.cols()), static_cast<int>(a.rows())};
  dft_axis(a.data(), shape, 1, sign);
}

void dft_rows(Eigen::MatrixXcd& a, int sign) {
  const int shape[2] = {static_cast<int>(a.cols()), static_cast<int>(a.rows())};
  dft_axis(a.data(), shape, 0, sign);
}

Eigen::VectorXcd fft(const Eigen::VectorXcd& f) {
  Eigen::VectorXcd out = f;
  const int shape[1] = {static_cast<int>(f.size())};
  dft_axis(out.data(), shape, 0, kForward);
  return out;
}

Eigen::VectorXcd ifft(const Eigen::VectorXcd& f) {
  Eigen::VectorXcd out = f;
  const int shape[1] = {static_cast<int>(f.size())};
  dft_axis(out.data(), shape, 0, kBackward);
  out /= static_cast<double>(f.size());
  return out;
}

std::vector<double> spectral_derivative(std::span<const double> f, std::span<const int> shape,
                                        std::span<const double> periods, int axis) {
  const int rank = static_cast<int>(shape.size());
  if (axis < 0 || axis >= rank) {
    throw DomainError("spectral_derivative: axis " + std::to_string(axis) + " out of range for rank " +
                      std::to_string(rank));
  }
  if (static_cast<int>(periods.size()) != rank) {
    throw GridMismatchError("spectral_derivative: one period per axis required");
  }
  const std::size_t total =
      std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  if (f.size() != total) throw GridMismatchError("spectral_derivative: data size does not match shape");

  std::vector<cplx> work(f.begin(), f.end());
  dft_axis(work.data(), shape, axis, kForward);

  const int n = shape[axis];
  std::size_t inner = 1;
  for (int b = axis + 1; b < rank; ++b) inner *= shape[b];
  const auto k = fft_wavenumbers(n, periods[axis]);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const int p = static_cast<int>((idx / inner) % n);
    work[idx] *= (2 * p == n) ? cplx{0.0, 0.0} : cplx{0.0, k[p]};
  }
  dft_axis(work.data(), shape, axis, kBackward);

  std::vector<double> out(total);
  for (std::size_t idx = 0; idx < total; ++idx) out[idx] = work[idx].real() / n;
  return out;
}

Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& f, double period) {
  const int shape[1] = {static_cast<int>(f.size())};
  const double periods[1] = {period};
  auto d = spectral_derivative(std::span<const double>(f.data(), f.size()), shape, periods, 0);
  return Eigen::Map<Eigen::VectorXd>(d.data(), f.size());
}

Eigen::MatrixXd spectral_derivative(const Eigen::MatrixXd& f, int axis, double period) {
  if (axis != 0 && axis != 1) throw DomainError("spectral_derivative: matrix axis must be 0 or 1");
  const int shape[2] = {static_cast<int>(f.cols()), static_cast<int>(f.rows())};
  const double periods[2] = {period, period};
  auto d = spectral_derivative(std::span<const double>(f.data(), f.size()), shape, periods, 1 - axis);
  return Eigen::Map<Eigen::MatrixXd>(d.data(), f.rows(), f.cols());
}

Eigen::VectorXd periodic_convolve(const Eigen::VectorXd& f, const Eigen::VectorXcd& kernel_hat) {
  if (f.size() != kernel_hat.size()) {
    throw GridMismatchError("periodic_convolve: multiplier length " + std::to_string(kernel_hat.size()) +
                            " does not match function length " + std::to_string(f.size()));
  }
  Eigen::VectorXcd fh = fft(f.cast<cplx>());
  fh.array() *= kernel_hat.array();
  return ifft(fh).real();
}

Eigen::VectorXd fourier_shift(const Eigen::VectorXd& f, double shift, double period) {
  const int n = static_cast<int>(f.size());
  Eigen::VectorXcd fh = fft(f.cast<cplx>());
  const auto k = fft_wavenumbers(n, period);
  for (int p = 0; p < n; ++p) {
    if (2 * p == n) {
      fh[p] *= std::cos(k[p] * shift);
    } else {
      fh[p] *= std::polar(1.0, -k[p] * shift);
    }
  }
  return ifft(fh).real();
}

}  // namespace hvlab::spectral
