#include "hvlab/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "hvlab/error.hpp"

namespace hvlab {
namespace {

// Coefficients of the trigonometric interpolant of one snapshot.
struct Trig {
  double L = 0.0;
  double x0 = 0.0;
  std::vector<double> k;
  Eigen::VectorXcd hat;

  double operator()(double x) const {
    const int M = static_cast<int>(hat.size());
    double s = 0.0;
    for (int p = 0; p < M; ++p) {
      const cplx c = hat[p] * std::polar(1.0, k[p] * (x - x0));
      s += (2 * p == M) ? hat[p].real() * std::cos(k[p] * (x - x0)) : c.real();
    }
    return s / M;
  }
};

}  // namespace

FrozenField snapshot_field(const PhaseSpaceGrid& grid, std::vector<double> times,
                           std::vector<Eigen::VectorXd> snapshots) {
  if (times.empty() || times.size() != snapshots.size()) {
    throw ConfigError("snapshots", "need one field snapshot per time, at least one");
  }
  if (!std::is_sorted(times.begin(), times.end())) throw ConfigError("snapshots", "times must be increasing");
  auto interp = std::make_shared<std::vector<Trig>>();
  for (const auto& e : snapshots) {
    if (e.size() != grid.M) throw GridMismatchError("snapshot_field: snapshot length does not match grid");
    interp->push_back({grid.L, grid.x_nodes.front(), fft_wavenumbers(grid.M, grid.L), spectral::fft(e.cast<cplx>())});
  }
  auto ts = std::make_shared<std::vector<double>>(std::move(times));
  FrozenField f;
  f.t_min = ts->front();
  f.t_max = ts->back();
  f.E = [interp, ts](double t, double x) {
    if (ts->size() == 1) return (*interp)[0](x);
    auto it = std::upper_bound(ts->begin(), ts->end(), t);
    std::size_t hi = std::clamp<std::size_t>(it - ts->begin(), 1, ts->size() - 1);
    const std::size_t lo = hi - 1;
    const double w = ((*ts)[hi] - t) / ((*ts)[hi] - (*ts)[lo]);
    return w * (*interp)[lo](x) + (1.0 - w) * (*interp)[hi](x);
  };
  return f;
}

CharacteristicsState flow_map(double x0, double v0, double t, const VlasovConfig& cfg, const FrozenField& field) {
  const double slack = 1e-12 * std::max(1.0, std::abs(field.t_max));
  if (t < field.t_min - slack || t > field.t_max + slack) {
    throw DomainError("flow_map: time outside the field snapshot range");
  }
  if (!(cfg.dt > 0.0)) throw ConfigError("dt", "must be positive");
  const double span = t - field.t_min;
  const long n = std::max<long>(1, static_cast<long>(std::ceil(span / cfg.dt - 1e-9)));
  const double h = span / n;
  const double s = cfg.force_sign;
  auto rhs = [&](double tt, double x, double v, double& dx, double& dv) {
    dx = 2.0 * v;
    dv = -s * field.E(tt, x);
  };
  double x = x0;
  double v = v0;
  double tt = field.t_min;
  for (long i = 0; i < n && span > 0.0; ++i) {
    double k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    rhs(tt, x, v, k1x, k1v);
    rhs(tt + 0.5 * h, x + 0.5 * h * k1x, v + 0.5 * h * k1v, k2x, k2v);
    rhs(tt + 0.5 * h, x + 0.5 * h * k2x, v + 0.5 * h * k2v, k3x, k3v);
    rhs(tt + h, x + h * k3x, v + h * k3v, k4x, k4v);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    tt += h;
  }
  return {x, v, t};
}

}  // namespace hvlab
