#include "pe/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pe/errors.hpp"
#include "pe/hydrostatics.hpp"
#include "pe/operator.hpp"

namespace pe {

namespace {

double trace_norm(const Grid& g, const Field& s, const Eigen::MatrixXd* op, int row) {
  double acc = 0.0;
  for (std::size_t c = 0; c < 2; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) {
        const cplx* col = s.column(c, ix, iy);
        cplx v{};
        if (op) {
          for (int k = 0; k < g.npts(); ++k) v += (*op)(row, k) * col[k];
        } else {
          v = col[row];
        }
        acc += std::norm(v);
      }
  return std::sqrt(acc * g.lx() * g.ly());
}

}  // namespace

DiagnosticsRecord record(const Field& v_d, double t) {
  const Grid& g = v_d.grid();
  const Field s = transform(v_d, Repr::spectral);
  DiagnosticsRecord r;
  r.t = t;
  r.energy = l2_squared(s);
  r.l2 = std::sqrt(r.energy);
  r.h1 = sobolev_norm(s, 1);
  r.h2 = sobolev_norm(s, 2);
  r.h3 = sobolev_norm(s, 3);
  r.h4 = sobolev_norm(s, 4);
  r.l4_baroclinic = lp_norm(baroclinic_part(s), 4);

  const double grad_h2 = l2_squared(diff(s, Axis::x)) + l2_squared(diff(s, Axis::y));
  const double w2 = l2_squared(reconstruct_w(s));
  const double h = g.h();
  r.jensen_slack = 2.0 * h * h * grad_h2 - w2;
  r.poincare_slack = h * std::sqrt(l2_squared(diff(s, Axis::z))) - r.l2;
  r.barotropic_h1 = barotropic_gradient_norm(s);
  const auto ratio = bilinear_ratio(s, 0);
  r.bilinear_ratio_k0 = ratio ? *ratio : std::numeric_limits<double>::quiet_NaN();
  r.boundary_top = trace_norm(g, s, &g.dz(), 0);
  r.boundary_bottom = trace_norm(g, s, nullptr, g.nz());
  return r;
}

DecayFit decay_fit(std::span<const std::pair<double, double>> series, double transient_fraction) {
  if (series.size() < 5) throw ValidationError("decay_fit: insufficient data");
  for (const auto& [t, y] : series)
    if (!(y > 0.0)) throw ValidationError("decay_fit: nonpositive values");
  if (transient_fraction < 0.0 || transient_fraction >= 1.0)
    throw ValidationError("decay_fit: transient fraction must be in [0, 1)");

  const std::size_t first = static_cast<std::size_t>(transient_fraction * series.size());
  const std::size_t n = series.size() - first;
  if (n < 2) throw ValidationError("decay_fit: insufficient data");
  double st = 0.0, sy = 0.0;
  for (std::size_t i = first; i < series.size(); ++i) {
    st += series[i].first;
    sy += std::log(series[i].second);
  }
  const double mt = st / n;
  const double my = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = first; i < series.size(); ++i) {
    const double dt = series[i].first - mt;
    const double dy = std::log(series[i].second) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (stt == 0.0) throw ValidationError("decay_fit: insufficient data");
  DecayFit fit;
  fit.rate = sty / stt;
  fit.amplitude = std::exp(my - fit.rate * mt);
  double ss_res = 0.0;
  for (std::size_t i = first; i < series.size(); ++i) {
    const double pred = std::log(fit.amplitude) + fit.rate * series[i].first;
    const double e = std::log(series[i].second) - pred;
    ss_res += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

MonotoneReport check_energy_monotone(std::span<const double> energy, double tol) {
  MonotoneReport rep;
  for (std::size_t n = 0; n + 1 < energy.size(); ++n) {
    if (energy[n + 1] > energy[n] * (1.0 + tol)) {
      rep.pass = false;
      rep.first_violation = n + 1;
      break;
    }
  }
  return rep;
}

MonotoneReport check_energy_monotone(std::span<const DiagnosticsRecord> series, double tol) {
  std::vector<double> e;
  e.reserve(series.size());
  for (const auto& r : series) e.push_back(r.energy);
  return check_energy_monotone(std::span<const double>(e), tol);
}

double record_norm(const DiagnosticsRecord& r, int k) {
  switch (k) {
    case 0: return r.l2;
    case 1: return r.h1;
    case 2: return r.h2;
    case 3: return r.h3;
    case 4: return r.h4;
    default: throw std::invalid_argument("record_norm: k must be in 0..4");
  }
}

HkReport hk_boundedness(std::span<const DiagnosticsRecord> series, int k,
                        double transient_fraction) {
  if (k < 1 || k > 3) throw std::invalid_argument("hk_boundedness: k must be in {1, 2, 3}");
  HkReport rep;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double nk = record_norm(series[i], k);
    rep.max_norm = std::max(rep.max_norm, nk);
    if (i > 0) {
      const double a = record_norm(series[i - 1], k + 1);
      const double b = record_norm(series[i], k + 1);
      rep.integral += 0.5 * (series[i].t - series[i - 1].t) * (a * a + b * b);
    }
  }
  rep.finite = std::isfinite(rep.max_norm) && std::isfinite(rep.integral);
  const std::size_t first = static_cast<std::size_t>(transient_fraction * series.size());
  for (std::size_t i = first + 1; i < series.size(); ++i) {
    if (record_norm(series[i], k) > record_norm(series[i - 1], k) * (1.0 + 1e-10)) {
      rep.tail_monotone = false;
      break;
    }
  }
  return rep;
}

}  // namespace pe
