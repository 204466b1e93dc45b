#include "ttc/reactive_flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ttc/errors.hpp"

namespace ttc {

std::vector<PathPoint> reactive_flow(const ValueGradientFn& q, const std::function<double(std::span<const double>)>& p,
                                     double beta, std::span<const double> x0, double q_hi, double max_dq,
                                     std::size_t max_steps) {
  if (!(max_dq > 0.0) || !(beta > 0.0)) throw InputError("reactive_flow: beta and max_dq must be positive");
  const std::size_t d = x0.size();
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), d);
  Eigen::VectorXd g(d), gm(d);
  double qv = q(std::span<const double>(x.data(), d), g);
  double t = 0.0;
  std::vector<PathPoint> path{{0.0, std::vector<double>(x.data(), x.data() + d), qv}};
  for (std::size_t step = 0; step < max_steps && qv < q_hi - 1e-10; ++step) {
    double dq = std::min(max_dq, q_hi - qv);
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries, dq *= 0.5) {
      const double g2 = g.squaredNorm();
      const double p0 = p(std::span<const double>(x.data(), d));
      if (g2 < 1e-28 && p0 < 1e-14) throw ConvergenceError("reactive_flow: stalled at step " + std::to_string(step));
      if (!(g2 > 0.0)) throw ConvergenceError("reactive_flow: zero gradient at step " + std::to_string(step));
      Eigen::VectorXd xm = x + 0.5 * dq * g / g2;
      q(std::span<const double>(xm.data(), d), gm);
      const double gm2 = gm.squaredNorm();
      if (!(gm2 > 0.0)) continue;
      Eigen::VectorXd xn = x + dq * gm / gm2;
      Eigen::VectorXd gn(d);
      const double qn = q(std::span<const double>(xn.data(), d), gn);
      if (!(qn > qv) || !std::isfinite(qn)) continue;
      const double pm = p(std::span<const double>(xm.data(), d));
      if (!(pm > 0.0)) throw ConvergenceError("reactive_flow: density vanished at step " + std::to_string(step));
      t += (qn - qv) / (pm * gm2 / beta);
      x = std::move(xn);
      g = std::move(gn);
      qv = qn;
      accepted = true;
    }
    if (!accepted) throw ConvergenceError("reactive_flow: could not increase q at step " + std::to_string(step));
    path.push_back({t, std::vector<double>(x.data(), x.data() + d), qv});
  }
  if (qv < q_hi - 1e-10) throw ConvergenceError("reactive_flow: step budget exhausted at q = " + std::to_string(qv));
  return path;
}

} // namespace ttc
