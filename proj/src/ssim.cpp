#include "varidepth/ssim.hpp"

#include "varidepth/filters.hpp"

namespace varidepth {

void SsimConfig::check() const {
  if (window < 3 || window % 2 == 0) throw DomainError("SSIM window must be odd and >= 3");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw DomainError("SSIM constants must be positive");
}

double SsimResult::mean() const {
  const Eigen::Index n = valid.count();
  if (n == 0) throw EmptyDomainError("SSIM mean over empty valid set");
  return valid.select(map, Grid::Zero(map.rows(), map.cols())).sum() / double(n);
}

namespace {

struct Terms {
  Grid a1, a2, b1, b2; // SSIM numerator/denominator factors
};

Terms ssim_terms(const SsimResult& m, const SsimConfig& cfg) {
  Terms t;
  // Variances are kept as raw second moments minus squared means, without
  // clamping, so the analytic gradient matches the forward value exactly.
  t.a1 = 2.0 * m.mu_a * m.mu_b + cfg.c1;
  t.a2 = 2.0 * (m.e_ab - m.mu_a * m.mu_b) + cfg.c2;
  t.b1 = m.mu_a.square() + m.mu_b.square() + cfg.c1;
  t.b2 = (m.e_aa - m.mu_a.square()) + (m.e_bb - m.mu_b.square()) + cfg.c2;
  return t;
}

} // namespace

SsimResult ssim_map(const Grid& a, const Grid& b, const Mask& valid, const SsimConfig& cfg) {
  cfg.check();
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != valid.rows() ||
      a.cols() != valid.cols())
    throw DomainError("ssim_map: shape mismatch");

  const int r = cfg.radius();
  const Grid m = valid.cast<double>();
  const Grid zero = Grid::Zero(a.rows(), a.cols());
  const Grid ma = valid.select(a, zero);
  const Grid mb = valid.select(b, zero);

  SsimResult out;
  out.count = box_sum(m, r);
  // A valid pixel always lies in its own window, so count >= 1 there.
  const Grid safe = (out.count > 0.0).select(out.count, Grid::Ones(a.rows(), a.cols()));
  out.mu_a = box_sum(ma, r) / safe;
  out.mu_b = box_sum(mb, r) / safe;
  out.e_aa = box_sum(Grid(ma * ma), r) / safe;
  out.e_bb = box_sum(Grid(mb * mb), r) / safe;
  out.e_ab = box_sum(Grid(ma * mb), r) / safe;

  const Terms t = ssim_terms(out, cfg);
  out.map = t.a1 * t.a2 / (t.b1 * t.b2);
  out.valid = valid && (out.count > 0.0);
  out.map = out.valid.select(out.map, zero);
  return out;
}

Grid ssim_backward(const SsimResult& fwd, const Grid& a, const Grid& b, const Mask& valid,
                   const SsimConfig& cfg, SsimArg wrt, const Grid& upstream) {
  cfg.check();
  const int r = cfg.radius();
  const Eigen::Index h = a.rows(), w = a.cols();
  const Grid zero = Grid::Zero(h, w);

  // Differentiate S = A1 A2 / (B1 B2) through the masked window moments. The
  // roles of a and b are symmetric, so gradients w.r.t. b swap mu/moment use.
  const Terms t = ssim_terms(fwd, cfg);
  const Grid denom = t.b1 * t.b2;
  const Grid u = fwd.valid.select(upstream, zero);
  const Grid dA1 = u * t.a2 / denom;
  const Grid dA2 = u * t.a1 / denom;
  const Grid dB1 = -u * fwd.map / t.b1;
  const Grid dB2 = -u * fwd.map / t.b2;

  const Grid& mu_x = (wrt == SsimArg::A) ? fwd.mu_a : fwd.mu_b;
  const Grid& mu_y = (wrt == SsimArg::A) ? fwd.mu_b : fwd.mu_a;
  const Grid& x = (wrt == SsimArg::A) ? a : b;
  const Grid& y = (wrt == SsimArg::A) ? b : a;

  // d/d mu_x collects A1, B1 and the mean-corrections inside sigma terms.
  const Grid d_mu = 2.0 * (mu_y * dA1 + mu_x * dB1 - mu_y * dA2 - mu_x * dB2);
  const Grid d_exx = dB2;       // second moment of x
  const Grid d_exy = 2.0 * dA2; // cross moment

  const Grid safe = (fwd.count > 0.0).select(fwd.count, Grid::Ones(h, w));
  const Grid s_mu = box_sum_adjoint(Grid(d_mu / safe), r);
  const Grid s_exx = box_sum_adjoint(Grid(d_exx / safe), r);
  const Grid s_exy = box_sum_adjoint(Grid(d_exy / safe), r);

  const Grid mask = valid.cast<double>();
  const Grid xm = valid.select(x, zero);
  const Grid ym = valid.select(y, zero);
  return mask * (s_mu + 2.0 * xm * s_exx + ym * s_exy);
}

} // namespace varidepth
