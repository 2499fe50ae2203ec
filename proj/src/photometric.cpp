#include "varidepth/photometric.hpp"

namespace varidepth {

void PhotometricConfig::check() const {
  if (kappa < 0.0 || kappa > 1.0) throw DomainError("kappa must lie in [0,1]");
  ssim.check();
}

namespace {

// Channel views the loss is evaluated on: the planes themselves, or luma.
std::vector<Grid> loss_channels(const Image& img, bool grayscale) {
  if (grayscale) return {img.luma()};
  return img.planes;
}

// L1 subgradient with the tie value 0; residuals at numerical-noise scale
// count as ties so exact reconstructions keep a zero gradient.
Grid sign_grid(const Grid& x) {
  return (x > 1e-12).cast<double>() - (x < -1e-12).cast<double>();
}

} // namespace

PeResult pe_forward(const Image& target, const Image& predicted, const Mask& valid,
                    const PhotometricConfig& cfg) {
  cfg.check();
  if (target.width != predicted.width || target.height != predicted.height ||
      target.channels() != predicted.channels())
    throw DomainError("pe: target and predicted shapes differ");
  if (valid.rows() != target.height || valid.cols() != target.width)
    throw DomainError("pe: mask shape mismatch");

  PeResult r;
  r.valid = valid;
  r.target_ch = loss_channels(target, cfg.grayscale);
  r.predicted_ch = loss_channels(predicted, cfg.grayscale);

  const Eigen::Index h = valid.rows(), w = valid.cols();
  const Grid zero = Grid::Zero(h, w);
  r.per_pixel = zero;
  for (size_t c = 0; c < r.target_ch.size(); ++c) {
    r.ssim.push_back(ssim_map(r.target_ch[c], r.predicted_ch[c], valid, cfg.ssim));
    const Grid l1 = (r.target_ch[c] - r.predicted_ch[c]).abs();
    r.per_pixel += cfg.kappa * (1.0 - r.ssim.back().map) / 2.0 + (1.0 - cfg.kappa) * l1;
  }
  r.per_pixel /= double(r.target_ch.size());
  r.per_pixel = valid.select(r.per_pixel, zero);

  const Eigen::Index n = valid.count();
  if (n == 0) throw EmptyDomainError("pe over empty valid set");
  r.mean = r.per_pixel.sum() / double(n);
  return r;
}

std::vector<Grid> pe_backward(const PeResult& fwd, const Image& predicted,
                              const PhotometricConfig& cfg, const Grid& upstream) {
  const Eigen::Index h = fwd.valid.rows(), w = fwd.valid.cols();
  const Grid zero = Grid::Zero(h, w);
  const Grid u = fwd.valid.select(upstream, zero);
  const double inv_nc = 1.0 / double(fwd.target_ch.size());

  std::vector<Grid> per_eval_channel;
  for (size_t c = 0; c < fwd.target_ch.size(); ++c) {
    // SSIM term: d/d pred of kappa (1 - S)/2 is -kappa/2 dS.
    const Grid ssim_up = u * (-cfg.kappa * 0.5 * inv_nc);
    Grid g = ssim_backward(fwd.ssim[c], fwd.target_ch[c], fwd.predicted_ch[c], fwd.valid, cfg.ssim,
                           SsimArg::B, ssim_up);
    g += u * ((1.0 - cfg.kappa) * inv_nc) *
         sign_grid(Grid(fwd.predicted_ch[c] - fwd.target_ch[c]));
    per_eval_channel.push_back(std::move(g));
  }

  if (!cfg.grayscale) return per_eval_channel;

  // Grayscale mode evaluates on luma; route the gradient back through the
  // fixed luma weights.
  const double lw[3] = {0.299, 0.587, 0.114};
  std::vector<Grid> out;
  for (int c = 0; c < predicted.channels(); ++c)
    out.push_back(predicted.channels() == 1 ? per_eval_channel[0]
                                            : Grid(lw[c] * per_eval_channel[0]));
  return out;
}

PeWithGrad pe(const Image& target, const Image& predicted, const Mask& valid,
              const PhotometricConfig& cfg) {
  PeResult fwd = pe_forward(target, predicted, valid, cfg);
  const double inv_n = 1.0 / double(valid.count());
  const Grid upstream = Grid::Constant(valid.rows(), valid.cols(), inv_n);
  PeWithGrad out;
  out.grad_predicted = pe_backward(fwd, predicted, cfg, upstream);
  out.per_pixel = std::move(fwd.per_pixel);
  out.valid = std::move(fwd.valid);
  out.mean = fwd.mean;
  return out;
}

} // namespace varidepth
