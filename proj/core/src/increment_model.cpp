#include "renewalkit/increment_model.hpp"

#include "renewalkit/constants.hpp"
#include "renewalkit/errors.hpp"

namespace renewal {

IncrementModel IncrementModel::deterministic(double c) {
  IncrementModel m;
  m.kind_ = IncrementKind::deterministic;
  m.p0_ = c;
  m.mu_ = c;
  m.sigma2_ = 0.0;
  return m;
}

IncrementModel IncrementModel::exponential(double mean) {
  if (!(mean > 0.0)) throw ConfigError("exponential mean must be positive");
  IncrementModel m;
  m.kind_ = IncrementKind::exponential;
  m.p0_ = mean;
  m.mu_ = mean;
  m.sigma2_ = mean * mean;
  return m;
}

IncrementModel IncrementModel::uniform(double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("uniform bounds must satisfy lo < hi");
  IncrementModel m;
  m.kind_ = IncrementKind::uniform;
  m.p0_ = lo;
  m.p1_ = hi;
  m.mu_ = 0.5 * (lo + hi);
  m.sigma2_ = (hi - lo) * (hi - lo) / 12.0;
  return m;
}

IncrementModel IncrementModel::shifted_normal(double mu, double sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("normal sigma must be nonnegative");
  IncrementModel m;
  m.kind_ = IncrementKind::shifted_normal;
  m.p0_ = mu;
  m.p1_ = sigma;
  m.mu_ = mu;
  m.sigma2_ = sigma * sigma;
  return m;
}

IncrementModel IncrementModel::rank_pair(double delta, double a_exp,
                                         const QuadratureSpec& quad) {
  LehmannSpec spec{delta, a_exp};
  spec.validate();
  IncrementModel m;
  m.kind_ = IncrementKind::rank_pair;
  m.lehmann_ = spec;
  m.quad_ = quad;
  m.mu_ = drift_mu(delta, a_exp, quad);
  m.sigma2_ = std::nullopt;  // estimated by MC where needed
  return m;
}

const LehmannSpec& IncrementModel::lehmann() const {
  if (kind_ != IncrementKind::rank_pair)
    throw ConfigError("model has no Lehmann parameters");
  return lehmann_;
}

double IncrementModel::sample(Rng& rng) const {
  switch (kind_) {
    case IncrementKind::deterministic:
      return p0_;
    case IncrementKind::exponential:
      return rng.exponential(p0_);
    case IncrementKind::uniform:
      return rng.uniform(p0_, p1_);
    case IncrementKind::shifted_normal:
      return rng.normal(p0_, p1_);
    case IncrementKind::rank_pair: {
      double x, y;
      lehmann_sample_pair(rng, lehmann_.a_exp, x, y);
      return lehmann_pair_increment(x, y, lehmann_, quad_);
    }
  }
  throw ConfigError("unknown increment kind");
}

std::vector<double> sample_increments(const IncrementModel& model,
                                      std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = model.sample(rng);
  return out;
}

}  // namespace renewal
