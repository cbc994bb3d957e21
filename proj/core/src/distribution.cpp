#include "polyprophet/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace polyprophet {

namespace {

void check_weight(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ValidationError(std::string(what) + " must be finite and non-negative");
  }
}

}  // namespace

DistributionSpec DistributionSpec::discrete(std::vector<DiscreteAtom> atoms) {
  if (atoms.empty()) throw ValidationError("discrete distribution needs at least one atom");
  std::sort(atoms.begin(), atoms.end(),
            [](const DiscreteAtom& a, const DiscreteAtom& b) { return a.value < b.value; });
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    check_weight(atoms[i].value, "support value");
    if (!(atoms[i].prob >= 0.0 && atoms[i].prob <= 1.0)) {
      throw ValidationError("atom probability outside [0,1]");
    }
    if (i > 0 && atoms[i].value == atoms[i - 1].value) {
      throw ValidationError("support values must be distinct");
    }
    total += atoms[i].prob;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("discrete probabilities must sum to 1 (got " +
                          std::to_string(total) + ")");
  }
  DistributionSpec d;
  d.kind_ = DistKind::kDiscrete;
  d.atoms_ = std::move(atoms);
  return d;
}

DistributionSpec DistributionSpec::point_mass(double value) {
  return discrete({DiscreteAtom{value, 1.0}});
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  check_weight(lo, "uniform lo");
  check_weight(hi, "uniform hi");
  if (lo > hi) throw ValidationError("uniform requires lo <= hi");
  DistributionSpec d;
  d.kind_ = DistKind::kUniform;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

DistributionSpec DistributionSpec::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ValidationError("exponential rate must be positive");
  }
  DistributionSpec d;
  d.kind_ = DistKind::kExponential;
  d.rate_ = rate;
  return d;
}

const std::vector<DiscreteAtom>& DistributionSpec::atoms() const {
  if (kind_ != DistKind::kDiscrete) {
    throw PreconditionError("atoms() on a non-discrete distribution");
  }
  return atoms_;
}

double DistributionSpec::mean() const {
  switch (kind_) {
    case DistKind::kDiscrete: {
      double m = 0.0;
      for (const auto& a : atoms_) m += a.value * a.prob;
      return m;
    }
    case DistKind::kUniform:
      return 0.5 * (lo_ + hi_);
    case DistKind::kExponential:
      return 1.0 / rate_;
  }
  return 0.0;
}

double DistributionSpec::median() const {
  switch (kind_) {
    case DistKind::kDiscrete: {
      double acc = 0.0;
      for (const auto& a : atoms_) {
        acc += a.prob;
        if (acc >= 0.5) return a.value;
      }
      return atoms_.back().value;
    }
    case DistKind::kUniform:
      return 0.5 * (lo_ + hi_);
    case DistKind::kExponential:
      return std::log(2.0) / rate_;
  }
  return 0.0;
}

double DistributionSpec::cdf(double x) const {
  switch (kind_) {
    case DistKind::kDiscrete: {
      double acc = 0.0;
      for (const auto& a : atoms_) {
        if (a.value <= x) acc += a.prob;
      }
      return acc;
    }
    case DistKind::kUniform:
      if (x < lo_) return 0.0;
      if (x >= hi_) return 1.0;
      return (x - lo_) / (hi_ - lo_);
    case DistKind::kExponential:
      return x <= 0.0 ? 0.0 : 1.0 - std::exp(-rate_ * x);
  }
  return 0.0;
}

double DistributionSpec::sample(RandomSource& rng) const {
  switch (kind_) {
    case DistKind::kDiscrete: {
      const double u = rng.next_double();
      double acc = 0.0;
      for (const auto& a : atoms_) {
        acc += a.prob;
        if (u < acc) return a.value;
      }
      return atoms_.back().value;
    }
    case DistKind::kUniform:
      return lo_ == hi_ ? lo_ : rng.uniform(lo_, hi_);
    case DistKind::kExponential:
      return rng.exponential(rate_);
  }
  return 0.0;
}

WeightAssignment sample_assignment(const std::vector<DistributionSpec>& dists,
                                   RandomSource& rng) {
  if (dists.empty()) throw ValidationError("sample_assignment: no distributions");
  WeightAssignment w;
  w.reserve(dists.size());
  for (const auto& d : dists) w.push_back(d.sample(rng));
  return w;
}

std::vector<SupportPoint> enumerate_support(const std::vector<DistributionSpec>& dists,
                                            std::size_t cap) {
  if (dists.empty()) throw ValidationError("enumerate_support: no distributions");
  std::size_t total = 1;
  for (const auto& d : dists) {
    if (!d.is_discrete()) {
      throw UnsupportedExact("enumerate_support requires all-discrete distributions");
    }
    const std::size_t s = d.atoms().size();
    if (total > cap / s) throw TooLarge("joint support exceeds enumeration cap");
    total *= s;
  }

  std::vector<SupportPoint> out;
  out.reserve(total);
  const std::size_t n = dists.size();
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    SupportPoint pt;
    pt.weights.resize(n);
    pt.prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = dists[i].atoms()[idx[i]];
      pt.weights[i] = a.value;
      pt.prob *= a.prob;
    }
    out.push_back(std::move(pt));
    // lexicographic advance, last coordinate fastest
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < dists[pos].atoms().size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

Weight expected_max(const std::vector<DistributionSpec>& dists, const Estimator& est,
                    RandomSource* rng, std::size_t cap) {
  if (dists.empty()) throw ValidationError("expected_max: no distributions");
  if (est.mode == EstimatorMode::kExact) {
    double acc = 0.0;
    for (const auto& pt : enumerate_support(dists, cap)) {
      acc += pt.prob * *std::max_element(pt.weights.begin(), pt.weights.end());
    }
    return acc;
  }
  if (rng == nullptr) throw PreconditionError("Monte-Carlo expected_max needs an rng");
  if (est.samples < 1) throw ValidationError("Monte-Carlo sample count must be >= 1");
  double acc = 0.0;
  for (int64_t s = 0; s < est.samples; ++s) {
    double mx = 0.0;
    for (const auto& d : dists) mx = std::max(mx, d.sample(*rng));
    acc += mx;
  }
  return acc / static_cast<double>(est.samples);
}

}  // namespace polyprophet
