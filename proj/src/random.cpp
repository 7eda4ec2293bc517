#include "lsts/random.hpp"

#include <cmath>

#include "lsts/errors.hpp"

namespace lsts {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

InnovationSampler::InnovationSampler(InnovationSpec spec) : spec_(spec) {
  if (spec_.law == InnovationSpec::Law::moments && spec_.kappa4 < -2.0)
    throw ArgumentError("kappa4 must be >= -2 for a unit-variance law");
}

double InnovationSampler::operator()(std::mt19937_64& rng) {
  const double z = normal_(rng);
  if (spec_.law == InnovationSpec::Law::gaussian || spec_.kappa4 == 0.0) return z;
  const double v = uniform_(rng);
  if (spec_.kappa4 > 0.0) {
    // S^2 = 1/q with probability q, else 0: E S^2 = 1, kappa4 = 3/q - 3.
    const double q = 3.0 / (spec_.kappa4 + 3.0);
    return v < q ? z / std::sqrt(q) : 0.0;
  }
  // sqrt(1-c) Z + sqrt(c) R with R = +-1: kappa4 = -2 c^2.
  const double c = std::sqrt(-spec_.kappa4 / 2.0);
  const double r = v < 0.5 ? -1.0 : 1.0;
  return std::sqrt(1.0 - c) * z + std::sqrt(c) * r;
}

std::vector<double> innovations(const InnovationSpec& spec, std::uint64_t seed, long first,
                                long last) {
  if (last < first) return {};
  std::vector<double> out(static_cast<size_t>(last - first + 1));
  if (last >= 1) {
    std::mt19937_64 rng(derive_seed(seed, 0));
    InnovationSampler draw(spec);
    for (long t = 1; t <= last; ++t) {
      const double e = draw(rng);
      if (t >= first) out[static_cast<size_t>(t - first)] = e;
    }
  }
  if (first <= 0) {
    std::mt19937_64 rng(derive_seed(seed, 1));
    InnovationSampler draw(spec);
    for (long t = 0; t >= first; --t) {
      const double e = draw(rng);
      if (t <= last) out[static_cast<size_t>(t - first)] = e;
    }
  }
  return out;
}

}  // namespace lsts
