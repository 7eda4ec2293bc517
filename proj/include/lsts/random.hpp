#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lsts {

//! SplitMix64 mix of (seed, index); used to derive independent substreams,
//! e.g. one per Monte Carlo replication.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct InnovationSpec {
  enum class Law { gaussian, moments };
  Law law = Law::gaussian;
  //! Fourth cumulant E eps^4 - 3; only used by Law::moments, must be >= -2.
  double kappa4 = 0.0;
};

//! Draws mean-zero, unit-variance innovations with the requested fourth cumulant.
//! kappa4 > 0 uses a Gaussian scale mixture, kappa4 < 0 mixes in a Rademacher part.
class InnovationSampler {
 public:
  explicit InnovationSampler(InnovationSpec spec);
  double operator()(std::mt19937_64& rng);

 private:
  InnovationSpec spec_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

//! The innovation sequence eps_t, t in Z, attached to a seed. Times t >= 1 come
//! from one substream in forward order and times t <= 0 from another in
//! backward order, so every consumer sees the same eps_t whatever pre-sample
//! length it needs.
std::vector<double> innovations(const InnovationSpec& spec, std::uint64_t seed,
                                long first, long last);

}  // namespace lsts
