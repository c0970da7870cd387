#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "qattack/graph.hpp"
#include "qattack/partition.hpp"

namespace qattack::detect {

enum class Algorithm { FN, SOA, LOU, LPA };

struct SpectralOptions {
  double tolerance = 1e-10;
  std::uint32_t max_iterations = 10000;
  // Bisections allowed beyond the connected components; 0 means split while
  // modularity improves.
  std::uint32_t max_splits = 0;
  // On non-convergence, solve the subgroup densely instead of failing.
  bool dense_fallback = true;
  std::uint32_t dense_limit = 3000;
};

struct LpaOptions {
  std::uint32_t max_sweeps = 100;
};

struct LpaResult {
  Partition partition;
  std::uint32_t sweeps = 0;
  bool hit_sweep_cap = false;
};

Partition detect_fn(const Graph& g);
Partition detect_spectral(const Graph& g, const SpectralOptions& opts = {});
Partition detect_louvain(const Graph& g, std::uint64_t seed);
LpaResult detect_lpa(const Graph& g, std::uint64_t seed, const LpaOptions& opts = {});

struct DetectorSpec {
  Algorithm algorithm = Algorithm::FN;
  std::uint64_t seed = 0;
  SpectralOptions spectral;
  LpaOptions lpa;
};

// Uniform interface; the seed is passed per call so the GA can derive it.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual Partition run(const Graph& g, std::uint64_t seed) const = 0;
  virtual bool stochastic() const = 0;
  virtual std::string name() const = 0;
};

std::unique_ptr<Detector> make_detector(const DetectorSpec& spec);

// Wraps an external algorithm (extension point for other detectors).
using DetectFn = std::function<Partition(const Graph&, std::uint64_t)>;
std::unique_ptr<Detector> make_custom_detector(std::string name, bool stochastic, DetectFn fn);

Partition detect(const Graph& g, const DetectorSpec& spec);

// "fn", "soa", "louvain"/"lou", "lpa" (case-insensitive).
Algorithm parse_algorithm(const std::string& text);
const char* algorithm_name(Algorithm a);

// Applies a "key=value" option; throws Error(Config) on unknown keys or bad values.
void apply_option(DetectorSpec& spec, const std::string& key, const std::string& value);

}  // namespace qattack::detect
