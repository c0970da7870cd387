#include "qattack/detect.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "qattack/error.hpp"

namespace qattack::detect {

namespace {

class Builtin : public Detector {
 public:
  explicit Builtin(DetectorSpec spec) : spec_(spec) {}

  Partition run(const Graph& g, std::uint64_t seed) const override {
    switch (spec_.algorithm) {
      case Algorithm::FN: return detect_fn(g);
      case Algorithm::SOA: return detect_spectral(g, spec_.spectral);
      case Algorithm::LOU: return detect_louvain(g, seed);
      case Algorithm::LPA: return detect_lpa(g, seed, spec_.lpa).partition;
    }
    throw Error(ErrorCode::Internal, "unknown algorithm");
  }
  bool stochastic() const override {
    return spec_.algorithm == Algorithm::LOU || spec_.algorithm == Algorithm::LPA;
  }
  std::string name() const override { return algorithm_name(spec_.algorithm); }

 private:
  DetectorSpec spec_;
};

class Custom : public Detector {
 public:
  Custom(std::string name, bool stochastic, DetectFn fn)
      : name_(std::move(name)), stochastic_(stochastic), fn_(std::move(fn)) {}
  Partition run(const Graph& g, std::uint64_t seed) const override {
    Partition p = fn_(g, seed);
    if (p.size() != g.node_count())
      throw Error(ErrorCode::Internal, "detector '" + name_ + "' returned a partition of the wrong size");
    return p;
  }
  bool stochastic() const override { return stochastic_; }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  bool stochastic_;
  DetectFn fn_;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorCode::Config, "bad value '" + value + "' for detector option '" + key + "'");
  return out;
}

}  // namespace

std::unique_ptr<Detector> make_detector(const DetectorSpec& spec) {
  if (!(spec.spectral.tolerance > 0.0)) throw Error(ErrorCode::Config, "tolerance must be positive");
  if (spec.spectral.max_iterations == 0) throw Error(ErrorCode::Config, "max_iterations must be positive");
  if (spec.lpa.max_sweeps == 0) throw Error(ErrorCode::Config, "max_sweeps must be positive");
  return std::make_unique<Builtin>(spec);
}

std::unique_ptr<Detector> make_custom_detector(std::string name, bool stochastic, DetectFn fn) {
  if (!fn) throw Error(ErrorCode::InvalidArgument, "custom detector needs a callable");
  return std::make_unique<Custom>(std::move(name), stochastic, std::move(fn));
}

Partition detect(const Graph& g, const DetectorSpec& spec) {
  if (g.node_count() == 0) throw Error(ErrorCode::InvalidArgument, "cannot detect communities of an empty graph");
  return make_detector(spec)->run(g, spec.seed);
}

Algorithm parse_algorithm(const std::string& text) {
  auto t = lower(text);
  if (t == "fn") return Algorithm::FN;
  if (t == "soa" || t == "spectral") return Algorithm::SOA;
  if (t == "lou" || t == "louvain") return Algorithm::LOU;
  if (t == "lpa") return Algorithm::LPA;
  throw Error(ErrorCode::Config, "unknown detector '" + text + "' (expected fn, soa, louvain, lpa)");
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::FN: return "fn";
    case Algorithm::SOA: return "soa";
    case Algorithm::LOU: return "louvain";
    case Algorithm::LPA: return "lpa";
  }
  return "?";
}

void apply_option(DetectorSpec& spec, const std::string& key, const std::string& value) {
  const auto k = lower(key);
  if (k == "tolerance" || k == "tol") {
    spec.spectral.tolerance = parse_number<double>(key, value);
    if (!(spec.spectral.tolerance > 0.0)) throw Error(ErrorCode::Config, "tolerance must be positive");
  } else if (k == "max_iterations") {
    spec.spectral.max_iterations = parse_number<std::uint32_t>(key, value);
  } else if (k == "max_splits") {
    spec.spectral.max_splits = parse_number<std::uint32_t>(key, value);
  } else if (k == "dense_fallback") {
    spec.spectral.dense_fallback = parse_number<int>(key, value) != 0;
  } else if (k == "dense_limit") {
    spec.spectral.dense_limit = parse_number<std::uint32_t>(key, value);
  } else if (k == "max_sweeps") {
    spec.lpa.max_sweeps = parse_number<std::uint32_t>(key, value);
  } else {
    throw Error(ErrorCode::Config, "unknown detector option '" + key + "'");
  }
}

}  // namespace qattack::detect
