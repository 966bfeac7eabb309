#pragma once

#include <map>
#include <string>

#include "cdinn/matrix.hpp"
#include "cdinn/rng.hpp"
#include "cdinn/test_functions.hpp"

namespace cdinn {

// Enough to regenerate the dataset bit-identically.
struct Provenance {
  std::string generator;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
};

struct Dataset {
  Matrix inputs;   // n x d
  Matrix targets;  // n x 1, or n x T for sequence data
  Provenance provenance;
  bool sequences = false;  // rows are scalar-signal time series when set

  std::size_t size() const { return inputs.rows; }
  Vector input_row(std::size_t i) const {
    return Vector(inputs.row_ptr(i), inputs.row_ptr(i) + inputs.cols);
  }
};

// y = sin(5x)/5, x^2 or x^3 on x ~ U[-1,1]; noiseless.
inline Dataset regression_1d(const std::string& kind, std::size_t n, std::uint64_t seed) {
  require(n >= 2, "regression_1d: need at least two samples");
  Dataset ds;
  ds.inputs = Matrix(n, 1);
  ds.targets = Matrix(n, 1);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    ds.inputs(i, 0) = x;
    if (kind == "sine")
      ds.targets(i, 0) = std::sin(5.0 * x) / 5.0;
    else if (kind == "quadratic")
      ds.targets(i, 0) = x * x;
    else if (kind == "cubic")
      ds.targets(i, 0) = x * x * x;
    else
      throw std::invalid_argument("regression_1d: unknown kind " + kind);
  }
  ds.provenance = {"regression_" + kind, {{"n", double(n)}}, seed};
  return ds;
}

// Two-class toy sets: concentric circles (radius 1 vs 0.5) or interleaved
// half-moons, points evenly spaced along each curve plus isotropic normal
// noise. Labels are 0 (outer) and 1 (inner).
inline Dataset classify_2d(const std::string& kind, std::size_t n, double noise,
                           std::uint64_t seed) {
  require(n >= 4 && n % 2 == 0, "classify_2d: n must be even and >= 4");
  Dataset ds;
  ds.inputs = Matrix(n, 2);
  ds.targets = Matrix(n, 1);
  Rng rng(seed);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const bool inner = i >= half;
    const std::size_t j = inner ? i - half : i;
    double px, py;
    if (kind == "circles") {
      const double theta = 2.0 * M_PI * double(j) / double(half);
      const double r = inner ? 0.5 : 1.0;
      px = r * std::cos(theta);
      py = r * std::sin(theta);
    } else if (kind == "moons") {
      const double theta = M_PI * double(j) / double(half - 1);
      if (inner) {
        px = 1.0 - std::cos(theta);
        py = 0.5 - std::sin(theta);
      } else {
        px = std::cos(theta);
        py = std::sin(theta);
      }
    } else {
      throw std::invalid_argument("classify_2d: unknown kind " + kind);
    }
    ds.inputs(i, 0) = px + noise * rng.normal();
    ds.inputs(i, 1) = py + noise * rng.normal();
    ds.targets(i, 0) = inner ? 1.0 : 0.0;
  }
  ds.provenance = {"classify_" + kind, {{"n", double(n)}, {"noise", noise}}, seed};
  return ds;
}

// Scalar excitation sequences u_t ~ U[-1,1] with the four-tap moving-sum
// target y_t = u_{t-4} + u_{t-3} + u_{t-2} + u_{t-1} (zero-padded history).
inline Dataset delay_dataset(std::size_t n_sequences, std::size_t seq_len, std::uint64_t seed) {
  require(seq_len >= 5, "delay_dataset: sequences must cover the longest delay");
  Dataset ds;
  ds.sequences = true;
  ds.inputs = Matrix(n_sequences, seq_len);
  ds.targets = Matrix(n_sequences, seq_len);
  Rng rng(seed);
  for (std::size_t i = 0; i < n_sequences; ++i) {
    for (std::size_t t = 0; t < seq_len; ++t) ds.inputs(i, t) = rng.uniform(-1.0, 1.0);
    for (std::size_t t = 0; t < seq_len; ++t) {
      double y = 0.0;
      for (std::size_t k = 1; k <= 4; ++k)
        if (t >= k) y += ds.inputs(i, t - k);
      ds.targets(i, t) = y;
    }
  }
  ds.provenance = {"delay", {{"n_sequences", double(n_sequences)}, {"seq_len", double(seq_len)}},
                   seed};
  return ds;
}

// Uniform 2-D evaluation grid of `fn`, n_per_axis points per axis inclusive.
template <typename Fn>
inline Dataset grid_dataset_2d(Fn&& fn, const std::string& name, double lo, double hi,
                               std::size_t n_per_axis) {
  Dataset ds;
  const std::size_t n = n_per_axis * n_per_axis;
  ds.inputs = Matrix(n, 2);
  ds.targets = Matrix(n, 1);
  std::size_t r = 0;
  for (std::size_t i = 0; i < n_per_axis; ++i)
    for (std::size_t j = 0; j < n_per_axis; ++j, ++r) {
      const double x = lo + (hi - lo) * double(i) / double(n_per_axis - 1);
      const double y = lo + (hi - lo) * double(j) / double(n_per_axis - 1);
      ds.inputs(r, 0) = x;
      ds.inputs(r, 1) = y;
      ds.targets(r, 0) = fn(Vector{x, y});
    }
  ds.provenance = {name, {{"lo", lo}, {"hi", hi}, {"n_per_axis", double(n_per_axis)}}, 0};
  return ds;
}

// 5-D lattice (points_per_axis^5 nodes on [-1,1]^5) plus uniform random fill.
template <typename Fn>
inline Dataset lattice_dataset_5d(Fn&& fn, const std::string& name, std::size_t points_per_axis,
                                  std::size_t n_random, std::uint64_t seed) {
  Dataset ds;
  std::size_t lattice = 1;
  for (int i = 0; i < 5; ++i) lattice *= points_per_axis;
  ds.inputs = Matrix(lattice + n_random, 5);
  ds.targets = Matrix(lattice + n_random, 1);
  std::vector<std::size_t> counter(5, 0);
  for (std::size_t r = 0; r < lattice; ++r) {
    Vector x(5);
    for (std::size_t j = 0; j < 5; ++j)
      x[j] = -1.0 + 2.0 * double(counter[j]) / double(points_per_axis - 1);
    for (std::size_t j = 0; j < 5; ++j) ds.inputs(r, j) = x[j];
    ds.targets(r, 0) = fn(x);
    std::size_t j = 0;
    while (j < 5 && ++counter[j] == points_per_axis) counter[j++] = 0;
  }
  Rng rng(seed);
  for (std::size_t r = lattice; r < ds.inputs.rows; ++r) {
    Vector x(5);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    for (std::size_t j = 0; j < 5; ++j) ds.inputs(r, j) = x[j];
    ds.targets(r, 0) = fn(x);
  }
  ds.provenance = {name,
                   {{"points_per_axis", double(points_per_axis)}, {"n_random", double(n_random)}},
                   seed};
  return ds;
}

// Pollutant field sampled on a uniform (location, time) grid with the given
// step, starting at the domain corner.
inline Dataset spill_dataset(const SpillParams& p, double step, std::uint64_t seed = 0) {
  p.validate();
  require(step > 0.0, "spill_dataset: step must be positive");
  std::vector<double> locs, times;
  for (double s = p.loc_min; s <= p.loc_max + 1e-12; s += step) locs.push_back(s);
  for (double t = p.time_min; t <= p.time_max + 1e-12; t += step) times.push_back(t);
  Dataset ds;
  ds.inputs = Matrix(locs.size() * times.size(), 2);
  ds.targets = Matrix(locs.size() * times.size(), 1);
  std::size_t r = 0;
  for (double s : locs)
    for (double t : times) {
      ds.inputs(r, 0) = s;
      ds.inputs(r, 1) = t;
      ds.targets(r, 0) = spill_concentration(s, t, p);
      ++r;
    }
  ds.provenance = {"spill",
                   {{"step", step},
                    {"mass", p.mass},
                    {"diffusion", p.diffusion},
                    {"loc2", p.events.size() > 1 ? p.events[1].first : 0.0},
                    {"time2", p.events.size() > 1 ? p.events[1].second : 0.0}},
                   seed};
  return ds;
}

// Rebuilds a dataset from its provenance record.
inline Dataset regenerate(const Provenance& prov) {
  auto param = [&](const std::string& key, double fallback = 0.0) {
    auto it = prov.params.find(key);
    return it == prov.params.end() ? fallback : it->second;
  };
  const std::string& g = prov.generator;
  if (g.rfind("regression_", 0) == 0)
    return regression_1d(g.substr(11), std::size_t(param("n")), prov.seed);
  if (g.rfind("classify_", 0) == 0)
    return classify_2d(g.substr(9), std::size_t(param("n")), param("noise"), prov.seed);
  if (g == "delay")
    return delay_dataset(std::size_t(param("n_sequences")), std::size_t(param("seq_len")),
                         prov.seed);
  if (g == "camel")
    return grid_dataset_2d(camel3_plus5, "camel", param("lo"), param("hi"),
                           std::size_t(param("n_per_axis")));
  if (g == "matyas")
    return grid_dataset_2d(matyas_plus5, "matyas", param("lo"), param("hi"),
                           std::size_t(param("n_per_axis")));
  if (g == "sumpower")
    return lattice_dataset_5d(sumpower_plus5, "sumpower", std::size_t(param("points_per_axis")),
                              std::size_t(param("n_random")), prov.seed);
  if (g == "spill") {
    SpillParams p;
    p.mass = param("mass", p.mass);
    p.diffusion = param("diffusion", p.diffusion);
    return spill_dataset(p, param("step"), prov.seed);
  }
  throw std::invalid_argument("regenerate: unknown generator " + g);
}

}  // namespace cdinn
