#pragma once

// Bohr sets in Z: {x : max_j ||theta_j (x - center)|| < eps}, with windowed density,
// embeddability of Bohr sets into other sets, and a finite search for Bohr pieces
// inside a target.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sumsetlab/density_means.hpp"
#include "sumsetlab/harmonic_means.hpp"

namespace sumset {

/// Distance to the nearest integer of a phase in [0, 1).
double torus_norm(long double phase);

struct BohrSpec {
  std::vector<Frequency> thetas;  // rank = thetas.size(); rank 0 is all of Z
  double eps = 0.5;               // in (0, 1/2]
  std::int64_t center = 0;

  std::size_t rank() const noexcept { return thetas.size(); }
  /// "bohr(d=1; theta=0.618; eps=0.1; center=0)"; several thetas are comma separated.
  static BohrSpec parse(std::string_view text);
  std::string text() const;
  /// Throws DomainError unless eps is in (0, 1/2].
  void validate() const;
};

struct BohrMembership {
  bool member = false;
  double norm = 0;    // max_j ||theta_j (x - center)||
  double margin = 0;  // eps - norm
};

BohrMembership bohr_membership(const BohrSpec& spec, std::int64_t x);

/// Exact membership over [lo, hi].
WindowSet bohr_window(const BohrSpec& spec, std::int64_t lo, std::int64_t hi);

/// (floor(1/eps) + 1)^(-d).
double bohr_density_bound(double eps, std::size_t rank);

struct BohrDensityReport {
  std::uint64_t count = 0, size = 0;
  double density = 0;
  double bound = 0;
  bool window_large_enough = false;  // |window| >= (10 / eps)^d
  bool violation = false;            // density < 0.9 * bound
};
BohrDensityReport bohr_density_bound_check(const BohrSpec& spec, Interval window);

struct BohrEmbeddingReport {
  EmbeddingReport search;
  double success_rate = 0;
};
/// k-element probes from the Bohr set on `probe_window`, translated into `target`.
/// Every probe is checked; failures are tallied rather than ending the search.
BohrEmbeddingReport bohr_embeddability(const BohrSpec& spec, Interval probe_window, const WindowSet& target,
                                       std::size_t k, EmbeddingOptions options = {});

struct PiecewiseBohrOptions {
  std::size_t rank_cap = 1;
  std::vector<double> eps_grid{0.05, 0.1, 0.25};
  std::vector<Frequency> theta_grid;     // used as given
  std::int64_t seed_max_denominator = 12;  // seeds: nonzero j/q, q up to this
  std::size_t seed_count = 4;            // ... keeping the largest |mean coefficient| of 1_target
  std::uint64_t run_length = 0;          // L; 0 means the whole window
  std::int64_t center_count = 1;         // centers 0 .. center_count - 1
};

struct BohrCandidate {
  BohrSpec spec;
  Interval run;                    // best [t, t + L) for this spec
  std::uint64_t bohr_points = 0;   // |(center + B) cap run|
  std::uint64_t contained = 0;     // ... inside the target
  double containment = 0;          // contained / bohr_points (1 when bohr_points = 0)
  double defect = 1;               // 1 - containment
};

struct SeedFrequency {
  Frequency theta;
  double magnitude = 0;  // |mean coefficient of 1_target| over the window
};

/// Largest |(1/|W|) sum over target of e(-theta x)| among nonzero j/q with q <= max_denominator;
/// vanishing coefficients are dropped.
std::vector<SeedFrequency> seed_frequencies(const WindowSet& target, std::int64_t max_denominator, std::size_t count);

/// Every spec of rank <= rank_cap over the grids, each with its best run. Ranked by
/// containment (desc), then eps (desc), then spec text. Rank 0 (all of Z) is always included.
std::vector<BohrCandidate> piecewise_bohr_scan(const WindowSet& target, const PiecewiseBohrOptions& options);

}  // namespace sumset
