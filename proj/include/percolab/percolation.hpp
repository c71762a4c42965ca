#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "percolab/graphs.hpp"
#include "percolab/union_find.hpp"

namespace percolab {

// One Bernoulli(p) bond configuration on a truncation.  Edge e is open
// iff hash(seed, replica, e) maps below p, so re-sampling with the same
// key reproduces the identical bitset.
struct PercolationSample {
    const FiniteTruncation* trunc = nullptr;
    double p = 0;
    uint64_t seed = 0;
    uint64_t replicaIndex = 0;
    std::vector<uint64_t> bits;

    bool open(size_t e) const { return (bits[e >> 6] >> (e & 63)) & 1; }
    size_t open_count() const;
};

PercolationSample sample_bonds(const FiniteTruncation& trunc, double p, uint64_t seed,
                               uint64_t replicaIndex);

// Threshold-coupling mode: per-edge uniforms; sample at probability p is
// "uniform < p", monotone in p for a fixed seed.
std::vector<double> sample_edge_uniforms(const FiniteTruncation& trunc, uint64_t seed,
                                         uint64_t replicaIndex);
PercolationSample sample_from_uniforms(const FiniteTruncation& trunc,
                                       const std::vector<double>& uniforms, double p,
                                       uint64_t seed, uint64_t replicaIndex);

// Union-find partition of a sample into open clusters.
struct ClusterLabeling {
    const PercolationSample* sample = nullptr;
    std::vector<uint32_t> root;                 // fully compressed root per vertex
    std::map<uint32_t, uint32_t> clusterSizes;  // root index -> size
    uint32_t clusterCount = 0;

    uint32_t root_of(uint32_t v) const { return root[v]; }
};

ClusterLabeling clusters(const PercolationSample& sample);

// True iff x and y share an open cluster.  Throws InvalidVertexError for
// vertices outside the truncation.
bool connected(const ClusterLabeling& label, const VertexId& x, const VertexId& y);

struct Estimate {
    double value = 0;
    double stderr_ = 0;
    uint64_t replicas = 0;
    int windowRadius = 0;
};

// Monte Carlo frequency of x <-> y inside a window of the given radius.
// The window is centered on the encoding-smaller endpoint, so the estimate
// is symmetric in (x, y) by construction; truncation makes it a lower
// bound on the infinite-volume two-point function.
Estimate two_point_estimate(const GraphSpec& spec, const VertexId& x, const VertexId& y, double p,
                            int windowRadius, uint64_t replicas, uint64_t seed, int threads = 0,
                            uint64_t cap = kDefaultTruncationCap);

// Axis-0 crossing of an L^dim box of Z^dim.
double crossing_probability(int dim, int L, double p, uint64_t replicas, uint64_t seed,
                            int threads = 0);

// Bisection of crossing_probability to the value 1/2, with shared edge
// uniforms across probes (monotone coupling).  Throws NonBracketingError
// when [pLo, pHi] does not bracket.
double estimate_pc(int dim, int L, double tolerance, uint64_t replicasPerProbe, uint64_t seed,
                   int threads = 0, double pLo = 0.0, double pHi = 1.0);

// Fraction of replicas in which the center reaches the window boundary.
Estimate boundary_reach_probability(const FiniteTruncation& trunc, double p, uint64_t replicas,
                                    uint64_t seed, int threads = 0);

} // namespace percolab
