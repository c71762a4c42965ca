#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "percolab/percolation.hpp"

namespace percolab {

// Two-point offspring law: empty with probability 1 - c/2, ceil(4/c)
// offspring with probability c/2.  Mean is always >= 2.
struct OffspringLawU {
    double c = 1.0;

    void validate() const;
    uint64_t big() const; // ceil(4/c)
    double p_big() const { return c / 2.0; }
    double mean() const { return p_big() * static_cast<double>(big()); }
    // P(X >= t)
    double survival(uint64_t t) const { return t == 0 ? 1.0 : (t <= big() ? p_big() : 0.0); }
};

// Multiset of particles of the modified branching random walk at one
// generation.  Exceeding populationCap aborts the replica with the flag
// set; nothing is silently truncated.
struct ParticleFront {
    std::vector<std::pair<VertexId, uint64_t>> particles; // sorted by encoding
    uint64_t generation = 0;
    uint64_t populationCap = 1'000'000;
    bool aborted = false;

    uint64_t total() const;
    static ParticleFront single(const VertexId& start, uint64_t populationCap);
};

// One step of the process: tree-vertex particles emit to every product
// neighbor independently with probability p (rule 1); attachment-point
// particles emit to their tree neighbor with probability p plus offspring
// on the two attachment fibers distributed as the percolation cluster of
// the particle's position inside its private copy, sampled on a window of
// the given radius and excluding the position itself (rules 2 and 3).
ParticleFront brw_step(const GraphSpec& productSpec, const ParticleFront& front, double p,
                       uint64_t seed, int copyWindow);

struct BrwResult {
    std::vector<VertexId> visited; // sorted by encoding
    uint64_t returnsToStart = 0;
    uint64_t finalPopulation = 0;
    uint64_t reachedT = 0;
    bool aborted = false;
};

BrwResult simulate_brw(const GraphSpec& productSpec, const VertexId& start, double p, int maxT,
                       uint64_t populationCap, uint64_t seed, int copyWindow);

// Deterministic support dynamics of the same rules driven by one bond
// configuration; used to check that the visited set covers the open
// cluster of the start outside copy interiors.
std::vector<uint8_t> brw_coupled_visited(const FiniteTruncation& productTrunc,
                                         const PercolationSample& sample, const VertexId& start,
                                         int maxT);

// True for copy vertices off the two attachment fibers.
bool is_copy_interior(const GraphSpec& spec, const VertexId& v);

// Partial sums of sum_{t>=1} sum_{s<=t even} (4d)^{s/2} d^{-s} 2^{-(t-s)}.
// Converges iff sqrt(4d)/d < 1, i.e. d > 4.
struct SeriesResult {
    std::vector<double> partialSums;
    double ratio = 0;
    bool converged = false;
};

SeriesResult expected_returns_series(int d, int tMax);

// Distribution of |Z|: level-l_n vertices reached from a fixed level
// l_{n-1} vertex by open paths between the levels, on the product graph.
struct OffspringDistribution {
    std::map<uint64_t, uint64_t> histogram;
    double mean = 0;
    double stderr_ = 0;
    uint64_t replicas = 0;
    uint64_t levelSize = 0; // number of candidate endpoints in the window
    bool lowerBoundOnly = false;
};

OffspringDistribution offspring_simulation(int d, int n, double p, uint64_t replicas,
                                           uint64_t seed, int window, int threads = 0,
                                           uint64_t cap = kDefaultTruncationCap);

// One-sided stochastic-domination test with a DKW confidence band.
struct DominanceResult {
    bool dominates = false;
    double margin = 0;
    double band = 0;
};

DominanceResult dominance_test(const std::vector<uint64_t>& samplesA, const OffspringLawU& lawB,
                               double confidence);

struct SurvivalEstimate {
    Estimate est;
    uint64_t capHits = 0; // replicas decided by reaching the cap
};

// Galton-Watson survival frequency.  A population reaching the cap counts
// as survival: extinction from that size has probability below double
// precision at these parameters.
SurvivalEstimate survival_probability(const OffspringLawU& law, int generations,
                                      uint64_t replicas, uint64_t seed,
                                      uint64_t populationCap = 100'000, int threads = 0);

} // namespace percolab
