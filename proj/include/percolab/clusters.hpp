#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "percolab/percolation.hpp"

namespace percolab {

// Distribution of the number of distinct open clusters linking the inner
// ball to the outer boundary: the finite-scale surrogate for the 0/1/inf
// count of infinite clusters.
struct TrichotomyReport {
    GraphSpec spec;
    double p = 0;
    int innerRadius = 0;
    int outerRadius = 0;
    uint64_t replicas = 0;
    uint64_t seed = 0;
    std::map<uint32_t, uint64_t> countDistribution;
    double meanCount = 0;
    double stderr_ = 0;
    bool lazyExploration = false;
};

// Per-replica exploration caps for the lazy (non-materialized) path.
struct ExploreLimits {
    uint64_t materializeCap = kDefaultTruncationCap;
    uint64_t exploredCap = 60'000'000;
};

TrichotomyReport boundary_cluster_count(const GraphSpec& spec, int r, int R, double p,
                                        uint64_t replicas, uint64_t seed, int threads = 0,
                                        ExploreLimits limits = {});

// Number of window vertices whose removal splits their open cluster's
// boundary connections into >= 3 parts.
uint32_t trifurcation_count(const ClusterLabeling& label, const std::vector<VertexId>& window);

// Frequencies of the shell-escape events E_i (reaches shell i but not
// shell i+1) and the thin-intersection events F_i (between 1 and L
// distinct line coordinates reached on shell i, connectivity restricted
// to the sub-window of base radius radii[i]).
struct AnnulusReport {
    std::vector<int> radii;
    int L = 0;
    uint64_t replicas = 0;
    std::vector<double> eFreq; // size radii.size()-1
    std::vector<double> fFreq; // size radii.size()
    double eFreqSum = 0;
    bool fDecreasing = false;
};

AnnulusReport annulus_escape_events(const GraphSpec& productSpec, const VertexId& baseVertex,
                                    double p, const std::vector<int>& radii, int L,
                                    uint64_t replicas, uint64_t seed, int threads = 0,
                                    uint64_t cap = kDefaultTruncationCap);

// Confined: removing cutEdges provably leaves every vertex of A in a
// finite component (no component touches the verification ball boundary).
// Inconclusive: some component escapes this window; a larger radius may
// still certify.
enum class CutsetVerdict { Confined, Inconclusive };

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

CutsetVerdict verify_cutset(const GraphSpec& spec, const std::vector<VertexId>& targetSet,
                            const EdgeList& cutEdges, int verifyRadius,
                            uint64_t cap = kDefaultTruncationCap);

struct CutsetCertificate {
    std::vector<VertexId> targetSet;
    EdgeList cutEdges;
    int bound = 0; // the K the certificate was requested under
};

struct CutsetSearchResult {
    std::optional<CutsetCertificate> certificate;
    uint64_t minCut = 0;
    int searchRadius = 0;
};

// Min cut between A and the boundary of ball(A, searchRadius); a
// certificate is returned iff the cut has at most K edges.
CutsetSearchResult find_bounded_cutset(const GraphSpec& spec, const std::vector<VertexId>& targetSet,
                                       int K, int searchRadius,
                                       uint64_t cap = kDefaultTruncationCap);

} // namespace percolab
