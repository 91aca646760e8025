// Copyright 2026 The qbu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QBU_GRAPHRED_HPP
#define QBU_GRAPHRED_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbu/exact.hpp"
#include "qbu/matchperm.hpp"

namespace qbu {

struct GraphEdge {
  int from = 0, to = 0;
  Rat weight{1};
};

// Directed graph with rational edge weights; self-loops allowed.  Parallel
// edges are summed into the adjacency matrix.
struct WeightedDigraph {
  int n = 0;
  std::vector<GraphEdge> edges;

  RatMatrix adjacency() const;
  bool unit_weights() const;
  void validate() const;  // throws invalid_input on out-of-range endpoints
};

// Two-terminal boundary condition for double-cover counting: the source s
// must emit exactly `flow` edge units and absorb none, the sink t absorb
// exactly `flow` and emit none.  Interior vertices keep in = out = 2.
struct Terminals {
  int s = 0, t = 0;
  int flow = 0;  // 0, 1, or 2
};

// Cover counts of a two-terminal gadget at net flow 0, 1, 2.
struct FlowProfile {
  BigInt f0{0}, f1{0}, f2{0};
  bool operator==(const FlowProfile& o) const {
    return f0 == o.f0 && f1 == o.f1 && f2 == o.f2;
  }
};

// How double covers are weighted when counted.
//   unit:     every cover counts 1 (times its edge-weight product).
//   collapse: a cover with edge multiplicities m_e counts prod_e 1/m_e!.
// The collapse weight is the rate at which cycle covers of the doubled graph
// land on the cover: each one lifts 4^|V| / prod_e m_e! ways (swap the two
// out-copies at every vertex, and independently resolve which in-copy each
// arriving edge uses; a doubled edge ties those two choices together).  So
// cycle covers of D(G) = 4^|V| x the collapse-weighted double covers of G.
// The two weightings agree up to 2^|V| exactly when every cover is made of
// doubled edges only.
enum class CoverWeight { unit, collapse };

// Collapse-weighted profile of a gadget, plus the weight its joint self-loop
// carries per chain link: 1/(2-f)! for the forced multiplicity 2 - f.
struct WeightedFlowProfile {
  Rat f0{0}, f1{0}, f2{0};
};

struct GadgetResult {
  WeightedDigraph graph;  // terminals included as vertices s, t
  int s = 0, t = 1;
  FlowProfile profile;
  std::uint32_t edge_mask = 0;  // position in the canonical enumeration
};

// Sum over cycle covers (spanning in = out = 1 edge sets) of the edge-weight
// product; the permanent of the adjacency matrix.  |V| <= 9.
Rat count_cycle_covers(const WeightedDigraph& g);

// Sum over double cycle covers: every edge takes multiplicity 0, 1, or 2 and
// every interior vertex needs in = out = 2.  Brute force over multiplicity
// assignments; guarded by 3^|E|.
Rat count_double_cycle_covers(const WeightedDigraph& g,
                              const std::optional<Terminals>& terminals = {},
                              CoverWeight weight = CoverWeight::unit);

// Same count for unit-weight graphs via depth-first assignment of out-edge
// multisets with in-degree pruning; handles the thin chained graphs that the
// brute-force enumeration cannot.
BigInt count_double_cycle_covers_dfs(const WeightedDigraph& g,
                                     const std::optional<Terminals>& terminals = {},
                                     int max_vertices = 40);

// One pass over all double-cover edge configurations of a unit-weight G,
// tallied by the per-vertex chain flow 2 - degree: the number of cover units
// each vertex would route through an attached chain.  The all-ones flow class
// is exactly the cycle covers of G.
std::map<std::vector<int>, BigInt> flow_class_tally(const WeightedDigraph& g);

// The same tally under collapse weighting.  The all-ones class is unchanged
// (its configurations use every edge at most once), so it still equals the
// cycle covers of G.
std::map<std::vector<int>, Rat> flow_class_tally_weighted(const WeightedDigraph& g);

// Searches digraphs on interior vertices {2,3,4} with terminals s=0, t=1 for
// a flow profile of (3, 4, 3), in a canonical ascending order over the 15
// candidate arcs (s to interior, all interior pairs and loops, interior to t).
// Deterministic: always returns the first hit.
GadgetResult search_gadget(int max_vertices = 5);

// Smallest l with (4/3)^(l-1) >= 271 + n^(2n), evaluated in exact integers.
long long chain_length(int n);

// Attaches an l-link chain of gadget copies to every vertex of G, entering at
// the link source and returning from the last link sink; consecutive links
// share a joint vertex carrying a self-loop (taken 2 - flow times, which is
// forced).  l = 0 returns G unchanged.  Adds 4l vertices per original vertex.
WeightedDigraph attach_chains(const WeightedDigraph& g, const GadgetResult& gadget,
                              long long links);

// floor(n_prime / 4^total_links) in exact arithmetic, where total_links counts
// every link over all attached chains.
BigInt recover_count(const Rat& n_prime, long long total_links);

// Twins every vertex; each edge reappears four times: adjacency becomes
// A tensor J_2.  Cycle covers of the result are 4^|V| times the
// collapse-weighted double covers of G (see CoverWeight); the bare count
// picks up the often-quoted factor 2^|V| only when every double cover is
// built from doubled edges alone.
WeightedDigraph double_graph(const WeightedDigraph& g);

// Undirected bipartite adjacency [[0, A], [A^T, 0]] with A as biadjacency;
// its perfect-matching sum is the permanent of A.
RatMatrix bipartite_lift(const RatMatrix& a);

// Where the collapse-weighted chained count W' comes from when a plan runs:
//   extraction:        pairing-coefficient extraction on the lifted doubled
//                      chained matrix (the full evaluator route); needs
//                      4|V'| within the pairing-sum guard.
//   doubled_permanent: direct permanent of the doubled chained adjacency;
//                      needs 2|V'| within the permanent guard.
//   combinatorial:     neither fits; only the unit-weight depth-first count
//                      runs and the weighted track is left empty.
enum class ChainEval { extraction, doubled_permanent, combinatorial };

// The full reduction pipeline for one input graph, sized for exact desk-scale
// execution.  Recovery runs on two parallel tracks:
//   - unit track: the amplification identity n_prime = 4^L N + R over plain
//     cover counts, with the remainder R summed over all non-unit flow
//     classes (the unit class itself is never used, so recovery stays
//     independent of the answer); N = (n_prime - R) / 4^L at any chain
//     length.  Floored division, the literal floor(n_prime / 4^L), becomes
//     valid once R < 4^L; chain lengths making that true blow the evaluator
//     budgets for most graphs, so plans record whether it applies.
//   - collapse track: what the doubled-graph evaluators actually measure.
//     W' = perm(D(chained)) / 4^|V'| is the collapse-weighted cover count of
//     the chained graph; the class factors become cw(f)^l jw(f)^(l-1) from
//     the weighted gadget profile and the joint self-loop weight
//     jw(f) = 1/(2-f)!, and N = (W' - R_w) / cw(1)^L exactly, because the
//     unit class is all single edges and keeps plain weight.
// The doubling/bipartite/extraction stages also run on the unchained graph,
// where sizes stay small, so every pipeline stage is exercised at a size the
// exact evaluators can afford.
struct ReductionPlan {
  WeightedDigraph original;
  GadgetResult gadget;
  WeightedFlowProfile gadget_weighted;  // collapse-weighted profile
  long long links_per_vertex = 1;
  long long total_links = 0;
  bool floored_recovery_valid = false;
  BigInt remainder;            // R above (unit track)
  Rat remainder_weighted;      // R_w above (collapse track)
  Rat unit_factor_weighted;    // cw(1)^L, the divisor of the collapse track
  WeightedDigraph chained;
  ChainEval chain_eval = ChainEval::combinatorial;

  // Doubled/bipartite stage on the original graph.
  WeightedDigraph doubled_original;
  RatMatrix biadjacency;     // adjacency of the doubled graph
  RatMatrix qbu_matrix;      // I[2] + bipartite lift of the biadjacency
  Rat alpha_max;

  std::vector<std::string> recipe;
};

struct PlanExecution {
  BigInt n_prime{0};                      // plain cover count of the chain
  BigInt recovered{0};                    // exact-subtraction result
  std::optional<BigInt> recovered_floor;  // set when floored recovery applies
  BigInt cycle_covers_direct{0};          // oracle: permanent of the adjacency

  // Collapse track on the chained graph; empty under ChainEval::combinatorial.
  std::optional<Rat> w_prime;              // perm(D(chained)) / 4^|V'|
  std::optional<BigInt> recovered_weighted;

  // Doubled/bipartite stage measurements on the original graph.
  BigInt pairing_leading{0};    // = perm(D(G)) via the lifted pairing sum
  BigInt permanent_leading{0};
  Rat dcc_brute{0};             // plain double covers of G
  Rat dcc_weighted{0};          // collapse-weighted double covers of G
  bool square_relation_holds = false;   // permanent_leading == pairing_leading^2
  bool collapse_identity_holds = false; // pairing_leading == 4^|V| x dcc_weighted
  bool printed_identity_holds = false;  // pairing_leading == 2^|V| x dcc_brute;
                                        // reported, not required: fails when
                                        // covers use single edges

  bool consistent = false;
  std::vector<std::string> log;
};

ReductionPlan compile_dcc_to_qbu(const WeightedDigraph& g,
                                 std::optional<long long> links_override = {});
ReductionPlan compile_dcc_to_qbu(const WeightedDigraph& g, const GadgetResult& gadget,
                                 std::optional<long long> links_override = {});

PlanExecution execute_plan(const ReductionPlan& plan);

// The cached result of search_gadget(5).
const GadgetResult& default_gadget();

}  // namespace qbu

#endif  // QBU_GRAPHRED_HPP
