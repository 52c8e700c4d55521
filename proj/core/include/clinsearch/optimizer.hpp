#pragma once

#include "clinsearch/ranking.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace clinsearch {

/// Discrete facet-weight grid: every facet takes values min, min+step, ...,
/// max. The step must divide the range evenly.
struct WeightGrid {
    double step = 0.1;
    double min_weight = 0.0;
    double max_weight = 2.0;
    std::vector<Facet> facets = {Facet::title, Facet::abstract, Facet::body,
                                 Facet::mesh,  Facet::concepts, Facet::all};

    int levels() const;
    double level_value(int level) const;
    void validate() const; ///< throws ConfigError
};

struct TraceEntry {
    int epoch = 0;
    int step = 0; ///< 0 for epoch start points
    FacetWeights weights;
    double objective = 0.0;
    bool accepted = false;
    bool restart = false;
};

struct OptimizerRun {
    uint64_t seed = 0;
    int epochs = 0;
    std::vector<TraceEntry> trace;
    FacetWeights best_weights;
    double best_score = 0.0;
};

using Objective = std::function<double(const FacetWeights&)>;

/// Steepest-ascent hill climbing over the grid. Starts from the all-max
/// corner; each step evaluates every single-coordinate +-step neighbour and
/// moves to the best strictly improving one (ties break in facet order,
/// +step before -step). A local optimum ends the epoch and triggers a
/// seeded uniform random restart; the global best is tracked across
/// restarts. Neighbour evaluations run on CLINSEARCH_WORKERS threads when
/// the variable is set; results are independent of the worker count.
OptimizerRun hill_climb(const Objective& objective, const WeightGrid& grid,
                        uint64_t seed, int epochs);

/// epoch,step,<one column per facet>,objective,accepted,restart
void write_trace_csv(const OptimizerRun& run, const WeightGrid& grid, std::ostream& out);

} // namespace clinsearch
