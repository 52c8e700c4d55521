#include "clinsearch/optimizer.hpp"

#include "clinsearch/error.hpp"
#include "clinsearch/rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <map>
#include <ostream>

namespace clinsearch {

int WeightGrid::levels() const {
    return static_cast<int>(std::llround((max_weight - min_weight) / step)) + 1;
}

double WeightGrid::level_value(int level) const {
    return min_weight + step * static_cast<double>(level);
}

void WeightGrid::validate() const {
    if (!(step > 0.0)) {
        throw ConfigError("weight grid: step must be positive");
    }
    if (!(max_weight > min_weight) || min_weight < 0.0 || max_weight > 2.0) {
        throw ConfigError("weight grid: range must lie within [0, 2]");
    }
    const double steps = (max_weight - min_weight) / step;
    if (std::fabs(steps - std::llround(steps)) > 1e-9) {
        throw ConfigError("weight grid: step must divide the range evenly");
    }
    if (facets.empty()) {
        throw ConfigError("weight grid: at least one facet required");
    }
}

namespace {

size_t worker_count() {
    if (const char* env = std::getenv("CLINSEARCH_WORKERS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) {
            return static_cast<size_t>(n);
        }
    }
    return 1;
}

using Point = std::vector<int>;

FacetWeights to_weights(const Point& levels, const WeightGrid& grid) {
    FacetWeights w;
    for (size_t i = 0; i < grid.facets.size(); ++i) {
        w.set(grid.facets[i], grid.level_value(levels[i]));
    }
    return w;
}

class CachedObjective {
public:
    CachedObjective(const Objective& fn, const WeightGrid& grid, size_t workers)
        : fn_(fn), grid_(grid), workers_(workers) {}

    double eval(const Point& p) {
        const auto it = cache_.find(p);
        if (it != cache_.end()) {
            return it->second;
        }
        const double value = fn_(to_weights(p, grid_));
        cache_.emplace(p, value);
        return value;
    }

    // Evaluates a batch; results land in the cache. Concurrency cannot
    // change any value, only who computes it first.
    void eval_batch(const std::vector<Point>& points) {
        if (workers_ <= 1 || points.size() <= 1) {
            for (const auto& p : points) {
                eval(p);
            }
            return;
        }
        std::vector<std::pair<Point, std::future<double>>> pending;
        for (const auto& p : points) {
            if (cache_.contains(p)) {
                continue;
            }
            pending.emplace_back(p, std::async(std::launch::async, [this, p] {
                                     return fn_(to_weights(p, grid_));
                                 }));
        }
        for (auto& [p, fut] : pending) {
            cache_.emplace(p, fut.get());
        }
    }

private:
    const Objective& fn_;
    const WeightGrid& grid_;
    size_t workers_;
    std::map<Point, double> cache_;
};

} // namespace

OptimizerRun hill_climb(const Objective& objective, const WeightGrid& grid, uint64_t seed,
                        int epochs) {
    grid.validate();
    if (epochs < 1) {
        throw ConfigError("hill climb: epochs must be >= 1");
    }
    const int levels = grid.levels();
    const size_t n_facets = grid.facets.size();
    CachedObjective cached(objective, grid, worker_count());
    DetRng rng(seed);

    OptimizerRun run;
    run.seed = seed;
    run.epochs = epochs;

    Point current(n_facets, levels - 1); // start with every facet at the maximum weight
    double current_value = cached.eval(current);
    run.best_weights = to_weights(current, grid);
    run.best_score = current_value;
    run.trace.push_back({1, 0, run.best_weights, current_value, true, false});

    auto consider_best = [&](const Point& p, double value) {
        if (value > run.best_score) {
            run.best_score = value;
            run.best_weights = to_weights(p, grid);
        }
    };

    for (int epoch = 1; epoch <= epochs; ++epoch) {
        int step = 0;
        while (true) {
            ++step;
            std::vector<Point> neighbors;
            for (size_t f = 0; f < n_facets; ++f) {
                for (int delta : {+1, -1}) {
                    const int level = current[f] + delta;
                    if (level < 0 || level >= levels) {
                        continue;
                    }
                    Point p = current;
                    p[f] = level;
                    neighbors.push_back(std::move(p));
                }
            }
            if (neighbors.empty()) {
                break;
            }
            cached.eval_batch(neighbors);
            size_t best_idx = 0;
            double best_value = cached.eval(neighbors[0]);
            for (size_t i = 1; i < neighbors.size(); ++i) {
                const double v = cached.eval(neighbors[i]);
                if (v > best_value) { // ties keep the earlier neighbour
                    best_value = v;
                    best_idx = i;
                }
            }
            if (best_value > current_value) {
                current = neighbors[best_idx];
                current_value = best_value;
                consider_best(current, current_value);
                run.trace.push_back(
                    {epoch, step, to_weights(current, grid), current_value, true, false});
            } else {
                run.trace.push_back(
                    {epoch, step, to_weights(neighbors[best_idx], grid), best_value, false, false});
                break; // local optimum
            }
        }
        if (epoch < epochs) {
            for (size_t f = 0; f < n_facets; ++f) {
                current[f] = static_cast<int>(rng.below(static_cast<uint64_t>(levels)));
            }
            current_value = cached.eval(current);
            consider_best(current, current_value);
            run.trace.push_back(
                {epoch + 1, 0, to_weights(current, grid), current_value, true, true});
        }
    }
    return run;
}

void write_trace_csv(const OptimizerRun& run, const WeightGrid& grid, std::ostream& out) {
    out << "epoch,step";
    for (Facet f : grid.facets) {
        out << ',' << to_string(f);
    }
    out << ",objective,accepted,restart\n";
    for (const auto& entry : run.trace) {
        out << entry.epoch << ',' << entry.step;
        for (Facet f : grid.facets) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.4f", entry.weights.get(f));
            out << ',' << buf;
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", entry.objective);
        out << ',' << buf << ',' << (entry.accepted ? 1 : 0) << ',' << (entry.restart ? 1 : 0)
            << "\n";
    }
}

} // namespace clinsearch
