#pragma once

#include <cstdint>
#include <random>

#include "periodmap/archimedean.hpp"
#include "periodmap/connection.hpp"

namespace periodmap {

struct SpecInfeasible : EngineError {
    explicit SpecInfeasible(const std::string& msg) : EngineError("SpecInfeasible", msg) {}
};

/* Deterministic recipe for a random flat transversal connection.
 * Two constructions:
 *   - s = 1: arbitrary A(t) with graded components of degree >= -1 only
 *     (single-variable connections carry no curvature condition);
 *   - s >= 2: commuting constant multiples of one degree-(-1) nilpotent
 *     along the level flag, optionally conjugated by a level-preserving
 *     gauge g(t) with g(0) = id.
 * Both stay flat and transversal by construction.  Fully reproducible from
 * (spec, seed). */
struct GeneratorSpec {
    int rank = 3;
    std::vector<int> levels = {2, 1, 0};
    int s = 1;
    int n = 2;
    int weight = 2;
    bool gauge = true;             // apply a gauge when s >= 2
    bool t_dependent = true;       // allow t-dependent entries when s = 1
    bool non_commuting = false;    // infeasible request, for negative tests
};

struct GeneratedInstance {
    FilteredModule module;
    Connection connection;
};

GeneratedInstance gen_flat_transversal(const GeneratorSpec& spec, uint64_t seed);

// Small random helpers shared by tests and suites.
GaussianRational random_rational(std::mt19937_64& rng, int max_num = 3, bool gaussian = true);
TruncatedSeries random_series(int s, int n, std::mt19937_64& rng, int max_num = 3);

/* Level-preserving unipotent gauge whose transformed connection stays an
 * honest polynomial within the jet budget (requires N >= 2). */
SMat random_unipotent_gauge(const FilteredModule& f, std::mt19937_64& rng);

}  // namespace periodmap
