#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace scmi {

// Sparse nonnegative function over finite-support variables. Keys compare
// and merge by exact floating-point equality: atoms of the same value arise
// from identical computations and share a bit pattern. std::map keeps
// iteration (and therefore all derived output) deterministic.
struct Factor {
    std::vector<std::string> scope;  // distinct names
    std::map<std::vector<double>, double> table;

    double total_mass() const;
    bool defined_over(const std::string& name) const;
    int position_of(const std::string& name) const;  // -1 if absent
};

Factor factor_product(const Factor& a, const Factor& b);

// Sums out `name` from the factor; scope shrinks by one.
Factor factor_sum_out(const Factor& f, const std::string& name);

// Fixes name=value and drops it from the scope. Entries that disagree with
// the value vanish.
Factor factor_restrict(const Factor& f, const std::string& name, double value);

// Scales entries to total mass 1. Throws EngineError(ZeroProbabilityEvidence)
// when the factor has no mass.
Factor factor_normalize(const Factor& f);

bool factor_equal(const Factor& a, const Factor& b, double tol);

enum class EliminationHeuristic {
    MinDegree,         // fewest distinct neighbors at elimination time
    DeclarationOrder,  // follow canonical_order
};

// Sum-product variable elimination: removes every name in `hidden` from the
// product of `factors` and returns the product of what remains.
// canonical_order provides the declaration-order sequence and breaks
// min-degree ties; names missing from it rank after it, alphabetically.
Factor eliminate(std::vector<Factor> factors,
                 const std::set<std::string>& hidden,
                 EliminationHeuristic heuristic,
                 const std::vector<std::string>& canonical_order);

}  // namespace scmi
