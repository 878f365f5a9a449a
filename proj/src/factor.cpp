#include "scmi/factor.hpp"

#include <algorithm>
#include <cmath>

#include "scmi/errors.hpp"

namespace scmi {

double Factor::total_mass() const {
    double sum = 0.0;
    for (const auto& [key, p] : table) sum += p;
    return sum;
}

bool Factor::defined_over(const std::string& name) const {
    return position_of(name) >= 0;
}

int Factor::position_of(const std::string& name) const {
    const auto it = std::find(scope.begin(), scope.end(), name);
    return it == scope.end() ? -1 : static_cast<int>(it - scope.begin());
}

Factor factor_product(const Factor& a, const Factor& b) {
    Factor out;
    out.scope = a.scope;
    std::vector<int> b_from_out;  // for b-only names: their slot in b
    std::vector<int> b_shared_out;  // out position of each shared b name
    std::vector<int> b_shared_b;
    for (std::size_t j = 0; j < b.scope.size(); ++j) {
        const int pos = a.position_of(b.scope[j]);
        if (pos >= 0) {
            b_shared_out.push_back(pos);
            b_shared_b.push_back(static_cast<int>(j));
        } else {
            out.scope.push_back(b.scope[j]);
            b_from_out.push_back(static_cast<int>(j));
        }
    }
    for (const auto& [ka, pa] : a.table) {
        for (const auto& [kb, pb] : b.table) {
            bool match = true;
            for (std::size_t s = 0; s < b_shared_out.size(); ++s) {
                if (ka[static_cast<std::size_t>(b_shared_out[s])] !=
                    kb[static_cast<std::size_t>(b_shared_b[s])]) {
                    match = false;
                    break;
                }
            }
            if (!match) continue;
            std::vector<double> key = ka;
            key.reserve(out.scope.size());
            for (int j : b_from_out) key.push_back(kb[static_cast<std::size_t>(j)]);
            out.table[key] += pa * pb;
        }
    }
    return out;
}

Factor factor_sum_out(const Factor& f, const std::string& name) {
    const int pos = f.position_of(name);
    if (pos < 0) return f;
    Factor out;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
        if (static_cast<int>(i) != pos) out.scope.push_back(f.scope[i]);
    }
    for (const auto& [key, p] : f.table) {
        std::vector<double> reduced;
        reduced.reserve(key.size() - 1);
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (static_cast<int>(i) != pos) reduced.push_back(key[i]);
        }
        out.table[reduced] += p;
    }
    return out;
}

Factor factor_restrict(const Factor& f, const std::string& name, double value) {
    const int pos = f.position_of(name);
    if (pos < 0) return f;
    Factor out;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
        if (static_cast<int>(i) != pos) out.scope.push_back(f.scope[i]);
    }
    for (const auto& [key, p] : f.table) {
        if (key[static_cast<std::size_t>(pos)] != value) continue;
        std::vector<double> reduced;
        reduced.reserve(key.size() - 1);
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (static_cast<int>(i) != pos) reduced.push_back(key[i]);
        }
        out.table[reduced] += p;
    }
    return out;
}

Factor factor_normalize(const Factor& f) {
    const double mass = f.total_mass();
    if (!(mass > 0.0)) {
        throw EngineError(ErrorCode::ZeroProbabilityEvidence,
                          "cannot normalize a factor with zero total mass");
    }
    Factor out;
    out.scope = f.scope;
    for (const auto& [key, p] : f.table) {
        if (p != 0.0) out.table[key] = p / mass;
    }
    return out;
}

bool factor_equal(const Factor& a, const Factor& b, double tol) {
    if (a.scope.size() != b.scope.size()) return false;
    // Align b's columns to a's scope order.
    std::vector<int> perm;
    perm.reserve(a.scope.size());
    for (const auto& name : a.scope) {
        const int pos = b.position_of(name);
        if (pos < 0) return false;
        perm.push_back(pos);
    }
    std::map<std::vector<double>, double> realigned;
    for (const auto& [key, p] : b.table) {
        std::vector<double> k(key.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            k[i] = key[static_cast<std::size_t>(perm[i])];
        }
        realigned[k] += p;
    }
    auto covered = [tol](const std::map<std::vector<double>, double>& lhs,
                         const std::map<std::vector<double>, double>& rhs) {
        for (const auto& [key, p] : lhs) {
            const auto it = rhs.find(key);
            const double q = it == rhs.end() ? 0.0 : it->second;
            if (std::abs(p - q) > tol) return false;
        }
        return true;
    };
    return covered(a.table, realigned) && covered(realigned, a.table);
}

namespace {

int canonical_rank(const std::string& name, const std::vector<std::string>& canonical_order) {
    const auto it = std::find(canonical_order.begin(), canonical_order.end(), name);
    return it == canonical_order.end() ? static_cast<int>(canonical_order.size())
                                       : static_cast<int>(it - canonical_order.begin());
}

// Later canonical rank loses ties; names outside the canonical order sort
// after it, alphabetically.
bool canonical_before(const std::string& a, const std::string& b,
                      const std::vector<std::string>& canonical_order) {
    const int ra = canonical_rank(a, canonical_order);
    const int rb = canonical_rank(b, canonical_order);
    if (ra != rb) return ra < rb;
    return a < b;
}

}  // namespace

Factor eliminate(std::vector<Factor> factors,
                 const std::set<std::string>& hidden,
                 EliminationHeuristic heuristic,
                 const std::vector<std::string>& canonical_order) {
    std::set<std::string> remaining = hidden;
    while (!remaining.empty()) {
        std::string pick;
        if (heuristic == EliminationHeuristic::DeclarationOrder) {
            for (const auto& name : remaining) {
                if (pick.empty() || canonical_before(name, pick, canonical_order)) pick = name;
            }
        } else {
            // Min-degree: fewest distinct co-occurring names across the
            // factors that mention the candidate.
            std::size_t best_degree = 0;
            for (const auto& name : remaining) {
                std::set<std::string> neighbors;
                for (const auto& f : factors) {
                    if (!f.defined_over(name)) continue;
                    neighbors.insert(f.scope.begin(), f.scope.end());
                }
                neighbors.erase(name);
                const std::size_t degree = neighbors.size();
                if (pick.empty() || degree < best_degree ||
                    (degree == best_degree && canonical_before(name, pick, canonical_order))) {
                    pick = name;
                    best_degree = degree;
                }
            }
        }
        remaining.erase(pick);

        Factor merged;
        merged.table[{}] = 1.0;
        std::vector<Factor> rest;
        for (auto& f : factors) {
            if (f.defined_over(pick)) {
                merged = factor_product(merged, f);
            } else {
                rest.push_back(std::move(f));
            }
        }
        rest.push_back(factor_sum_out(merged, pick));
        factors = std::move(rest);
    }

    Factor out;
    out.table[{}] = 1.0;
    for (const auto& f : factors) out = factor_product(out, f);
    return out;
}

}  // namespace scmi
