#include "kgsynth/taskgen/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kgsynth/common/error.hpp"

namespace kgsynth::taskgen {

double triple_log1p(double x) {
    if (!(x >= 0.0)) throw DomainError("triple_log1p needs x >= 0, got " + std::to_string(x));
    return std::log1p(std::log1p(std::log1p(x)));
}

GenerationWeight code_weight(const CodeStats& stats) {
    const double w = triple_log1p(static_cast<double>(stats.n_symp)) * triple_log1p(static_cast<double>(stats.n_exmp));
    return {stats.code, w, 0};
}

std::map<IcdCategory, std::size_t> default_exceptions() { return {{IcdCategory::parse("Z00"), 10}}; }

std::vector<GenerationWeight> allocate_counts(std::vector<GenerationWeight> weights, std::size_t total,
                                              const std::map<IcdCategory, std::size_t>& exceptions) {
    std::sort(weights.begin(), weights.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
    for (std::size_t i = 1; i < weights.size(); ++i)
        if (weights[i].code == weights[i - 1].code) throw InfeasibleError("duplicate code " + weights[i].code.code());
    for (const auto& w : weights)
        if (!(w.weight >= 0.0) || !std::isfinite(w.weight))
            throw InfeasibleError("weight of " + w.code.code() + " must be finite and >= 0");

    std::size_t fixed = 0;
    for (const auto& [code, count] : exceptions) {
        fixed += count;
        const auto it = std::find_if(weights.begin(), weights.end(), [&](const auto& w) { return w.code == code; });
        if (it == weights.end()) weights.push_back({code, 0.0, 0});
    }
    if (fixed > total)
        throw InfeasibleError("exception counts (" + std::to_string(fixed) + ") exceed total " + std::to_string(total));
    std::sort(weights.begin(), weights.end(), [](const auto& a, const auto& b) { return a.code < b.code; });

    std::vector<std::size_t> pool;  // indices sharing the proportional remainder
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (const auto it = exceptions.find(weights[i].code); it != exceptions.end()) {
            weights[i].allocated = it->second;
        } else {
            weights[i].allocated = 0;
            pool.push_back(i);
            sum += weights[i].weight;
        }
    }
    const std::size_t remaining = total - fixed;
    if (remaining == 0) return weights;
    if (!(sum > 0.0)) throw InfeasibleError("no code with positive weight to receive " + std::to_string(remaining) + " entries");

    std::vector<double> frac(weights.size(), 0.0);
    std::size_t assigned = 0;
    for (auto i : pool) {
        const double quota = static_cast<double>(remaining) * weights[i].weight / sum;
        const double whole = std::floor(quota);
        weights[i].allocated = static_cast<std::size_t>(whole);
        frac[i] = quota - whole;
        assigned += weights[i].allocated;
    }
    // Largest fractional part first; ties go to the smaller code.
    std::stable_sort(pool.begin(), pool.end(), [&](auto a, auto b) { return frac[a] > frac[b]; });
    // Rounding noise can push the floors past the target; take back from the
    // smallest remainders first.
    for (auto it = pool.rbegin(); assigned > remaining && it != pool.rend(); ++it) {
        if (weights[*it].allocated > 0) {
            --weights[*it].allocated;
            --assigned;
        }
    }
    for (std::size_t k = 0; assigned < remaining; k = (k + 1) % pool.size()) {
        if (weights[pool[k]].weight > 0.0) {
            ++weights[pool[k]].allocated;
            ++assigned;
        }
    }
    return weights;
}

}  // namespace kgsynth::taskgen
