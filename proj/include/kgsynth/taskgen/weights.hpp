#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "kgsynth/common/icd.hpp"

namespace kgsynth::taskgen {

/// J(J(J(x))) with J(x) = ln(1 + x). Throws DomainError for x < 0 or NaN.
double triple_log1p(double x);

struct CodeStats {
    IcdCategory code;
    std::size_t n_symp = 0;  // unique symptoms linked to the code
    std::size_t n_exmp = 0;  // real training notes with the code
};

struct GenerationWeight {
    IcdCategory code;
    double weight = 0.0;
    std::size_t allocated = 0;
};

/// w = triple_log1p(n_symp) * triple_log1p(n_exmp); zero iff either count is zero.
GenerationWeight code_weight(const CodeStats& stats);

/// {Z00: 10}: general examinations get a fixed number of generations.
std::map<IcdCategory, std::size_t> default_exceptions();

/// Splits `total` entries between codes. Exception codes get exactly their
/// fixed count; the rest is shared in proportion to weight using
/// largest-remainder rounding (ties broken by code), so the counts sum to
/// `total` exactly and each is within one of its real-valued quota.
///
/// Exception codes missing from `weights` are added. The result is sorted by
/// code. Throws InfeasibleError if the exceptions exceed the total or if
/// entries remain to share but no non-exception code has positive weight.
std::vector<GenerationWeight> allocate_counts(std::vector<GenerationWeight> weights, std::size_t total,
                                              const std::map<IcdCategory, std::size_t>& exceptions = {});

}  // namespace kgsynth::taskgen
