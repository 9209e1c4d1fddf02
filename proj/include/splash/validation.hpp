#pragma once

// Acceptance checks, shared by `splash validate` and the acceptance binary.

#include "splash/spectral.hpp"

#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace splash::validation {

enum class Level { quick, full };

/// "quick" or "full"; anything else throws std::invalid_argument.
Level level_from_string(const std::string& s);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget = 0.0; ///< wall-clock budget in seconds; exceeding it fails the check
};

/// Criterion ids run at a level: quick = {2, 3, 4, 5, 12}, full = 1..12.
std::vector<int> criteria_for(Level level);

/// Number of criteria.
inline constexpr int criterion_count = 12;

/// Runs one criterion; exceptions become failures carrying the message.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run(Level level, const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  name: detail (1.23 s)".
void print_result(std::ostream& os, const CriterionResult& r);

/// Odd band-limited field sum_{k<=modes} b_k sin(k a) with b_k uniform in [-1, 1] times 2^{-k}.
Field random_odd_field(std::mt19937_64& rng, Index n, Index modes = 24);

} // namespace splash::validation
