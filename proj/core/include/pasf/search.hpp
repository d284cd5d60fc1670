#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pasf/frames.hpp"

namespace pasf {

struct Budget {
    std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
    double max_seconds = std::numeric_limits<double>::infinity();
};

enum class SearchStatus { holds_with_witness, refuted_with_witness, exhausted_inconclusive };
enum class SearchStrategy { exhaustive, greedy, local_search };

std::string to_string(SearchStatus s);
std::string to_string(SearchStrategy s);

// Index partition with per-part certificates; independently re-checkable via
// verify_certificate. Indices are 0-based in memory, 1-based on disk.
struct PartitionCertificate {
    std::vector<std::vector<int>> parts;
    std::string criterion;  // "feichtinger" | "weaver" | "r-eps"
    std::vector<RieszBoundPair> per_part_bounds;  // feichtinger / r-eps
    std::vector<double> per_part_norms;           // weaver partial operator norms
    double a_min = 0.0;
    double eps = 0.0;
    double b = 0.0;
    bool verified = false;
};

struct SearchReport {
    SearchStatus status = SearchStatus::exhausted_inconclusive;
    SearchStrategy strategy = SearchStrategy::exhaustive;
    std::uint64_t nodes_examined = 0;
    std::uint64_t seed = 0;
    bool wall_budget_exceeded = false;
    std::string conjecture;  // citation tag, e.g. "Conjecture FB"

    // payloads; which ones are filled depends on the harness
    std::optional<PartitionCertificate> certificate;
    std::optional<int> minimal_m;
    double objective = 0.0;
    std::vector<int> subset;
    std::optional<Vec> witness_x;
    std::optional<Vec> witness_y;
    std::vector<Mat> witness_mats;
    std::vector<double> witness_coeffs;
    std::vector<Mat> witness_mats_second;      // functional-side decomposition
    std::vector<double> witness_coeffs_second;
    std::optional<Mat> witness_f;
    std::optional<Mat> witness_t;
    // interval unions standing in for measurable sets (continuous bridge)
    std::vector<std::vector<std::array<double, 2>>> interval_parts;
    std::string note;
};

// shared budget bookkeeping for the search loops
class BudgetMeter {
public:
    explicit BudgetMeter(const Budget& b)
        : budget_(b), start_(std::chrono::steady_clock::now()) {}

    // count one node; returns false once a budget is exhausted
    bool tick() {
        ++nodes_;
        if (nodes_ > budget_.max_nodes) return false;
        if ((nodes_ & 511u) == 0 && std::isfinite(budget_.max_seconds)) {
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (s > budget_.max_seconds) {
                wall_exceeded_ = true;
                return false;
            }
        }
        return true;
    }

    std::uint64_t nodes() const { return nodes_; }
    bool wall_exceeded() const { return wall_exceeded_; }

private:
    Budget budget_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t nodes_ = 0;
    bool wall_exceeded_ = false;
};

}  // namespace pasf
