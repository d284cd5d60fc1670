#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pasf {

// Visit set partitions of {0..n-1} encoded as restricted-growth strings, in
// lexicographic order, with at most max_parts labels. The visitor returns
// false to stop early. Returns the number of strings visited.
std::uint64_t for_each_rgs(int n, int max_parts,
                           const std::function<bool(const std::vector<int>&)>& visit);

std::vector<std::vector<int>> parts_from_rgs(const std::vector<int>& rgs);

// canonical (first-occurrence) labels for a list of parts; throws unless the
// parts are a disjoint cover of {0..n-1}
std::vector<int> rgs_from_parts(int n, const std::vector<std::vector<int>>& parts);

// lexicographic order on sorted index subsets (shorter prefix wins ties)
bool subset_lex_less(const std::vector<int>& a, const std::vector<int>& b);

std::vector<int> subset_from_mask(std::uint32_t mask, int n);

}  // namespace pasf
