#include "pasf/partitions.hpp"

#include <algorithm>
#include <stdexcept>

namespace pasf {

std::uint64_t for_each_rgs(int n, int max_parts,
                           const std::function<bool(const std::vector<int>&)>& visit) {
    if (n < 1 || max_parts < 1) throw std::invalid_argument("for_each_rgs: n, max_parts >= 1");
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::uint64_t visited = 0;
    for (;;) {
        ++visited;
        if (!visit(a)) return visited;
        // advance to the next restricted-growth string, lexicographically
        int i = n - 1;
        for (; i > 0; --i) {
            int prefix_max = 0;
            for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, a[j]);
            if (a[i] < std::min(prefix_max + 1, max_parts - 1)) break;
        }
        if (i == 0) return visited;
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0);
    }
}

std::vector<std::vector<int>> parts_from_rgs(const std::vector<int>& rgs) {
    int m = 0;
    for (int label : rgs) m = std::max(m, label + 1);
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < rgs.size(); ++i)
        parts[static_cast<std::size_t>(rgs[i])].push_back(static_cast<int>(i));
    return parts;
}

std::vector<int> rgs_from_parts(int n, const std::vector<std::vector<int>>& parts) {
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].empty()) throw std::invalid_argument("rgs_from_parts: empty part");
        for (int i : parts[k]) {
            if (i < 0 || i >= n) throw std::out_of_range("rgs_from_parts: index out of range");
            if (owner[static_cast<std::size_t>(i)] != -1)
                throw std::invalid_argument("rgs_from_parts: parts not disjoint");
            owner[static_cast<std::size_t>(i)] = static_cast<int>(k);
        }
    }
    std::vector<int> relabel(parts.size(), -1);
    std::vector<int> rgs(static_cast<std::size_t>(n));
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int o = owner[static_cast<std::size_t>(i)];
        if (o == -1) throw std::invalid_argument("rgs_from_parts: parts do not cover the index set");
        if (relabel[static_cast<std::size_t>(o)] == -1) relabel[static_cast<std::size_t>(o)] = next++;
        rgs[static_cast<std::size_t>(i)] = relabel[static_cast<std::size_t>(o)];
    }
    return rgs;
}

bool subset_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<int> subset_from_mask(std::uint32_t mask, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) out.push_back(i);
    return out;
}

}  // namespace pasf
