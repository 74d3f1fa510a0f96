#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace rpt {

// Disjoint-set forest with path halving and union by size.
// Reusable scratch object: reset() restores N singletons without reallocating.
class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) { reset(n); }

    void reset(std::size_t n) {
        parent_.resize(n);
        size_.assign(n, 1);
        std::iota(parent_.begin(), parent_.end(), 0);
        count_ = n;
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool merge(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        if (size_[ra] < size_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        size_[ra] += size_[rb];
        --count_;
        return true;
    }

    bool connected(int a, int b) { return find(a) == find(b); }

    std::size_t count() const { return count_; }
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
    std::size_t count_ = 0;
};

}  // namespace rpt
