#include "histq/set_partitions.hpp"

#include <algorithm>

#include "histq/error.hpp"

namespace histq {

SetPartitions::SetPartitions(std::size_t n) : rgs_(n, 0), prefix_max_(n, 0) {}

std::size_t SetPartitions::block_count() const
{
    return rgs_.empty() ? 0 : prefix_max_.back() + 1;
}

bool SetPartitions::next()
{
    const std::size_t n = rgs_.size();
    if (n < 2) return false;
    // Rightmost position that can still grow.
    for (std::size_t i = n - 1; i >= 1; --i) {
        if (rgs_[i] <= prefix_max_[i - 1]) {
            ++rgs_[i];
            prefix_max_[i] = std::max(prefix_max_[i - 1], rgs_[i]);
            for (std::size_t k = i + 1; k < n; ++k) {
                rgs_[k] = 0;
                prefix_max_[k] = prefix_max_[i];
            }
            return true;
        }
    }
    return false;
}

std::vector<std::vector<std::size_t>> blocks_of(const std::vector<std::size_t>& rgs)
{
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < rgs.size(); ++i) {
        if (rgs[i] >= out.size()) out.resize(rgs[i] + 1);
        out[rgs[i]].push_back(i);
    }
    return out;
}

std::uint64_t bell_number(std::size_t n)
{
    if (n > 25) throw Error("Bell number out of range");
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

}  // namespace histq
