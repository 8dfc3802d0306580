#pragma once

#include <cstdint>
#include <vector>

namespace histq {

/// Enumerates the set partitions of {0, ..., n-1} as restricted growth strings
/// a[0] = 0, a[i] <= 1 + max(a[0..i-1]), in lexicographic order.
class SetPartitions {
public:
    explicit SetPartitions(std::size_t n);

    /// Current string; block index of each element.
    [[nodiscard]] const std::vector<std::size_t>& current() const { return rgs_; }
    [[nodiscard]] std::size_t block_count() const;
    /// Advances to the next partition; false once exhausted.
    bool next();

private:
    std::vector<std::size_t> rgs_;
    std::vector<std::size_t> prefix_max_;
};

/// Blocks of a restricted growth string, each sorted ascending, ordered by first element.
[[nodiscard]] std::vector<std::vector<std::size_t>> blocks_of(const std::vector<std::size_t>& rgs);

[[nodiscard]] std::uint64_t bell_number(std::size_t n);

}  // namespace histq
