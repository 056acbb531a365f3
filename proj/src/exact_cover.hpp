#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace tilecensus {

// Algorithm X on dancing links. Every item is primary; the solver always
// branches on the item with the fewest remaining options, ties broken by the
// lowest item index, so the first solution found is deterministic.
class ExactCover {
public:
    explicit ExactCover(std::size_t items);

    // Items must be distinct and in range.
    void add_option(const std::vector<std::uint32_t>& items);

    struct Result {
        std::optional<std::vector<std::size_t>> solution;  // option indices
        std::uint64_t nodes = 0;
        bool exhausted = false;  // node cap hit before the search finished
    };

    Result solve(std::uint64_t node_cap);

private:
    struct Node {
        std::uint32_t left, right, up, down, column;
        std::uint32_t option;
    };

    void cover(std::uint32_t c);
    void uncover(std::uint32_t c);

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> sizes_;
    std::size_t items_;
    std::size_t options_ = 0;
};

}  // namespace tilecensus
