#include "exact_cover.hpp"

#include <limits>

namespace tilecensus {

// Node 0 is the root; nodes 1..items are column headers.
ExactCover::ExactCover(std::size_t items) : sizes_(items + 1, 0), items_(items) {
    nodes_.resize(items + 1);
    for (std::uint32_t i = 0; i <= items; ++i) {
        auto& h = nodes_[i];
        h.left = i == 0 ? static_cast<std::uint32_t>(items) : i - 1;
        h.right = i == items ? 0 : i + 1;
        h.up = h.down = h.column = i;
        h.option = std::numeric_limits<std::uint32_t>::max();
    }
}

void ExactCover::add_option(const std::vector<std::uint32_t>& items) {
    std::uint32_t first = 0;
    for (std::uint32_t item : items) {
        std::uint32_t col = item + 1;
        auto idx = static_cast<std::uint32_t>(nodes_.size());
        Node n{};
        n.column = col;
        n.option = static_cast<std::uint32_t>(options_);
        n.down = col;
        n.up = nodes_[col].up;
        if (first == 0) {
            first = idx;
            n.left = n.right = idx;
        } else {
            n.right = first;
            n.left = nodes_[first].left;
        }
        nodes_.push_back(n);
        nodes_[nodes_[idx].up].down = idx;
        nodes_[col].up = idx;
        nodes_[nodes_[idx].left].right = idx;
        nodes_[first].left = idx;
        ++sizes_[col];
    }
    ++options_;
}

void ExactCover::cover(std::uint32_t c) {
    nodes_[nodes_[c].right].left = nodes_[c].left;
    nodes_[nodes_[c].left].right = nodes_[c].right;
    for (std::uint32_t i = nodes_[c].down; i != c; i = nodes_[i].down) {
        for (std::uint32_t j = nodes_[i].right; j != i; j = nodes_[j].right) {
            nodes_[nodes_[j].down].up = nodes_[j].up;
            nodes_[nodes_[j].up].down = nodes_[j].down;
            --sizes_[nodes_[j].column];
        }
    }
}

void ExactCover::uncover(std::uint32_t c) {
    for (std::uint32_t i = nodes_[c].up; i != c; i = nodes_[i].up) {
        for (std::uint32_t j = nodes_[i].left; j != i; j = nodes_[j].left) {
            ++sizes_[nodes_[j].column];
            nodes_[nodes_[j].down].up = j;
            nodes_[nodes_[j].up].down = j;
        }
    }
    nodes_[nodes_[c].right].left = c;
    nodes_[nodes_[c].left].right = c;
}

ExactCover::Result ExactCover::solve(std::uint64_t node_cap) {
    // Iterative so that deep searches (many small placements) cannot
    // overflow the call stack.
    Result r;
    std::vector<std::uint32_t> columns;  // branching column per level
    std::vector<std::uint32_t> rows;     // row chosen at each level
    auto cover_row = [&](std::uint32_t row) {
        for (std::uint32_t j = nodes_[row].right; j != row; j = nodes_[j].right) cover(nodes_[j].column);
    };
    auto uncover_row = [&](std::uint32_t row) {
        for (std::uint32_t j = nodes_[row].left; j != row; j = nodes_[j].left) uncover(nodes_[j].column);
    };

    bool descend = true;
    std::uint32_t row = 0;
    for (;;) {
        if (descend) {
            if (nodes_[0].right == 0) {
                std::vector<std::size_t> opts;
                for (std::uint32_t chosen : rows) opts.push_back(nodes_[chosen].option);
                r.solution = std::move(opts);
                break;
            }
            std::uint32_t best = 0;
            std::uint32_t best_size = std::numeric_limits<std::uint32_t>::max();
            for (std::uint32_t c = nodes_[0].right; c != 0; c = nodes_[c].right) {
                if (sizes_[c] < best_size) {
                    best = c;
                    best_size = sizes_[c];
                    if (best_size == 0) break;
                }
            }
            if (best_size == 0) {
                descend = false;
                if (rows.empty()) break;
                row = rows.back();
                rows.pop_back();
                uncover_row(row);
                row = nodes_[row].down;
            } else {
                cover(best);
                columns.push_back(best);
                row = nodes_[best].down;
            }
        }
        std::uint32_t col = columns.back();
        if (row == col) {
            uncover(col);
            columns.pop_back();
            if (rows.empty()) break;
            row = rows.back();
            rows.pop_back();
            uncover_row(row);
            row = nodes_[row].down;
            descend = false;
            continue;
        }
        if (++r.nodes > node_cap) {
            r.exhausted = true;
            break;
        }
        rows.push_back(row);
        cover_row(row);
        descend = true;
    }
    // Restore the links so the matrix could be searched again.
    if (!r.solution || r.exhausted) {
        while (!columns.empty()) {
            if (rows.size() == columns.size()) {
                uncover_row(rows.back());
                rows.pop_back();
            }
            uncover(columns.back());
            columns.pop_back();
        }
    }
    return r;
}

}  // namespace tilecensus
