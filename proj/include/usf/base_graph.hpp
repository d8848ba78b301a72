#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace usf {

/// Thrown for malformed graph specifications and invalid topology queries.
class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class BaseKind { Path2, Cycle, Complete, Custom };

const char* to_string(BaseKind kind);

/**
 * Finite, connected, regular graph used as the second factor of a product.
 *
 * Adjacency is stored in CSR form with every neighbor list sorted ascending,
 * which fixes the order of base-steps in neighbor enumeration.
 * Vertex-transitivity of custom graphs is NOT checked; callers supplying a
 * custom edge list are responsible for it.
 */
class BaseGraph {
public:
    static BaseGraph path2();
    static BaseGraph cycle(std::uint32_t length);
    /// K_m without loops. K_1 (a single vertex, degree 0) is accepted and
    /// turns a product walk into a pure tree walk.
    static BaseGraph complete(std::uint32_t m);
    /// Validates regularity, connectivity, and the absence of loops and
    /// repeated edges.
    static BaseGraph from_edges(std::uint32_t size,
                                const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                std::string label = "custom");
    /// Reads a `u v` per line, 0-indexed edge list.
    static BaseGraph from_edge_list_file(const std::string& path);

    BaseKind kind() const { return kind_; }
    std::uint32_t size() const { return size_; }
    std::uint32_t degree() const { return degree_; }
    /// The spec string this graph was built from (`cycle:8`, `path2`, ...).
    const std::string& label() const { return label_; }

    std::span<const std::uint32_t> neighbors(std::uint32_t h) const {
        return {adjacency_.data() + static_cast<std::size_t>(h) * degree_, degree_};
    }
    std::uint32_t neighbor(std::uint32_t h, std::uint32_t i) const {
        return adjacency_[static_cast<std::size_t>(h) * degree_ + i];
    }
    bool adjacent(std::uint32_t a, std::uint32_t b) const;

private:
    BaseGraph(BaseKind kind, std::uint32_t size, std::string label,
              std::vector<std::vector<std::uint32_t>> lists);

    BaseKind kind_{};
    std::uint32_t size_ = 0;
    std::uint32_t degree_ = 0;
    std::string label_;
    std::vector<std::uint32_t> adjacency_;
};

/// Parses `path2`, `cycle:<l>`, `complete:<m>`, `custom:<file>`.
BaseGraph parse_base_spec(const std::string& spec);

}  // namespace usf
