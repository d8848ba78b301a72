#include "usf/base_graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

namespace usf {

const char* to_string(BaseKind kind) {
    switch (kind) {
        case BaseKind::Path2: return "path2";
        case BaseKind::Cycle: return "cycle";
        case BaseKind::Complete: return "complete";
        case BaseKind::Custom: return "custom";
    }
    return "unknown";
}

BaseGraph::BaseGraph(BaseKind kind, std::uint32_t size, std::string label,
                     std::vector<std::vector<std::uint32_t>> lists)
    : kind_(kind), size_(size), label_(std::move(label)) {
    if (size == 0) throw GraphError("base graph must have at least one vertex");
    degree_ = static_cast<std::uint32_t>(lists[0].size());
    adjacency_.reserve(static_cast<std::size_t>(size) * degree_);
    for (std::uint32_t h = 0; h < size; ++h) {
        auto& l = lists[h];
        std::sort(l.begin(), l.end());
        if (std::adjacent_find(l.begin(), l.end()) != l.end())
            throw GraphError("base graph has a repeated edge at vertex " + std::to_string(h));
        if (std::find(l.begin(), l.end(), h) != l.end())
            throw GraphError("base graph has a loop at vertex " + std::to_string(h));
        if (l.size() != degree_)
            throw GraphError("base graph is not regular: vertex " + std::to_string(h) + " has degree " +
                             std::to_string(l.size()) + ", expected " + std::to_string(degree_));
        adjacency_.insert(adjacency_.end(), l.begin(), l.end());
    }

    std::vector<bool> seen(size, false);
    std::queue<std::uint32_t> q;
    q.push(0);
    seen[0] = true;
    std::uint32_t reached = 1;
    while (!q.empty()) {
        auto h = q.front();
        q.pop();
        for (auto g : neighbors(h)) {
            if (!seen[g]) {
                seen[g] = true;
                ++reached;
                q.push(g);
            }
        }
    }
    if (reached != size) throw GraphError("base graph is disconnected");
}

BaseGraph BaseGraph::path2() {
    return BaseGraph(BaseKind::Path2, 2, "path2", {{1}, {0}});
}

BaseGraph BaseGraph::cycle(std::uint32_t length) {
    if (length < 3) throw GraphError("cycle length must be at least 3");
    std::vector<std::vector<std::uint32_t>> lists(length);
    for (std::uint32_t h = 0; h < length; ++h)
        lists[h] = {(h + length - 1) % length, (h + 1) % length};
    return BaseGraph(BaseKind::Cycle, length, "cycle:" + std::to_string(length), std::move(lists));
}

BaseGraph BaseGraph::complete(std::uint32_t m) {
    if (m < 1) throw GraphError("complete graph needs at least one vertex");
    std::vector<std::vector<std::uint32_t>> lists(m);
    for (std::uint32_t h = 0; h < m; ++h) {
        lists[h].reserve(m - 1);
        for (std::uint32_t g = 0; g < m; ++g)
            if (g != h) lists[h].push_back(g);
    }
    return BaseGraph(BaseKind::Complete, m, "complete:" + std::to_string(m), std::move(lists));
}

BaseGraph BaseGraph::from_edges(std::uint32_t size,
                                const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                std::string label) {
    if (size == 0) throw GraphError("custom base graph is empty");
    std::vector<std::vector<std::uint32_t>> lists(size);
    for (auto [u, v] : edges) {
        if (u >= size || v >= size) throw GraphError("edge endpoint out of range");
        lists[u].push_back(v);
        lists[v].push_back(u);
    }
    return BaseGraph(BaseKind::Custom, size, std::move(label), std::move(lists));
}

BaseGraph BaseGraph::from_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open edge list '" + path + "'");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::uint32_t max_vertex = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long u = 0, v = 0;
        if (!(ls >> u)) continue;
        if (!(ls >> v) || u < 0 || v < 0)
            throw GraphError("malformed edge on line " + std::to_string(line_no) + " of '" + path + "'");
        edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
        max_vertex = std::max({max_vertex, static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
    }
    if (edges.empty()) throw GraphError("edge list '" + path + "' has no edges");
    return from_edges(max_vertex + 1, edges, "custom:" + path);
}

bool BaseGraph::adjacent(std::uint32_t a, std::uint32_t b) const {
    auto n = neighbors(a);
    return std::binary_search(n.begin(), n.end(), b);
}

namespace {

std::uint32_t parse_count(const std::string& spec, std::size_t from) {
    std::uint32_t value = 0;
    const char* first = spec.data() + from;
    const char* last = spec.data() + spec.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        throw GraphError("malformed base spec '" + spec + "'");
    return value;
}

}  // namespace

BaseGraph parse_base_spec(const std::string& spec) {
    if (spec == "path2") return BaseGraph::path2();
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw GraphError("unknown base spec '" + spec + "'");
    auto head = spec.substr(0, colon);
    if (head == "cycle") return BaseGraph::cycle(parse_count(spec, colon + 1));
    if (head == "complete") return BaseGraph::complete(parse_count(spec, colon + 1));
    if (head == "custom") return BaseGraph::from_edge_list_file(spec.substr(colon + 1));
    throw GraphError("unknown base spec '" + spec + "'");
}

}  // namespace usf
