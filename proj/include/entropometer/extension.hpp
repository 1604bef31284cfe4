#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace entropometer {

/// Labeled states joined by "a weight process exists from u to v" edges.
/// Nodes with an entropy value form the set Sigma; the rest only receive an
/// entropy range. Immutable after construction.
class AccessibilityGraph {
public:
    struct Node {
        std::string id;
        std::optional<double> entropy;
    };

    /// Structural checks only: unique ids, edges between known nodes.
    /// Throws InvalidModel otherwise.
    AccessibilityGraph(std::vector<Node> nodes, std::vector<std::pair<std::string, std::string>> edges);

    std::size_t size() const noexcept { return nodes_.size(); }
    const Node& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<std::vector<std::size_t>>& successors() const noexcept { return out_; }

    /// Throws InvalidModel for an unknown id.
    std::size_t index(const std::string& id) const;
    bool contains(const std::string& id) const { return by_id_.count(id) != 0; }
    bool in_sigma(std::size_t i) const { return nodes_[i].entropy.has_value(); }

    /// reachable(u)[v]: a path of one or more edges leads from u to v.
    const std::vector<std::vector<bool>>& reachability() const noexcept { return reach_; }
    bool path_exists(std::size_t from, std::size_t to) const { return reach_[from][to]; }

private:
    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<bool>> reach_;
};

struct GraphIssue {
    enum class Kind { sigma_decrease, no_sigma_predecessor, no_sigma_successor };
    Kind kind;
    std::string from;
    std::string to;
    std::string describe() const;
};

/// Entropy never decreases along paths between Sigma nodes, and every node
/// outside Sigma is reachable from Sigma and reaches Sigma.
std::vector<GraphIssue> validate(const AccessibilityGraph& g);

struct EntropyRangeResult {
    double low = 0.0;
    double high = 0.0;
};

enum class NondecreaseVerdict { forbidden, not_determined };

namespace extension {

/// [max S(u) over Sigma nodes u reaching `node`, min S(v) over Sigma nodes
/// v reached from `node`]; (S, S) for Sigma nodes. Throws InvalidModel when
/// the node has no Sigma predecessor or successor.
EntropyRangeResult entropy_range(const AccessibilityGraph& g, std::size_t node);
EntropyRangeResult entropy_range(const AccessibilityGraph& g, const std::string& node);

/// Whether ranges alone forbid a weight process from a2 to a1 (low(a2) >
/// high(a1)). Throws InconsistentGraph when they do and the graph still
/// contains a path from a2 to a1.
NondecreaseVerdict assert_nondecrease(const AccessibilityGraph& g, const std::string& a1,
                                      const std::string& a2);

/// Product graph of two systems: node (a,b) has id "a|b", Sigma = Sigma_A x
/// Sigma_B with additive entropies, and an edge (a,b)->(a',b') whenever each
/// component stays put or has a path in its own graph.
AccessibilityGraph product_graph(const AccessibilityGraph& ga, const AccessibilityGraph& gb);

struct AdditivityVerdict {
    EntropyRangeResult joint;
    EntropyRangeResult bound;  // [lowA + lowB, highA + highB]
    bool contained = false;
};

AdditivityVerdict check_range_additivity(const AccessibilityGraph& ga,
                                         const AccessibilityGraph& gb, const std::string& node_a,
                                         const std::string& node_b);

/// Same check on an already-built product graph.
AdditivityVerdict check_range_additivity(const AccessibilityGraph& ga,
                                         const AccessibilityGraph& gb,
                                         const AccessibilityGraph& product,
                                         const std::string& node_a, const std::string& node_b);

}  // namespace extension

// {"nodes": [{"id": ..., "S": number|null}], "edges": [[u, v], ...]}
AccessibilityGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const AccessibilityGraph& g);

/// Parses and, when `validated`, throws InconsistentGraph on the first issue.
AccessibilityGraph load_graph(const std::filesystem::path& path, bool validated = true);

}  // namespace entropometer
