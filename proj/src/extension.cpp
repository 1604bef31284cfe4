#include "entropometer/extension.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "entropometer/error.hpp"

namespace entropometer {

AccessibilityGraph::AccessibilityGraph(std::vector<Node> nodes,
                                       std::vector<std::pair<std::string, std::string>> edges)
    : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!by_id_.emplace(nodes_[i].id, i).second) {
            throw InvalidModel("duplicate graph node '" + nodes_[i].id + "'");
        }
    }
    out_.assign(nodes_.size(), {});
    for (const auto& [from, to] : edges) {
        const auto u = index(from);
        const auto v = index(to);
        if (std::find(out_[u].begin(), out_[u].end(), v) == out_[u].end()) out_[u].push_back(v);
    }

    const auto n = nodes_.size();
    reach_.assign(n, std::vector<bool>(n, false));
    std::vector<std::size_t> frontier;
    for (std::size_t s = 0; s < n; ++s) {
        auto& seen = reach_[s];
        frontier.assign(out_[s].begin(), out_[s].end());
        for (auto v : frontier) seen[v] = true;
        while (!frontier.empty()) {
            const auto u = frontier.back();
            frontier.pop_back();
            for (auto v : out_[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    frontier.push_back(v);
                }
            }
        }
    }
}

std::size_t AccessibilityGraph::index(const std::string& id) const {
    const auto it = by_id_.find(id);
    if (it == by_id_.end()) throw InvalidModel("unknown graph node '" + id + "'");
    return it->second;
}

std::string GraphIssue::describe() const {
    switch (kind) {
        case Kind::sigma_decrease:
            return "entropy decreases along a path from '" + from + "' to '" + to + "'";
        case Kind::no_sigma_predecessor:
            return "node '" + from + "' is not reachable from any Sigma node";
        case Kind::no_sigma_successor:
            return "node '" + from + "' reaches no Sigma node";
    }
    return {};
}

std::vector<GraphIssue> validate(const AccessibilityGraph& g) {
    std::vector<GraphIssue> issues;
    const auto n = g.size();
    for (std::size_t u = 0; u < n; ++u) {
        if (g.in_sigma(u)) {
            for (std::size_t v = 0; v < n; ++v) {
                if (g.in_sigma(v) && g.path_exists(u, v) &&
                    *g.node(v).entropy < *g.node(u).entropy) {
                    issues.push_back({GraphIssue::Kind::sigma_decrease, g.node(u).id, g.node(v).id});
                }
            }
            continue;
        }
        bool has_pred = false;
        bool has_succ = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (!g.in_sigma(v)) continue;
            has_pred = has_pred || g.path_exists(v, u);
            has_succ = has_succ || g.path_exists(u, v);
        }
        if (!has_pred) issues.push_back({GraphIssue::Kind::no_sigma_predecessor, g.node(u).id, {}});
        if (!has_succ) issues.push_back({GraphIssue::Kind::no_sigma_successor, g.node(u).id, {}});
    }
    return issues;
}

namespace extension {

EntropyRangeResult entropy_range(const AccessibilityGraph& g, std::size_t node) {
    if (g.in_sigma(node)) {
        const double s = *g.node(node).entropy;
        return {s, s};
    }
    double low = -std::numeric_limits<double>::infinity();
    double high = std::numeric_limits<double>::infinity();
    bool has_pred = false;
    bool has_succ = false;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!g.in_sigma(v)) continue;
        const double s = *g.node(v).entropy;
        if (g.path_exists(v, node)) {
            has_pred = true;
            low = std::max(low, s);
        }
        if (g.path_exists(node, v)) {
            has_succ = true;
            high = std::min(high, s);
        }
    }
    if (!has_pred || !has_succ) {
        throw InvalidModel("node '" + g.node(node).id + "' has no Sigma " +
                           (has_pred ? "successor" : "predecessor") +
                           "; its entropy range is undefined");
    }
    return {low, high};
}

EntropyRangeResult entropy_range(const AccessibilityGraph& g, const std::string& node) {
    return entropy_range(g, g.index(node));
}

NondecreaseVerdict assert_nondecrease(const AccessibilityGraph& g, const std::string& a1,
                                      const std::string& a2) {
    const auto i1 = g.index(a1);
    const auto i2 = g.index(a2);
    const auto r1 = entropy_range(g, i1);
    const auto r2 = entropy_range(g, i2);
    if (!(r2.low > r1.high)) return NondecreaseVerdict::not_determined;
    if (g.path_exists(i2, i1)) {
        std::ostringstream msg;
        msg << "graph is inconsistent with entropy non-decrease: S_low('" << a2 << "') = " << r2.low
            << " > S_high('" << a1 << "') = " << r1.high << " yet a weight process from '" << a2
            << "' to '" << a1 << "' exists";
        throw InconsistentGraph(msg.str());
    }
    return NondecreaseVerdict::forbidden;
}

AccessibilityGraph product_graph(const AccessibilityGraph& ga, const AccessibilityGraph& gb) {
    const auto na = ga.size();
    const auto nb = gb.size();
    std::vector<AccessibilityGraph::Node> nodes;
    nodes.reserve(na * nb);
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
            std::optional<double> s;
            if (ga.in_sigma(a) && gb.in_sigma(b)) s = *ga.node(a).entropy + *gb.node(b).entropy;
            nodes.push_back({ga.node(a).id + "|" + gb.node(b).id, s});
        }
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
            for (std::size_t a2 = 0; a2 < na; ++a2) {
                if (a2 != a && !ga.path_exists(a, a2)) continue;
                for (std::size_t b2 = 0; b2 < nb; ++b2) {
                    if (b2 != b && !gb.path_exists(b, b2)) continue;
                    if (a2 == a && b2 == b) continue;
                    edges.emplace_back(nodes[a * nb + b].id, nodes[a2 * nb + b2].id);
                }
            }
        }
    }
    return AccessibilityGraph(std::move(nodes), std::move(edges));
}

AdditivityVerdict check_range_additivity(const AccessibilityGraph& ga,
                                         const AccessibilityGraph& gb,
                                         const AccessibilityGraph& product,
                                         const std::string& node_a, const std::string& node_b) {
    const auto ra = entropy_range(ga, node_a);
    const auto rb = entropy_range(gb, node_b);
    AdditivityVerdict verdict;
    verdict.joint = entropy_range(product, node_a + "|" + node_b);
    verdict.bound = {ra.low + rb.low, ra.high + rb.high};
    verdict.contained = verdict.joint.low >= verdict.bound.low &&
                        verdict.joint.high <= verdict.bound.high;
    return verdict;
}

AdditivityVerdict check_range_additivity(const AccessibilityGraph& ga,
                                         const AccessibilityGraph& gb, const std::string& node_a,
                                         const std::string& node_b) {
    return check_range_additivity(ga, gb, product_graph(ga, gb), node_a, node_b);
}

}  // namespace extension

namespace {

std::string id_of(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError("graph node ids must be strings or integers");
}

}  // namespace

AccessibilityGraph graph_from_json(const nlohmann::json& j) {
    try {
        std::vector<AccessibilityGraph::Node> nodes;
        for (const auto& item : j.at("nodes")) {
            AccessibilityGraph::Node node{id_of(item.at("id")), std::nullopt};
            if (item.contains("S") && !item.at("S").is_null()) {
                if (!item.at("S").is_number()) throw ParseError("node S must be a number or null");
                node.entropy = item.at("S").get<double>();
            }
            nodes.push_back(std::move(node));
        }
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edges must be [from, to] pairs");
            edges.emplace_back(id_of(e[0]), id_of(e[1]));
        }
        return AccessibilityGraph(std::move(nodes), std::move(edges));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("graph: ") + ex.what());
    }
}

nlohmann::json graph_to_json(const AccessibilityGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : g.nodes()) {
        nlohmann::json item{{"id", node.id}};
        item["S"] = node.entropy ? nlohmann::json(*node.entropy) : nlohmann::json(nullptr);
        nodes.push_back(std::move(item));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t u = 0; u < g.size(); ++u) {
        for (auto v : g.successors()[u]) edges.push_back({g.node(u).id, g.node(v).id});
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

AccessibilityGraph load_graph(const std::filesystem::path& path, bool validated) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
    auto g = graph_from_json(j);
    if (validated) {
        const auto issues = validate(g);
        if (!issues.empty()) throw InconsistentGraph(path.string() + ": " + issues.front().describe());
    }
    return g;
}

}  // namespace entropometer
