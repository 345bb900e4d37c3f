#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace adspread {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Tolerance for the incoming weight-sum constraint.
inline constexpr double kWeightSumTolerance = 1e-9;

enum class NodeKind : std::uint8_t { Real, ProductRoot, MediaChain, SocialGadget };

/// Provenance of a node. Pseudonodes remember which product and which
/// channel element they encode; Real nodes carry only the kind.
struct NodeRole {
  NodeKind kind = NodeKind::Real;
  int product = -1;         // owning product for pseudonodes
  int step = 0;             // media chain position t (ProductRoot is t = 1)
  NodeId src = kNoNode;     // SocialGadget: reference friend u
  NodeId dst = kNoNode;     // SocialGadget: target v

  static NodeRole real() { return {}; }
  static NodeRole product_root(int product) { return {NodeKind::ProductRoot, product, 1}; }
  static NodeRole media_chain(int product, int step) { return {NodeKind::MediaChain, product, step}; }
  static NodeRole social_gadget(int product, NodeId u, NodeId v) {
    return {NodeKind::SocialGadget, product, 0, u, v};
  }

  bool is_pseudo() const noexcept { return kind != NodeKind::Real; }
  friend bool operator==(const NodeRole&, const NodeRole&) = default;
};

std::string to_string(NodeKind kind);

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node = 0;
  double weight = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct Similarity {
  NodeId u = 0;
  NodeId v = 0;
  double value = 0.0;
};

class NetworkBuilder;

/// Immutable weighted directed graph with CSR adjacency in both directions.
///
/// Incoming lists are sorted by source id and outgoing lists by destination
/// id, so every traversal order is deterministic.
class Network {
 public:
  Network() = default;

  std::size_t node_count() const noexcept { return roles_.size(); }
  std::size_t edge_count() const noexcept { return in_src_.size(); }
  /// Nodes with ids below this bound are the Real nodes of the base graph.
  std::size_t real_node_count() const noexcept { return real_count_; }

  /// Non-zero incoming edges of v in ascending source order; throws on bad id.
  std::vector<Neighbor> in_neighbors(NodeId v) const;
  std::vector<Neighbor> out_neighbors(NodeId u) const;

  // Unchecked views for hot loops.
  std::span<const NodeId> in_sources(NodeId v) const noexcept {
    return {in_src_.data() + in_offsets_[v], in_src_.data() + in_offsets_[v + 1]};
  }
  std::span<const double> in_weights(NodeId v) const noexcept {
    return {in_w_.data() + in_offsets_[v], in_w_.data() + in_offsets_[v + 1]};
  }
  std::span<const NodeId> out_targets(NodeId u) const noexcept {
    return {out_dst_.data() + out_offsets_[u], out_dst_.data() + out_offsets_[u + 1]};
  }
  std::span<const double> out_weights(NodeId u) const noexcept {
    return {out_w_.data() + out_offsets_[u], out_w_.data() + out_offsets_[u + 1]};
  }

  double incoming_weight_sum(NodeId v) const;
  /// Weight of edge (u, v), 0 when absent.
  double weight(NodeId u, NodeId v) const;

  const NodeRole& role(NodeId v) const { return roles_.at(v); }
  bool is_real(NodeId v) const { return role(v).kind == NodeKind::Real; }
  /// Construction-time threshold of a pseudonode; NaN for Real nodes.
  double fixed_threshold(NodeId v) const { return fixed_thresholds_.at(v); }

  /// h_uv, looked up in either orientation; 0 when absent.
  double similarity(NodeId u, NodeId v) const;
  /// Similarity entries as given (both orientations may appear if asymmetric).
  const std::vector<Similarity>& similarities() const noexcept { return similarity_list_; }

  /// All edges ordered by (src, dst).
  std::vector<Edge> edges() const;

 private:
  friend class NetworkBuilder;

  std::size_t real_count_ = 0;
  std::vector<NodeRole> roles_;
  std::vector<double> fixed_thresholds_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_src_;
  std::vector<double> in_w_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_dst_;
  std::vector<double> out_w_;
  std::vector<Similarity> similarity_list_;
  std::unordered_map<std::uint64_t, double> similarity_;
};

/// Accumulates nodes, edges and similarities, then freezes them into a Network.
/// Structural problems other than duplicate edges are left for validate().
class NetworkBuilder {
 public:
  NetworkBuilder() = default;
  explicit NetworkBuilder(std::size_t real_nodes);
  /// Starts from an existing network (used for augmentation).
  explicit NetworkBuilder(const Network& base);

  NodeId add_node(NodeRole role = NodeRole::real(),
                  double fixed_threshold = std::numeric_limits<double>::quiet_NaN());
  /// Grows the node table with Real nodes so that `id` exists.
  void ensure_real_node(NodeId id);
  void add_edge(NodeId src, NodeId dst, double weight);
  void set_similarity(NodeId u, NodeId v, double value);

  std::size_t node_count() const noexcept { return roles_.size(); }

  /// Throws Error(Validation) on duplicate edges or dangling endpoints.
  Network build() const;

 private:
  std::vector<NodeRole> roles_;
  std::vector<double> fixed_thresholds_;
  std::vector<Edge> edges_;
  std::vector<Similarity> similarities_;
};

struct Violation {
  std::string rule;     // short machine-readable rule name
  std::string message;  // names the offending node or edge
};

/// Checks the weight-sum, weight-range, self-loop and similarity-symmetry rules.
std::vector<Violation> validate(const Network& net);

/// Reads an edge list and an optional similarity list (empty path = none).
Network load_network(const std::filesystem::path& edge_file,
                     const std::filesystem::path& similarity_file = {});

/// Writes edges (and, if a path is given, similarities) in the load format.
void save_network(const Network& net, const std::filesystem::path& edge_file,
                  const std::filesystem::path& similarity_file = {});

/// Shortest round-trip decimal representation.
std::string format_number(double value);

}  // namespace adspread
