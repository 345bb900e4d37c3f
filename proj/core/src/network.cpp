#include "adspread/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "adspread/error.hpp"
#include "adspread/io.hpp"
#include "text_util.hpp"

namespace adspread {
namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Real: return "Real";
    case NodeKind::ProductRoot: return "ProductRoot";
    case NodeKind::MediaChain: return "MediaChain";
    case NodeKind::SocialGadget: return "SocialGadget";
  }
  return "Unknown";
}

std::vector<Neighbor> Network::in_neighbors(NodeId v) const {
  if (v >= node_count()) {
    throw Error(ErrorKind::Config,
                fmt::format("node {} out of range (node count {})", v, node_count()));
  }
  std::vector<Neighbor> out;
  const auto src = in_sources(v);
  const auto w = in_weights(v);
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out.push_back({src[i], w[i]});
  return out;
}

std::vector<Neighbor> Network::out_neighbors(NodeId u) const {
  if (u >= node_count()) {
    throw Error(ErrorKind::Config,
                fmt::format("node {} out of range (node count {})", u, node_count()));
  }
  std::vector<Neighbor> out;
  const auto dst = out_targets(u);
  const auto w = out_weights(u);
  out.reserve(dst.size());
  for (std::size_t i = 0; i < dst.size(); ++i) out.push_back({dst[i], w[i]});
  return out;
}

double Network::incoming_weight_sum(NodeId v) const {
  double sum = 0.0;
  for (double w : in_weights(v)) sum += w;
  return sum;
}

double Network::weight(NodeId u, NodeId v) const {
  const auto src = in_sources(v);
  const auto it = std::lower_bound(src.begin(), src.end(), u);
  if (it == src.end() || *it != u) return 0.0;
  return in_weights(v)[static_cast<std::size_t>(it - src.begin())];
}

double Network::similarity(NodeId u, NodeId v) const {
  if (auto it = similarity_.find(pair_key(u, v)); it != similarity_.end()) return it->second;
  if (auto it = similarity_.find(pair_key(v, u)); it != similarity_.end()) return it->second;
  return 0.0;
}

std::vector<Edge> Network::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    const auto dst = out_targets(u);
    const auto w = out_weights(u);
    for (std::size_t i = 0; i < dst.size(); ++i) out.push_back({u, dst[i], w[i]});
  }
  return out;
}

NetworkBuilder::NetworkBuilder(std::size_t real_nodes)
    : roles_(real_nodes), fixed_thresholds_(real_nodes, std::numeric_limits<double>::quiet_NaN()) {}

NetworkBuilder::NetworkBuilder(const Network& base)
    : roles_(base.roles_), fixed_thresholds_(base.fixed_thresholds_), edges_(base.edges()),
      similarities_(base.similarity_list_) {}

NodeId NetworkBuilder::add_node(NodeRole role, double fixed_threshold) {
  roles_.push_back(role);
  fixed_thresholds_.push_back(fixed_threshold);
  return static_cast<NodeId>(roles_.size() - 1);
}

void NetworkBuilder::ensure_real_node(NodeId id) {
  while (roles_.size() <= id) add_node();
}

void NetworkBuilder::add_edge(NodeId src, NodeId dst, double weight) {
  edges_.push_back({src, dst, weight});
}

void NetworkBuilder::set_similarity(NodeId u, NodeId v, double value) {
  similarities_.push_back({u, v, value});
}

Network NetworkBuilder::build() const {
  const std::size_t n = roles_.size();
  Network net;
  net.roles_ = roles_;
  net.fixed_thresholds_ = fixed_thresholds_;
  net.real_count_ = static_cast<std::size_t>(
      std::find_if(roles_.begin(), roles_.end(), [](const NodeRole& r) { return r.is_pseudo(); }) -
      roles_.begin());
  for (std::size_t v = net.real_count_; v < n; ++v) {
    if (!roles_[v].is_pseudo()) {
      throw Error(ErrorKind::Validation,
                  fmt::format("real node {} follows pseudonodes; real ids must come first", v));
    }
  }

  auto sorted = edges_;
  for (const auto& e : sorted) {
    if (e.src >= n || e.dst >= n) {
      throw Error(ErrorKind::Validation,
                  fmt::format("edge ({},{}) references a node outside [0,{})", e.src, e.dst, n));
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.dst, a.src) < std::pair(b.dst, b.src);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].src == sorted[i - 1].src && sorted[i].dst == sorted[i - 1].dst) {
      throw Error(ErrorKind::Validation,
                  fmt::format("duplicate edge ({},{})", sorted[i].src, sorted[i].dst));
    }
  }

  net.in_offsets_.assign(n + 1, 0);
  net.out_offsets_.assign(n + 1, 0);
  for (const auto& e : sorted) {
    ++net.in_offsets_[e.dst + 1];
    ++net.out_offsets_[e.src + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    net.in_offsets_[v + 1] += net.in_offsets_[v];
    net.out_offsets_[v + 1] += net.out_offsets_[v];
  }
  net.in_src_.resize(sorted.size());
  net.in_w_.resize(sorted.size());
  net.out_dst_.resize(sorted.size());
  net.out_w_.resize(sorted.size());
  // Sorted by (dst, src): incoming lists fill in ascending src order.
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    net.in_src_[i] = sorted[i].src;
    net.in_w_[i] = sorted[i].weight;
  }
  std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    net.out_dst_[i] = sorted[i].dst;
    net.out_w_[i] = sorted[i].weight;
  }

  for (const auto& s : similarities_) {
    if (s.u >= n || s.v >= n) {
      throw Error(ErrorKind::Validation,
                  fmt::format("similarity ({},{}) references a node outside [0,{})", s.u, s.v, n));
    }
    if (!net.similarity_.emplace(pair_key(s.u, s.v), s.value).second) {
      throw Error(ErrorKind::Validation, fmt::format("duplicate similarity ({},{})", s.u, s.v));
    }
  }
  net.similarity_list_ = similarities_;
  std::sort(net.similarity_list_.begin(), net.similarity_list_.end(),
            [](const Similarity& a, const Similarity& b) {
              return std::pair(a.u, a.v) < std::pair(b.u, b.v);
            });
  return net;
}

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    const auto src = net.in_sources(v);
    const auto w = net.in_weights(v);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == v) {
        out.push_back({"self-loop", fmt::format("self-loop at {}", v)});
      }
      if (!(w[i] > 0.0) || w[i] > 1.0) {
        out.push_back({"edge-weight", fmt::format("weight {} of edge ({},{}) outside (0,1]",
                                                  format_number(w[i]), src[i], v)});
      }
    }
    const double sum = net.incoming_weight_sum(v);
    if (sum > 1.0 + kWeightSumTolerance) {
      out.push_back({"weight-sum", fmt::format("weight sum {} > 1 at {}", format_number(sum), v)});
    }
  }
  std::unordered_map<std::uint64_t, double> seen;
  for (const auto& s : net.similarities()) {
    if (!(s.value >= 0.0 && s.value <= 1.0)) {
      out.push_back({"similarity-range", fmt::format("similarity {} of ({},{}) outside [0,1]",
                                                     format_number(s.value), s.u, s.v)});
    }
    if (s.u == s.v) {
      out.push_back({"similarity-self", fmt::format("similarity of {} with itself", s.u)});
    }
    seen.emplace((static_cast<std::uint64_t>(s.u) << 32) | s.v, s.value);
  }
  for (const auto& s : net.similarities()) {
    if (s.u >= s.v) continue;
    auto it = seen.find((static_cast<std::uint64_t>(s.v) << 32) | s.u);
    if (it != seen.end() && it->second != s.value) {
      out.push_back({"similarity-symmetry", fmt::format("asymmetric similarity ({},{})", s.u, s.v)});
    }
  }
  return out;
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream msg;
  msg << "network validation failed:";
  for (const auto& v : violations) msg << "\n  " << v.message;
  return msg.str();
}

}  // namespace

Network load_network(const std::filesystem::path& edge_file,
                     const std::filesystem::path& similarity_file) {
  const std::string edge_text = read_text_file(edge_file);
  NetworkBuilder builder;
  std::set<std::pair<NodeId, NodeId>> seen;
  std::size_t edge_lines = 0;
  detail::for_each_record(edge_text, [&](std::size_t line_no, std::span<const std::string_view> tok) {
    const std::string where = fmt::format("{}:{}", edge_file.string(), line_no);
    if (tok.size() != 3) {
      throw Error(ErrorKind::Parse,
                  fmt::format("{}: expected '<src> <dst> <weight>', got {} tokens", where, tok.size()));
    }
    const NodeId src = detail::parse_node_id(tok[0], where);
    const NodeId dst = detail::parse_node_id(tok[1], where);
    const double w = detail::parse_real(tok[2], where);
    if (!seen.emplace(src, dst).second) {
      throw Error(ErrorKind::Validation, fmt::format("{}: duplicate edge ({},{})", where, src, dst));
    }
    builder.ensure_real_node(std::max(src, dst));
    builder.add_edge(src, dst, w);
    ++edge_lines;
  });
  if (edge_lines == 0) {
    throw Error(ErrorKind::Parse, fmt::format("{}: no edges", edge_file.string()));
  }

  if (!similarity_file.empty()) {
    const std::string sim_text = read_text_file(similarity_file);
    std::set<std::pair<NodeId, NodeId>> sim_seen;
    detail::for_each_record(sim_text, [&](std::size_t line_no, std::span<const std::string_view> tok) {
      const std::string where = fmt::format("{}:{}", similarity_file.string(), line_no);
      if (tok.size() != 3) {
        throw Error(ErrorKind::Parse,
                    fmt::format("{}: expected '<u> <v> <h>', got {} tokens", where, tok.size()));
      }
      const NodeId u = detail::parse_node_id(tok[0], where);
      const NodeId v = detail::parse_node_id(tok[1], where);
      const double h = detail::parse_real(tok[2], where);
      if (u >= builder.node_count() || v >= builder.node_count()) {
        throw Error(ErrorKind::Parse,
                    fmt::format("{}: similarity ({},{}) names a node absent from the edge file", where, u, v));
      }
      if (!sim_seen.emplace(u, v).second) {
        throw Error(ErrorKind::Validation, fmt::format("{}: duplicate similarity ({},{})", where, u, v));
      }
      builder.set_similarity(u, v, h);
    });
  }

  Network net = builder.build();
  if (auto violations = validate(net); !violations.empty()) {
    throw Error(ErrorKind::Validation, describe(violations));
  }
  return net;
}

void save_network(const Network& net, const std::filesystem::path& edge_file,
                  const std::filesystem::path& similarity_file) {
  std::string out;
  for (const auto& e : net.edges()) {
    out += fmt::format("{} {} {}\n", e.src, e.dst, format_number(e.weight));
  }
  write_file_atomic(edge_file, out);
  if (!similarity_file.empty()) {
    std::string sims;
    for (const auto& s : net.similarities()) {
      sims += fmt::format("{} {} {}\n", s.u, s.v, format_number(s.value));
    }
    write_file_atomic(similarity_file, sims);
  }
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace adspread
