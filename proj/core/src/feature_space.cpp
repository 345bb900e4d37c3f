#include "adspread/feature_space.hpp"

#include <algorithm>
#include <numbers>

#include <fmt/format.h>

#include "adspread/io.hpp"
#include "adspread/network.hpp"
#include "text_util.hpp"

namespace adspread {

Product normalize_product(std::span<const double> raw, std::size_t null_index, int id) {
  if (raw.empty()) throw Error(ErrorKind::Config, fmt::format("product {}: no features", id));
  if (null_index >= raw.size()) {
    throw Error(ErrorKind::Config,
                fmt::format("product {}: null index {} out of range", id, null_index));
  }
  for (double x : raw) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::Config, fmt::format("product {}: features must be finite and >= 0", id));
    }
  }
  const double n = norm(raw);
  if (!(n > 0.0)) throw Error(ErrorKind::Config, fmt::format("product {}: all-zero feature vector", id));
  Product p;
  p.id = id;
  p.null_index = null_index;
  p.features.reserve(raw.size());
  for (double x : raw) p.features.push_back(x / n);
  return p;
}

ProductSet::ProductSet(std::vector<Product> products) : products_(std::move(products)) {
  std::sort(products_.begin(), products_.end(),
            [](const Product& a, const Product& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < products_.size(); ++i) {
    const auto& p = products_[i];
    if (p.id != static_cast<int>(i)) {
      throw Error(ErrorKind::Config, fmt::format("product ids must be 0..{}, found {}",
                                                 products_.size() - 1, p.id));
    }
    if (i == 0) dimension_ = p.dimension();
    if (p.dimension() != dimension_ || dimension_ == 0) {
      throw Error(ErrorKind::Config,
                  fmt::format("product {} has {} features, expected {}", p.id, p.dimension(), dimension_));
    }
    if (std::abs(norm(p.features) - 1.0) > 1e-12) {
      throw Error(ErrorKind::Config, fmt::format("product {} is not unit norm", p.id));
    }
    if (std::any_of(p.features.begin(), p.features.end(), [](double x) { return !(x >= 0.0); })) {
      throw Error(ErrorKind::Config, fmt::format("product {} has a negative feature", p.id));
    }
    flat_.insert(flat_.end(), p.features.begin(), p.features.end());
  }
}

const Product& ProductSet::at(std::size_t id) const {
  if (id >= products_.size()) throw Error(ErrorKind::Config, fmt::format("unknown product {}", id));
  return products_[id];
}

LoadedProducts load_products(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<Product> products;
  std::vector<std::pair<int, double>> scales;
  detail::for_each_record(text, [&](std::size_t line_no, std::span<const std::string_view> tok) {
    const std::string where = fmt::format("{}:{}", path.string(), line_no);
    if (tok.size() < 3) {
      throw Error(ErrorKind::Parse,
                  fmt::format("{}: expected '<id> <features...> null=<index>'", where));
    }
    const auto id = detail::parse_node_id(tok[0], where);
    const auto null_tok = tok.back();
    if (!null_tok.starts_with("null=")) {
      throw Error(ErrorKind::Parse, fmt::format("{}: last token must be null=<index>, got '{}'", where, null_tok));
    }
    const auto null_index = detail::parse_node_id(null_tok.substr(5), where);
    std::vector<double> raw;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) raw.push_back(detail::parse_real(tok[i], where));
    try {
      products.push_back(normalize_product(raw, null_index, static_cast<int>(id)));
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, fmt::format("{}: {}", where, e.what()));
    }
    scales.emplace_back(static_cast<int>(id), 1.0 / norm(raw));
  });
  if (products.empty()) throw Error(ErrorKind::Parse, fmt::format("{}: no products", path.string()));
  LoadedProducts out{ProductSet(std::move(products)), {}};
  std::sort(scales.begin(), scales.end());
  for (const auto& [id, s] : scales) out.scale_factors.push_back(s);
  return out;
}

std::string format_products(const ProductSet& products) {
  std::string out;
  for (const auto& p : products) {
    out += fmt::format("{}", p.id);
    for (double x : p.features) out += " " + format_number(x);
    out += fmt::format(" null={}\n", p.null_index);
  }
  return out;
}

double angular_distance(std::span<const double> aggregate, const Product& product) {
  if (aggregate.size() != product.dimension()) {
    throw Error(ErrorKind::Config, "angular_distance: dimension mismatch");
  }
  const double n = norm(aggregate);
  if (!(n > 0.0)) throw Error(ErrorKind::Config, "angular_distance: zero aggregate vector");
  const double dot = std::inner_product(aggregate.begin(), aggregate.end(), product.features.begin(), 0.0);
  return std::acos(std::clamp(dot / n, -1.0, 1.0));
}

std::size_t best_products(std::span<const double> aggregate, const ProductSet& products,
                          std::span<std::size_t> tied) {
  const std::size_t f = products.dimension();
  if (aggregate.size() != f) throw Error(ErrorKind::Config, "choose_product: dimension mismatch");
  const double n = norm(aggregate);
  if (!(n > 0.0)) throw Error(ErrorKind::Config, "choose_product: zero aggregate vector");
  const auto flat = products.flat();
  double best = -2.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < products.size(); ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < f; ++k) dot += aggregate[k] * flat[i * f + k];
    const double cosine = dot / n;
    if (cosine > best + kCosineTieTolerance) {
      best = cosine;
      tied[0] = i;
      count = 1;
    } else if (cosine >= best - kCosineTieTolerance) {
      tied[count++] = i;
      best = std::max(best, cosine);
    }
  }
  // A later, slightly larger cosine may have pushed earlier entries out of the band.
  std::size_t kept = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t i = tied[j];
    double dot = 0.0;
    for (std::size_t k = 0; k < f; ++k) dot += aggregate[k] * flat[i * f + k];
    if (dot / n >= best - kCosineTieTolerance) tied[kept++] = i;
  }
  return kept;
}

}  // namespace adspread
