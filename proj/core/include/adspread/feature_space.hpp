#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <numeric>
#include <span>
#include <vector>

#include "adspread/error.hpp"
#include "adspread/random.hpp"

namespace adspread {

/// Two cosines closer than this are treated as a purchase tie.
inline constexpr double kCosineTieTolerance = 1e-12;

/// A product as a unit-norm, non-negative feature vector. One component is
/// the designated null feature; it behaves like any other component.
struct Product {
  int id = 0;
  std::vector<double> features;
  std::size_t null_index = 0;

  std::size_t dimension() const noexcept { return features.size(); }
};

/// Scales `raw` to unit Euclidean norm. Throws Error(Config) for an all-zero
/// vector, a negative component, no components or a bad null index.
Product normalize_product(std::span<const double> raw, std::size_t null_index, int id = 0);

/// The competing products of one run. Ids are dense (0..size-1) and all
/// products share one feature dimension.
class ProductSet {
 public:
  ProductSet() = default;
  explicit ProductSet(std::vector<Product> products);

  std::size_t size() const noexcept { return products_.size(); }
  bool empty() const noexcept { return products_.empty(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const Product& operator[](std::size_t id) const { return products_[id]; }
  const Product& at(std::size_t id) const;
  std::span<const Product> items() const noexcept { return products_; }
  auto begin() const noexcept { return products_.begin(); }
  auto end() const noexcept { return products_.end(); }

  /// Row-major product matrix (size() x dimension()) for hot loops.
  std::span<const double> flat() const noexcept { return flat_; }

 private:
  std::vector<Product> products_;
  std::vector<double> flat_;
  std::size_t dimension_ = 0;
};

struct LoadedProducts {
  ProductSet products;
  std::vector<double> scale_factors;  // 1 / ||raw|| per product id
};

/// Reads `<id> <f values> null=<index>` lines. Ids must be 0..P-1.
LoadedProducts load_products(const std::filesystem::path& path);

/// Writes the unit vectors back in the product file format.
std::string format_products(const ProductSet& products);

inline double norm(std::span<const double> a) {
  return std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
}

/// Angle between an aggregate vector and a product, in [0, pi].
double angular_distance(std::span<const double> aggregate, const Product& product);

/// Index of the product with least angular distance. Candidates whose cosine
/// is within kCosineTieTolerance of the best are tied; one of them is picked
/// uniformly with `rng`. Throws Error(Config) for a zero aggregate.
template <typename Rng>
std::size_t choose_product(std::span<const double> aggregate, const ProductSet& products, Rng& rng);

/// Like choose_product but reports the tied set instead of breaking the tie.
/// Returns the number of tied candidates written to `tied` (front-aligned).
std::size_t best_products(std::span<const double> aggregate, const ProductSet& products,
                          std::span<std::size_t> tied);

template <typename Rng>
std::size_t choose_product(std::span<const double> aggregate, const ProductSet& products, Rng& rng) {
  if (products.empty()) throw Error(ErrorKind::Config, "choose_product: no products");
  std::size_t stack_buf[16];
  std::vector<std::size_t> heap_buf;
  std::span<std::size_t> tied(stack_buf);
  if (products.size() > std::size(stack_buf)) {
    heap_buf.resize(products.size());
    tied = heap_buf;
  }
  const std::size_t count = best_products(aggregate, products, tied);
  if (count == 1) return tied[0];
  return tied[uniform_index(rng, count)];
}

}  // namespace adspread
