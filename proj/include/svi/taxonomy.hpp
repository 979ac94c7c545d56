#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace svi {

enum class Abstraction { Pillar, Class, Base, Variant, Category };

std::string to_string(Abstraction a);
Abstraction abstraction_from_string(const std::string& text);

struct CweNode {
  std::uint32_t id = 0;
  std::string description;
  Abstraction abstraction = Abstraction::Base;
};

// Hop count along ChildOf edges taken as undirected; empty = no path.
using Distance = std::optional<unsigned>;

struct DistanceMatrix {
  std::vector<std::uint32_t> labels;
  std::vector<std::vector<Distance>> d;  // square, d[i][j] symmetric

  std::string to_csv() const;  // unreachable cells render as "inf"
};

// Weakness hierarchy: nodes carry a description and abstraction level,
// edges are (child, parent) ChildOf relations forming a DAG. Immutable
// after construction; queries are thread-safe.
class CweTaxonomy {
 public:
  CweTaxonomy() = default;

  // File format: {"nodes": [{"id", "description", "abstraction"}],
  //               "child_of": [[child, parent], ...]}
  static CweTaxonomy load(const std::filesystem::path& path);
  static CweTaxonomy make(std::vector<CweNode> nodes,
                          std::vector<std::pair<std::uint32_t, std::uint32_t>>
                              child_of);

  bool contains(std::uint32_t id) const { return nodes_.count(id) != 0; }
  const CweNode& node(std::uint32_t id) const;
  const std::string& description(std::uint32_t id) const;
  std::size_t size() const { return nodes_.size(); }
  const std::map<std::uint32_t, CweNode>& nodes() const { return nodes_; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const {
    return child_of_;
  }

  // BFS shortest path, edges undirected. Category nodes are organizational,
  // so paths may not pass through them unless include_categories is set
  // (they are still valid endpoints).
  Distance distance(std::uint32_t a, std::uint32_t b,
                    bool include_categories = false) const;

  DistanceMatrix distance_matrix(const std::vector<std::uint32_t>& labels,
                                 bool include_categories = false) const;

 private:
  std::map<std::uint32_t, CweNode> nodes_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> child_of_;
  std::map<std::uint32_t, std::vector<std::uint32_t>> adjacency_;

  void validate_and_index();
};

}  // namespace svi
