#include "svi/taxonomy.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "svi/errors.hpp"
#include "svi/jsonl.hpp"

namespace svi {

std::string to_string(Abstraction a) {
  switch (a) {
    case Abstraction::Pillar:
      return "Pillar";
    case Abstraction::Class:
      return "Class";
    case Abstraction::Base:
      return "Base";
    case Abstraction::Variant:
      return "Variant";
    case Abstraction::Category:
      return "Category";
  }
  return "Base";
}

Abstraction abstraction_from_string(const std::string& text) {
  std::string lower(text.size(), '\0');
  std::transform(text.begin(), text.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (lower == "pillar") return Abstraction::Pillar;
  if (lower == "class") return Abstraction::Class;
  if (lower == "base") return Abstraction::Base;
  if (lower == "variant") return Abstraction::Variant;
  if (lower == "category") return Abstraction::Category;
  throw Error(ErrorKind::Data, "unknown abstraction level \"" + text + "\"");
}

std::string DistanceMatrix::to_csv() const {
  std::ostringstream out;
  out << "cwe";
  for (auto id : labels) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i];
    for (std::size_t j = 0; j < labels.size(); ++j) {
      out << ',';
      if (d[i][j].has_value()) {
        out << *d[i][j];
      } else {
        out << "inf";
      }
    }
    out << '\n';
  }
  return out.str();
}

CweTaxonomy CweTaxonomy::load(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Data,
                "taxonomy file " + path.string() + ": " + e.what());
  }

  std::vector<CweNode> nodes;
  for (const auto& jn : doc.value("nodes", Json::array())) {
    CweNode node;
    node.id = jn.at("id").get<std::uint32_t>();
    node.description = jn.at("description").get<std::string>();
    node.abstraction =
        abstraction_from_string(jn.at("abstraction").get<std::string>());
    if (node.description.empty()) {
      throw Error(ErrorKind::Data,
                  "empty description for CWE-" + std::to_string(node.id));
    }
    nodes.push_back(std::move(node));
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& je : doc.value("child_of", Json::array())) {
    if (!je.is_array() || je.size() != 2) {
      throw Error(ErrorKind::Data, "child_of entries must be [child, parent]");
    }
    edges.emplace_back(je[0].get<std::uint32_t>(),
                       je[1].get<std::uint32_t>());
  }
  return make(std::move(nodes), std::move(edges));
}

CweTaxonomy CweTaxonomy::make(
    std::vector<CweNode> nodes,
    std::vector<std::pair<std::uint32_t, std::uint32_t>> child_of) {
  CweTaxonomy t;
  for (auto& n : nodes) {
    const auto id = n.id;
    if (!t.nodes_.emplace(id, std::move(n)).second) {
      throw DuplicateNodeError(id);
    }
  }
  t.child_of_ = std::move(child_of);
  t.validate_and_index();
  return t;
}

void CweTaxonomy::validate_and_index() {
  for (const auto& [child, parent] : child_of_) {
    if (!contains(child) || !contains(parent)) {
      throw DanglingEdgeError(child, parent);
    }
    adjacency_[child].push_back(parent);
    adjacency_[parent].push_back(child);
  }
  for (auto& [id, neighbors] : adjacency_) {
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()),
                    neighbors.end());
  }

  // Cycle check on the directed child->parent relation (DFS, three colors).
  std::map<std::uint32_t, std::vector<std::uint32_t>> parents;
  for (const auto& [child, parent] : child_of_) {
    parents[child].push_back(parent);
  }
  std::map<std::uint32_t, int> color;  // 0 white, 1 grey, 2 black
  for (const auto& [start, _] : nodes_) {
    if (color[start] != 0) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto& ps = parents[id];
      if (next < ps.size()) {
        const auto p = ps[next++];
        if (color[p] == 1) throw CycleDetectedError();
        if (color[p] == 0) {
          color[p] = 1;
          stack.emplace_back(p, 0);
        }
      } else {
        color[id] = 2;
        stack.pop_back();
      }
    }
  }
}

const CweNode& CweTaxonomy::node(std::uint32_t id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw UnknownIdError(id);
  return it->second;
}

const std::string& CweTaxonomy::description(std::uint32_t id) const {
  return node(id).description;
}

Distance CweTaxonomy::distance(std::uint32_t a, std::uint32_t b,
                               bool include_categories) const {
  node(a);
  node(b);
  if (a == b) return 0u;

  auto traversable = [&](std::uint32_t id) {
    return include_categories || id == b ||
           nodes_.at(id).abstraction != Abstraction::Category;
  };

  std::map<std::uint32_t, unsigned> dist;
  dist[a] = 0;
  std::deque<std::uint32_t> queue{a};
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    auto it = adjacency_.find(cur);
    if (it == adjacency_.end()) continue;
    for (auto next : it->second) {
      if (dist.count(next) || !traversable(next)) continue;
      dist[next] = dist[cur] + 1;
      if (next == b) return dist[next];
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

DistanceMatrix CweTaxonomy::distance_matrix(
    const std::vector<std::uint32_t>& labels, bool include_categories) const {
  DistanceMatrix m;
  m.labels = labels;
  m.d.assign(labels.size(),
             std::vector<Distance>(labels.size(), std::nullopt));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    m.d[i][i] = 0u;
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      const auto dij = distance(labels[i], labels[j], include_categories);
      m.d[i][j] = dij;
      m.d[j][i] = dij;
    }
  }
  return m;
}

}  // namespace svi
