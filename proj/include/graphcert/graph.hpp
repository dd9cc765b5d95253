#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace graphcert {

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;  // stored with smaller id first

inline Edge make_edge(Vertex a, Vertex b) {
  if (a == b) throw validation_error("self-loop at vertex " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

/// Simple undirected graph over integer vertex ids.
/// Vertices are kept sorted; edges are canonicalized (smaller id first) and
/// deduplicated.
class Graph {
 public:
  Graph() = default;

  Graph(std::vector<Vertex> vertices, std::vector<Edge> edges) {
    std::sort(vertices.begin(), vertices.end());
    for (std::size_t i = 1; i < vertices.size(); ++i)
      if (vertices[i] == vertices[i - 1])
        throw validation_error("duplicate vertex " + std::to_string(vertices[i]));
    verts_ = std::move(vertices);
    for (auto& e : edges) {
      Edge c = make_edge(e.first, e.second);
      if (!has_vertex(c.first) || !has_vertex(c.second))
        throw validation_error("edge endpoint not a declared vertex");
      edges_.push_back(c);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adj_.assign(verts_.size(), {});
    for (auto& e : edges_) {
      adj_[index(e.first)].push_back(e.second);
      adj_[index(e.second)].push_back(e.first);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  const std::vector<Vertex>& vertices() const { return verts_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_vertices() const { return verts_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool has_vertex(Vertex v) const {
    return std::binary_search(verts_.begin(), verts_.end(), v);
  }

  bool has_edge(Vertex a, Vertex b) const {
    if (a == b) return false;
    Edge c = make_edge(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), c);
  }

  /// Dense index of a vertex in the sorted vertex list.
  std::size_t index(Vertex v) const {
    auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
    if (it == verts_.end() || *it != v)
      throw validation_error("unknown vertex " + std::to_string(v));
    return static_cast<std::size_t>(it - verts_.begin());
  }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[index(v)]; }
  std::size_t degree(Vertex v) const { return adj_[index(v)].size(); }

  /// Vertices at graph distance 1..radius from u, excluding u itself.
  std::vector<Vertex> neighborhood(Vertex u, int radius) const {
    std::vector<Vertex> out;
    if (radius <= 0) {
      index(u);  // validates
      return out;
    }
    std::map<Vertex, int> dist{{u, 0}};
    std::deque<Vertex> q{u};
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      if (dist[v] == radius) continue;
      for (Vertex w : neighbors(v))
        if (!dist.count(w)) {
          dist[w] = dist[v] + 1;
          out.push_back(w);
          q.push_back(w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// BFS distances from u; unreachable vertices get -1.
  std::vector<int> distances_from(Vertex u) const {
    std::vector<int> dist(verts_.size(), -1);
    dist[index(u)] = 0;
    std::deque<Vertex> q{u};
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      for (Vertex w : neighbors(v))
        if (dist[index(w)] < 0) {
          dist[index(w)] = dist[index(v)] + 1;
          q.push_back(w);
        }
    }
    return dist;
  }

  int distance(Vertex a, Vertex b) const { return distances_from(a)[index(b)]; }

  bool connected() const {
    if (verts_.empty()) return true;
    auto d = distances_from(verts_[0]);
    return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
  }

 private:
  std::vector<Vertex> verts_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
};

inline Graph build_graph(std::vector<Vertex> vertices, std::vector<Edge> edges) {
  return Graph(std::move(vertices), std::move(edges));
}

/// Smallest induced odd cycle, as the lexicographically least canonical vertex
/// list (starts at its minimum vertex, second element smaller than last).
/// Returns nullopt when the graph has no induced odd cycle.
inline std::optional<std::vector<Vertex>> find_odd_cycle(const Graph& g) {
  const auto& vs = g.vertices();
  std::size_t n = vs.size();
  for (std::size_t len = 3; len <= n; len += 2) {
    std::optional<std::vector<Vertex>> best;
    std::vector<Vertex> path;
    std::set<Vertex> on_path;

    std::function<void()> grow = [&]() {
      if (best &&
          std::lexicographical_compare(best->begin(), best->end(), path.begin(),
                                       path.end()))
        return;  // any extension stays lexicographically worse
      if (path.size() == len) {
        if (!best || path < *best) best = path;
        return;
      }
      bool closing = (path.size() + 1 == len);
      for (Vertex w : g.neighbors(path.back())) {
        if (on_path.count(w) || w < path.front()) continue;
        if (closing) {
          if (!g.has_edge(w, path.front())) continue;
          if (w < path[1]) continue;  // canonical direction
          bool chord = false;
          for (std::size_t i = 1; i + 1 < path.size(); ++i)
            if (g.has_edge(path[i], w)) chord = true;
          if (chord) continue;
        } else {
          bool chord = false;
          for (std::size_t i = 0; i + 1 < path.size(); ++i)
            if (g.has_edge(path[i], w)) chord = true;
          if (chord) continue;
        }
        path.push_back(w);
        on_path.insert(w);
        grow();
        on_path.erase(w);
        path.pop_back();
      }
    };

    for (Vertex v : vs) {
      path = {v};
      on_path = {v};
      grow();
    }
    if (best) return best;
  }
  return std::nullopt;
}

struct Star {
  Vertex center;
  std::vector<Vertex> leaves;  // pairwise non-adjacent neighbors of center
};

/// Center with >= 2 pairwise non-adjacent neighbors. Ties broken by max
/// degree then min id; leaves chosen greedily by ascending id.
inline std::optional<Star> find_induced_star(const Graph& g) {
  std::optional<Star> best;
  for (Vertex c : g.vertices()) {
    const auto& nb = g.neighbors(c);
    std::vector<Vertex> leaves;
    for (Vertex w : nb) {
      bool indep = std::none_of(leaves.begin(), leaves.end(),
                                [&](Vertex l) { return g.has_edge(l, w); });
      if (indep) leaves.push_back(w);
    }
    if (leaves.size() < 2) continue;
    if (!best || g.degree(c) > g.degree(best->center) ||
        (g.degree(c) == g.degree(best->center) && c < best->center))
      best = Star{c, leaves};
  }
  return best;
}

struct Line3 {
  Vertex left, center, right;
};

/// Induced path on three vertices, smallest (center, left, right) ids.
inline std::optional<Line3> find_line_of_three(const Graph& g) {
  for (Vertex c : g.vertices()) {
    const auto& nb = g.neighbors(c);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!g.has_edge(nb[i], nb[j])) return Line3{nb[i], c, nb[j]};
  }
  return std::nullopt;
}

}  // namespace graphcert
