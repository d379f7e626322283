#include "sphereconv/decomposition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace sphereconv {

Criterion parse_criterion(const std::string& name) {
  if (name == "distance") return Criterion::Distance;
  if (name == "sdf" || name == "sdf_proxy") return Criterion::SdfProxy;
  throw UsageError("unknown criterion '" + name + "' (expected distance|sdf)");
}

std::string criterion_name(Criterion c) {
  return c == Criterion::Distance ? "distance" : "sdf";
}

namespace {

// Static kd-tree over points answering "how many points lie in the closed
// ball B(x, R)". Whole subtrees inside the ball are counted without descent.
class CountTree {
 public:
  explicit CountTree(std::vector<Vec3> pts) : pts_(std::move(pts)) {
    if (!pts_.empty()) build(0, pts_.size());
  }

  std::size_t count(const Vec3& x, double radius) const {
    if (nodes_.empty()) return 0;
    return count_node(0, x, radius * radius);
  }

 private:
  struct Node {
    Vec3 lo, hi;
    std::size_t begin, end;
    int left = -1, right = -1;
  };

  int build(std::size_t b, std::size_t e) {
    Node n;
    n.begin = b;
    n.end = e;
    n.lo = n.hi = pts_[b];
    for (std::size_t i = b; i < e; ++i) {
      n.lo = n.lo.cwiseMin(pts_[i]);
      n.hi = n.hi.cwiseMax(pts_[i]);
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    if (e - b > 8) {
      int axis;
      (n.hi - n.lo).maxCoeff(&axis);
      const std::size_t mid = (b + e) / 2;
      std::nth_element(pts_.begin() + b, pts_.begin() + mid, pts_.begin() + e,
                       [axis](const Vec3& p, const Vec3& q) { return p[axis] < q[axis]; });
      const int l = build(b, mid);
      const int r = build(mid, e);
      nodes_[id].left = l;
      nodes_[id].right = r;
    }
    return id;
  }

  std::size_t count_node(int id, const Vec3& x, double r2) const {
    const Node& n = nodes_[id];
    const Vec3 nearest = x.cwiseMax(n.lo).cwiseMin(n.hi);
    if ((nearest - x).squaredNorm() > r2) return 0;
    const Vec3 far = (x - n.lo).cwiseAbs().cwiseMax((x - n.hi).cwiseAbs());
    if (far.squaredNorm() <= r2) return n.end - n.begin;
    if (n.left < 0) {
      std::size_t c = 0;
      for (std::size_t i = n.begin; i < n.end; ++i)
        if ((pts_[i] - x).squaredNorm() <= r2) ++c;
      return c;
    }
    return count_node(n.left, x, r2) + count_node(n.right, x, r2);
  }

  std::vector<Vec3> pts_;
  std::vector<Node> nodes_;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::vector<double> compute_distance_field(const UniformGrid& g, const NodeSet& X,
                                           const Solid& s) {
  std::vector<double> r(X.size());
  parallel_for(X.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) r[i] = s.distance_to_boundary(g.node(X[i]));
  });
  return r;
}

std::vector<double> compute_sdf_proxy(const UniformGrid& g, const NodeSet& X,
                                      const std::vector<double>& radii,
                                      const std::vector<Vec3>& boundary_samples,
                                      double delta) {
  if (boundary_samples.empty()) throw UsageError("SDF proxy needs boundary samples");
  if (radii.size() != X.size()) throw UsageError("radius field size mismatch");
  const CountTree tree(boundary_samples);
  std::vector<double> score(X.size());
  parallel_for(X.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (radii[i] <= 0.0) {
        score[i] = 0.0;
        continue;
      }
      score[i] = radii[i] * static_cast<double>(tree.count(g.node(X[i]), radii[i] + delta));
    }
  });
  return score;
}

KnotSet4 greedy_decompose(const UniformGrid& g, const NodeSet& X,
                          const std::vector<double>& radii,
                          const std::vector<double>& score, double mu,
                          std::optional<std::size_t> max_balls, double trim,
                          std::size_t* fallback_picks) {
  if (mu < 0.0 || mu > 1.0) throw UsageError("protrusion factor must lie in [0, 1]");
  if (radii.size() != X.size() || score.size() != X.size())
    throw UsageError("field sizes do not match the node set");
  const std::size_t n = X.size();
  const double tiny = 1e-12 * g.half_extent();

  // Nodes sitting on the boundary cannot carry a ball; they count as covered.
  std::vector<char> covered(n, 0), popped(n, 0);
  std::size_t uncovered = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (radii[i] <= tiny) {
      covered[i] = 1;
      popped[i] = 1;
    } else {
      ++uncovered;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  std::vector<std::int64_t> slot(g.node_count(), -1);
  for (std::size_t i = 0; i < n; ++i) slot[X[i]] = static_cast<std::int64_t>(i);

  std::vector<std::size_t> alive;
  alive.reserve(n);
  for (std::size_t i : order)
    if (!popped[i]) alive.push_back(i);

  std::vector<Vec3> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = g.node(X[i]);

  std::vector<Ball> knots;
  std::size_t cursor = 0, fallbacks = 0;
  while (uncovered > 0) {
    if (max_balls && knots.size() >= *max_balls)
      throw IncompleteDecomposition("ball cap reached before every interior node was covered",
                                    KnotSet4(knots, trim));
    std::size_t pick = n;
    while (cursor < order.size() && popped[order[cursor]]) ++cursor;
    if (cursor < order.size()) {
      pick = order[cursor];
    } else {
      for (std::size_t i : order) {
        if (!covered[i]) {
          pick = i;
          break;
        }
      }
      ++fallbacks;
    }
    const Vec3 x = pos[pick];
    const double r = radii[pick];
    knots.push_back({x, r});
    popped[pick] = 1;

    int xl, xh, yl, yh, zl, zh;
    if (g.axis_range(x.x() - r, x.x() + r, xl, xh) &&
        g.axis_range(x.y() - r, x.y() + r, yl, yh) &&
        g.axis_range(x.z() - r, x.z() + r, zl, zh)) {
      for (int iz = zl; iz <= zh; ++iz)
        for (int iy = yl; iy <= yh; ++iy)
          for (int ix = xl; ix <= xh; ++ix) {
            const std::int64_t s = slot[g.index(ix, iy, iz)];
            if (s < 0 || covered[s]) continue;
            if ((pos[s] - x).norm() <= r) {
              covered[s] = 1;
              --uncovered;
            }
          }
    }
    if (!covered[pick]) {
      covered[pick] = 1;
      --uncovered;
    }

    std::size_t w = 0;
    for (std::size_t a = 0; a < alive.size(); ++a) {
      const std::size_t j = alive[a];
      if (popped[j]) continue;
      const double d = (pos[j] - x).norm();
      if (d - std::abs(r - radii[j]) <= mu * radii[j]) {
        popped[j] = 1;
        continue;
      }
      alive[w++] = j;
    }
    alive.resize(w);
  }
  if (fallback_picks) *fallback_picks = fallbacks;
  return KnotSet4(std::move(knots), trim);
}

KnotSet4 expand(const KnotSet4& a1, double epsilon) {
  std::vector<Ball> out = a1.knots();
  for (auto& b : out) b.radius += epsilon;
  return KnotSet4(std::move(out), a1.trim_height(), a1.weights());
}

KnotSet4 reduce(const KnotSet4& a1, const KnotSet4& a2) {
  if (a1.size() != a2.size()) throw UsageError("reduce: A1 and A2 are not index-aligned");
  const auto& k1 = a1.knots();
  const auto& k2 = a2.knots();
  for (std::size_t i = 0; i < k1.size(); ++i)
    if (k1[i].center != k2[i].center || k2[i].radius < k1[i].radius)
      throw UsageError("reduce: A2 is not an expansion of A1");

  // engulfs[j]: knots whose original ball lies inside expanded ball j.
  const std::size_t n = k1.size();
  std::vector<std::vector<std::uint32_t>> engulfs(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if ((k2[j].center - k1[i].center).norm() <= k2[j].radius - k1[i].radius)
          engulfs[j].push_back(static_cast<std::uint32_t>(i));
  });

  // Greedy cover: repeatedly keep the expanded ball engulfing the most
  // still-unaccounted originals; ties go to the larger radius, then the lower
  // index. Counts only shrink, so stale heap entries are re-scored lazily.
  struct Entry {
    std::size_t count;
    double radius;
    std::size_t index;
    bool operator<(const Entry& o) const {
      if (count != o.count) return count < o.count;
      if (radius != o.radius) return radius < o.radius;
      return index > o.index;
    }
  };
  std::priority_queue<Entry> heap;
  for (std::size_t j = 0; j < n; ++j) heap.push({engulfs[j].size(), k2[j].radius, j});
  std::vector<char> done(n, 0), keep(n, 0);
  std::size_t left = n;
  while (left > 0) {
    Entry top = heap.top();
    heap.pop();
    std::size_t c = 0;
    for (auto i : engulfs[top.index]) c += !done[i];
    if (c != top.count) {
      top.count = c;
      heap.push(top);
      continue;
    }
    keep[top.index] = 1;
    for (auto i : engulfs[top.index]) {
      if (!done[i]) {
        done[i] = 1;
        --left;
      }
    }
  }
  std::vector<Ball> out;
  std::vector<double> w;
  for (std::size_t i = 0; i < k1.size(); ++i) {
    if (!keep[i]) continue;
    out.push_back(k2[i]);
    w.push_back(a2.weights()[i]);
  }
  return KnotSet4(std::move(out), a2.trim_height(), std::move(w));
}

DecompositionResult decompose(const Solid& s, const UniformGrid& g,
                              const DecompositionParams& params) {
  if (g.dimension() != 3) throw UsageError("decomposition needs a 3D grid");
  DecompositionResult res;
  auto& st = res.stats;
  st.m = g.node_count();
  st.mu = params.mu;
  res.epsilon = st.epsilon = g.epsilon();
  const double trim = 2.0 * g.half_extent();

  auto t = std::chrono::steady_clock::now();
  const NodeSet X = interior_nodes(g, s);
  st.interior_nodes = X.size();
  const std::vector<double> radii = compute_distance_field(g, X, s);
  std::vector<double> score = radii;
  if (params.criterion == Criterion::SdfProxy) {
    const std::size_t count =
        params.boundary_sample_count.value_or(static_cast<std::size_t>(
            std::ceil(20.0 * std::pow(static_cast<double>(g.node_count()), 2.0 / 3.0))));
    std::mt19937_64 rng(params.seed);
    std::vector<Vec3> samples(count);
    for (auto& y : samples) y = s.sample_boundary(rng);
    score = compute_sdf_proxy(g, X, radii, samples, 2.0 * g.epsilon());
  }
  st.t0_ms = ms_since(t);

  t = std::chrono::steady_clock::now();
  res.a1 = greedy_decompose(g, X, radii, score, params.mu, params.max_balls, trim,
                            &st.fallback_picks);
  st.t1_ms = ms_since(t);

  t = std::chrono::steady_clock::now();
  res.a2 = expand(res.a1, res.epsilon);
  st.t2_ms = ms_since(t);

  t = std::chrono::steady_clock::now();
  res.a3 = reduce(res.a1, res.a2);
  st.t3_ms = ms_since(t);

  st.n12 = res.a1.size();
  st.n3 = res.a3.size();
  return res;
}

std::string stats_csv_header() { return "m,epsilon,mu,n12,n3,t0_ms,t1_ms,t2_ms,t3_ms"; }

std::string stats_csv_row(const DecompositionStats& st) {
  std::ostringstream os;
  os.precision(9);
  os << st.m << ',' << st.epsilon << ',' << st.mu << ',' << st.n12 << ',' << st.n3 << ','
     << st.t0_ms << ',' << st.t1_ms << ',' << st.t2_ms << ',' << st.t3_ms;
  return os.str();
}

}  // namespace sphereconv
