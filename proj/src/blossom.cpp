// Maximum-weight perfect matching on general graphs.
//
// Primal-dual Edmonds blossom algorithm in the formulation of Galil ("Efficient
// algorithms for finding maximum matching in graphs", 1986): each stage grows
// alternating trees from all exposed vertices, adjusting duals until an
// augmenting path becomes tight. Cardinality is maximized first, so the
// result is perfect whenever a perfect matching exists; among perfect
// matchings the weight is maximal by complementary slackness.
//
// Conventions: edge k has endpoints 2k (its u side) and 2k+1 (its v side);
// endpoint p belongs to vertex endpoint_[p], and p ^ 1 is the far end.
// Blossom ids are [V, 2V); vertex ids double as trivial blossoms.
// slack(k) = dual[u] + dual[v] - 2 w(k); all S-vertices share dual parity,
// so S-S slacks are even and every dual stays integral.

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "maxtsp/errors.hpp"
#include "maxtsp/matching.hpp"

namespace maxtsp {

WeightedGraph::WeightedGraph(int node_count, std::vector<WeightedEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ < 0) throw InvalidInput("negative node count");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges_.size());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if (e.u < 0 || e.u >= node_count_ || e.v < 0 || e.v >= node_count_) {
      throw InvalidInput("edge " + std::to_string(k) + " has an endpoint out of range");
    }
    if (e.u == e.v) throw InvalidInput("edge " + std::to_string(k) + " is a self-loop");
    if (e.weight > kMaxAbsWeight || e.weight < -kMaxAbsWeight) {
      throw InvalidInput("edge " + std::to_string(k) + " weight out of range");
    }
    pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(pairs.begin(), pairs.end());
  if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) {
    throw InvalidInput("duplicate edge between the same pair of nodes");
  }
}

void check_perfect_matching(const WeightedGraph& g, const Matching& m) {
  std::vector<char> covered(static_cast<std::size_t>(g.node_count()), 0);
  std::int64_t total = 0;
  for (const std::size_t k : m.edges) {
    if (k >= g.edges().size()) throw std::logic_error("matching edge out of range");
    const auto& e = g.edges()[k];
    if (covered[e.u] || covered[e.v]) throw std::logic_error("matching edges share a node");
    covered[e.u] = covered[e.v] = 1;
    total += e.weight;
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    throw std::logic_error("matching is not perfect");
  }
  if (total != m.weight) throw std::logic_error("matching weight mismatch");
}

namespace {

constexpr int kNone = -1;

enum Label : int { kFree = 0, kS = 1, kT = 2, kBreadcrumb = 5 };

class BlossomSolver {
 public:
  explicit BlossomSolver(const WeightedGraph& g)
      : nv_(g.node_count()),
        edges_(g.edges()),
        endpoint_(2 * edges_.size()),
        neighbend_(nv_),
        mate_(nv_, kNone),
        label_(2 * nv_, kFree),
        labelend_(2 * nv_, kNone),
        inblossom_(nv_),
        blossomparent_(2 * nv_, kNone),
        blossomchilds_(2 * nv_),
        blossombase_(2 * nv_, kNone),
        blossomendps_(2 * nv_),
        bestedge_(2 * nv_, kNone),
        blossombestedges_(2 * nv_),
        has_bestedges_(2 * nv_, 0),
        dual_(2 * nv_, 0),
        allowedge_(edges_.size(), 0) {
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      endpoint_[2 * k] = edges_[k].u;
      endpoint_[2 * k + 1] = edges_[k].v;
      neighbend_[edges_[k].u].push_back(static_cast<int>(2 * k + 1));
      neighbend_[edges_[k].v].push_back(static_cast<int>(2 * k));
    }
    std::iota(inblossom_.begin(), inblossom_.end(), 0);
    std::iota(blossombase_.begin(), blossombase_.begin() + nv_, 0);
    for (int b = 2 * nv_ - 1; b >= nv_; --b) unused_.push_back(b);
    std::int64_t maxweight = 0;
    for (const auto& e : edges_) maxweight = std::max(maxweight, e.weight);
    std::fill(dual_.begin(), dual_.begin() + nv_, maxweight);
  }

  void warm_start(const MatchingWarmStart& ws) {
    if (ws.duals.size() != static_cast<std::size_t>(nv_)) {
      throw InvalidInput("warm start: one dual per node required");
    }
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto& e = edges_[k];
      if (ws.duals[e.u] + ws.duals[e.v] - 2 * e.weight < 0) {
        throw InvalidInput("warm start: edge " + std::to_string(k) + " has negative slack");
      }
    }
    std::copy(ws.duals.begin(), ws.duals.end(), dual_.begin());
    for (const std::size_t k : ws.matched_edges) {
      if (k >= edges_.size()) throw InvalidInput("warm start: edge out of range");
      if (slack(static_cast<int>(k)) != 0) {
        throw InvalidInput("warm start: matched edge " + std::to_string(k) + " is not tight");
      }
      const auto& e = edges_[k];
      if (mate_[e.u] != kNone || mate_[e.v] != kNone) {
        throw InvalidInput("warm start: matched edges share a node");
      }
      mate_[e.u] = static_cast<int>(2 * k + 1);
      mate_[e.v] = static_cast<int>(2 * k);
    }
    int parity = -1;
    for (int v = 0; v < nv_; ++v) {
      if (mate_[v] != kNone) continue;
      const int p = static_cast<int>(dual_[v] & 1);
      if (parity >= 0 && p != parity) {
        throw InvalidInput("warm start: exposed nodes have mixed dual parity");
      }
      parity = p;
    }
  }

  void solve() {
    while (run_stage()) {
      // Expand S-blossoms whose dual dropped to zero; they may be rebuilt
      // differently in the next stage.
      for (int b = nv_; b < 2 * nv_; ++b) {
        if (blossomparent_[b] == kNone && blossombase_[b] >= 0 && label_[b] == kS &&
            dual_[b] == 0) {
          expand_blossom(b, true);
        }
      }
    }
  }

  // Mate vertex per node, or kNone.
  std::vector<int> mates() const {
    std::vector<int> out(nv_, kNone);
    for (int v = 0; v < nv_; ++v) {
      if (mate_[v] != kNone) out[v] = endpoint_[mate_[v]];
    }
    return out;
  }

  void dump(std::ostream& os) const {
    os << "blossom duals (doubled units)\n";
    for (int v = 0; v < nv_; ++v) os << "  node " << v << " y=" << dual_[v] << '\n';
    for (int b = nv_; b < 2 * nv_; ++b) {
      if (blossombase_[b] < 0 || blossomparent_[b] != kNone) continue;
      os << "  blossom " << b << " base=" << blossombase_[b] << " z=" << dual_[b]
         << " leaves=";
      for_each_leaf(b, [&](int v) { os << v << ' '; });
      os << '\n';
    }
  }

 private:
  std::int64_t slack(int k) const {
    const auto& e = edges_[k];
    return dual_[e.u] + dual_[e.v] - 2 * e.weight;
  }

  template <class F>
  void for_each_leaf(int b, F&& f) const {
    if (b < nv_) {
      f(b);
      return;
    }
    std::vector<int> stack{b};
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      if (t < nv_) {
        f(t);
        continue;
      }
      const auto& ch = blossomchilds_[t];
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
  }

  void assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = kNone;
    if (t == kS) {
      for_each_leaf(b, [&](int v) { queue_.push_back(v); });
    } else {
      const int base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], kS, mate_[base] ^ 1);
    }
  }

  // Walks up from v and w in alternation. Returns the base of the first
  // common blossom, or kNone when the trees are different (augmenting path).
  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = kNone;
    while (v != kNone || w != kNone) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] = kBreadcrumb;
      if (labelend_[b] == kNone) {
        v = kNone;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != kNone) std::swap(v, w);
    }
    for (const int b : path) label_[b] = kS;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    const int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    const int b = unused_.back();
    unused_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = kNone;
    blossomparent_[bb] = b;
    auto& path = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    label_[b] = kS;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    for_each_leaf(b, [&](int leaf) {
      if (label_[inblossom_[leaf]] == kT) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    });

    // Least-slack edge from the new blossom to each neighbouring S-blossom.
    bestedgeto_.resize(2 * nv_, kNone);
    std::vector<int> touched;
    auto consider = [&](int kk) {
      int i = edges_[kk].u;
      int j = edges_[kk].v;
      if (inblossom_[j] == b) std::swap(i, j);
      const int bj = inblossom_[j];
      if (bj != b && label_[bj] == kS &&
          (bestedgeto_[bj] == kNone || slack(kk) < slack(bestedgeto_[bj]))) {
        if (bestedgeto_[bj] == kNone) touched.push_back(bj);
        bestedgeto_[bj] = kk;
      }
    };
    for (const int child : path) {
      if (!has_bestedges_[child]) {
        for_each_leaf(child, [&](int leaf) {
          for (const int p : neighbend_[leaf]) consider(p / 2);
        });
      } else {
        for (const int kk : blossombestedges_[child]) consider(kk);
      }
      blossombestedges_[child].clear();
      has_bestedges_[child] = 0;
      bestedge_[child] = kNone;
    }
    std::sort(touched.begin(), touched.end());
    auto& best = blossombestedges_[b];
    best.clear();
    for (const int bj : touched) {
      best.push_back(bestedgeto_[bj]);
      bestedgeto_[bj] = kNone;
    }
    has_bestedges_[b] = 1;
    bestedge_[b] = kNone;
    for (const int kk : best) {
      if (bestedge_[b] == kNone || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
    }
  }

  void expand_blossom(int b, bool endstage) {
    for (const int s : blossomchilds_[b]) {
      blossomparent_[s] = kNone;
      if (s < nv_) {
        inblossom_[s] = s;
      } else if (endstage && dual_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for_each_leaf(s, [&](int v) { inblossom_[v] = s; });
      }
    }
    if (!endstage && label_[b] == kT) {
      // Relabel the children along the even path from the entry child to
      // the base; the rest become free or keep T labels from outside.
      const auto& childs = blossomchilds_[b];
      const auto& endps = blossomendps_[b];
      const int len = static_cast<int>(childs.size());
      const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) -
                               childs.begin());
      int jstep;
      int endptrick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      auto at = [len](const std::vector<int>& xs, int idx) {
        return xs[static_cast<std::size_t>(((idx % len) + len) % len)];
      };
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = kFree;
        label_[endpoint_[at(endps, j - endptrick) ^ endptrick ^ 1]] = kFree;
        assign_label(endpoint_[p ^ 1], kT, p);
        allowedge_[at(endps, j - endptrick) / 2] = 1;
        j += jstep;
        p = at(endps, j - endptrick) ^ endptrick;
        allowedge_[p / 2] = 1;
        j += jstep;
      }
      int bv = at(childs, j);
      label_[endpoint_[p ^ 1]] = label_[bv] = kT;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = kNone;
      j += jstep;
      while (at(childs, j) != entrychild) {
        bv = at(childs, j);
        if (label_[bv] == kS) {
          j += jstep;
          continue;
        }
        int found = kNone;
        for_each_leaf(bv, [&](int v) {
          if (found == kNone && label_[v] != kFree) found = v;
        });
        if (found != kNone) {
          label_[found] = kFree;
          label_[endpoint_[mate_[blossombase_[bv]]]] = kFree;
          assign_label(found, kT, labelend_[found]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = kNone;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = kNone;
    blossombestedges_[b].clear();
    has_bestedges_[b] = 0;
    bestedge_[b] = kNone;
    unused_.push_back(b);
  }

  // Swaps matched and unmatched edges along the even path inside b from
  // vertex v to the base, then rotates b so v becomes the new base.
  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nv_) augment_blossom(t, v);
    auto& childs = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    const int len = static_cast<int>(childs.size());
    const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    auto at = [len](const std::vector<int>& xs, int idx) {
      return xs[static_cast<std::size_t>(((idx % len) + len) % len)];
    };
    while (j != 0) {
      j += jstep;
      t = at(childs, j);
      const int p = at(endps, j - endptrick) ^ endptrick;
      if (t >= nv_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = at(childs, j);
      if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs.front()];
  }

  void augment_matching(int k) {
    const std::pair<int, int> sides[2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
    for (auto [s, p] : sides) {
      for (;;) {
        const int bs = inblossom_[s];
        if (bs >= nv_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == kNone) break;
        const int t = endpoint_[labelend_[bs]];
        const int bt = inblossom_[t];
        s = endpoint_[labelend_[bt]];
        const int j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nv_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  // One stage: grow alternating trees until an augmentation happens (returns
  // true) or no augmenting path exists (returns false).
  bool run_stage() {
    std::fill(label_.begin(), label_.end(), kFree);
    std::fill(bestedge_.begin(), bestedge_.end(), kNone);
    for (int b = nv_; b < 2 * nv_; ++b) {
      blossombestedges_[b].clear();
      has_bestedges_[b] = 0;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), 0);
    queue_.clear();
    for (int v = 0; v < nv_; ++v) {
      if (mate_[v] == kNone && label_[inblossom_[v]] == kFree) assign_label(v, kS, kNone);
    }

    for (;;) {
      while (!queue_.empty()) {
        const int v = queue_.back();
        queue_.pop_back();
        for (const int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          std::int64_t kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = 1;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == kFree) {
              assign_label(w, kT, p ^ 1);
            } else if (label_[inblossom_[w]] == kS) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                return true;
              }
            } else if (label_[w] == kFree) {
              label_[w] = kT;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == kS) {
            const int b = inblossom_[v];
            if (bestedge_[b] == kNone || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == kFree) {
            if (bestedge_[w] == kNone || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }

      // Smallest dual change that makes progress:
      //  2: tighten an S-free edge, 3: tighten an S-S edge,
      //  4: zero the dual of a T-blossom (so it can be expanded).
      int deltatype = kNone;
      std::int64_t delta = 0;
      int deltaedge = kNone;
      int deltablossom = kNone;
      for (int v = 0; v < nv_; ++v) {
        if (label_[inblossom_[v]] == kFree && bestedge_[v] != kNone) {
          const std::int64_t d = slack(bestedge_[v]);
          if (deltatype == kNone || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * nv_; ++b) {
        if (blossomparent_[b] == kNone && label_[b] == kS && bestedge_[b] != kNone) {
          const std::int64_t kslack = slack(bestedge_[b]);
          if (kslack % 2 != 0) throw std::logic_error("blossom: odd S-S slack");
          const std::int64_t d = kslack / 2;
          if (deltatype == kNone || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = nv_; b < 2 * nv_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == kNone && label_[b] == kT &&
            (deltatype == kNone || dual_[b] < delta)) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      if (deltatype == kNone) return false;

      for (int v = 0; v < nv_; ++v) {
        const int l = label_[inblossom_[v]];
        if (l == kS) {
          dual_[v] -= delta;
        } else if (l == kT) {
          dual_[v] += delta;
        }
      }
      for (int b = nv_; b < 2 * nv_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == kNone) {
          if (label_[b] == kS) {
            dual_[b] += delta;
          } else if (label_[b] == kT) {
            dual_[b] -= delta;
          }
        }
      }

      if (deltatype == 2) {
        allowedge_[deltaedge] = 1;
        int i = edges_[deltaedge].u;
        if (label_[inblossom_[i]] == kFree) i = edges_[deltaedge].v;
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = 1;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
  }

  const int nv_;
  const std::vector<WeightedEdge>& edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<char> has_bestedges_;
  std::vector<int> bestedgeto_;
  std::vector<int> unused_;
  std::vector<std::int64_t> dual_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

}  // namespace

Matching max_weight_perfect_matching(const WeightedGraph& g,
                                     const MatchingOptions& options) {
  const int n = g.node_count();
  if (n % 2 != 0) {
    throw InvalidInput("perfect matching needs an even node count, got " +
                       std::to_string(n));
  }
  BlossomSolver solver(g);
  if (options.warm_start) solver.warm_start(*options.warm_start);
  solver.solve();
  if (options.debug) solver.dump(*options.debug);

  const auto mates = solver.mates();
  for (int v = 0; v < n; ++v) {
    if (mates[v] < 0) {
      throw InvalidInput("graph has no perfect matching (node " + std::to_string(v) +
                         " cannot be covered)");
    }
  }
  Matching m;
  const auto& edges = g.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (mates[edges[k].u] == edges[k].v) {
      m.edges.push_back(k);
      m.weight += edges[k].weight;
    }
  }
  return m;
}

}  // namespace maxtsp
