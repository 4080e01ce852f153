#include "netboost/pair_table.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "length_graph.hpp"
#include "netboost/error.hpp"

namespace netboost {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum Side : std::uint8_t { kNeither = 0, kNearU = 1, kNearV = 2 };

bool at_most(double a, double b) { return a < b || lengths_equal(a, b); }

/// sigma_sx * sigma_xt / sigma_st when x lies on a shortest s-t path.
inline double share(double dsx, double ssx, double dxt, double sxt, double dst, double sst) {
  if (sst <= 0.0 || ssx <= 0.0 || sxt <= 0.0) return 0.0;
  return lengths_equal(dsx + dxt, dst) ? ssx * sxt / sst : 0.0;
}

/// Folds a route of length `len` carrying `count` paths into (dist, count).
inline void merge_route(double& dist, double& count, double len, double paths) {
  if (lengths_equal(len, dist)) {
    count += paths;
  } else if (len < dist) {
    dist = len;
    count = paths;
  }
}

}  // namespace

PairTable::PairTable(Network net, DistanceTransform transform, unsigned threads)
    : net_(std::move(net)), transform_(transform), n_(net_.node_count()) {
  dist_.resize(n_ * n_);
  sigma_.resize(n_ * n_);
  const auto graph = detail::LengthGraph::from(net_, transform_);
  auto sink = [this](std::uint32_t s, std::span<const double> dist, std::span<const double> sigma) {
    std::memcpy(dist_.data() + s * n_, dist.data(), n_ * sizeof(double));
    std::memcpy(sigma_.data() + s * n_, sigma.data(), n_ * sizeof(double));
  };
  scores_ = BetweennessScores(detail::accumulate_betweenness(graph, threads, sink));
}

bool PairTable::supports(NodeId target, EdgeEdit edit) const {
  if (!net_.contains(target) || !net_.contains(edit.u) || target == edit.u || edit.increment == 0) {
    return false;
  }
  const auto old_weight = net_.weight(target, edit.u);
  if (!old_weight) return true;
  return edge_length(*old_weight + edit.increment, transform_) < edge_length(*old_weight, transform_);
}

std::vector<double> PairTable::scores_after_edit(NodeId target, EdgeEdit edit,
                                                 std::span<const NodeId> nodes) const {
  if (!supports(target, edit)) {
    throw Error(ErrorCode::Internal, "pair table only rescores edits that shorten an edge");
  }
  for (auto x : nodes) {
    if (!net_.contains(x)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(x));
  }
  const std::size_t n = n_;
  const auto old_weight = net_.weight(target, edit.u);
  const double old_len = old_weight ? edge_length(*old_weight, transform_) : kInf;
  const bool had_edge = old_weight.has_value();
  const double len = edge_length(old_weight.value_or(0) + edit.increment, transform_);

  const std::size_t vi = target - 1;
  const std::size_t ui = edit.u - 1;
  const double* du = dist_.data() + ui * n;
  const double* su = sigma_.data() + ui * n;
  const double* dv = dist_.data() + vi * n;
  const double* sv = sigma_.data() + vi * n;

  std::vector<std::uint8_t> side(n, kNeither);
  std::vector<std::uint32_t> near_u;
  std::vector<std::uint32_t> near_v;
  for (std::size_t x = 0; x < n; ++x) {
    if (at_most(du[x] + len, dv[x])) {
      side[x] = kNearU;
      near_u.push_back(static_cast<std::uint32_t>(x));
    } else if (at_most(dv[x] + len, du[x])) {
      side[x] = kNearV;
      near_v.push_back(static_cast<std::uint32_t>(x));
    }
  }

  std::vector<double> result;
  result.reserve(nodes.size());
  for (auto x : nodes) result.push_back(scores_[x]);
  if (near_u.empty() || near_v.empty()) return result;

  // Distance and count between a and b after the edit, from old table rows.
  // dab/sab are the old values for the pair.
  auto updated = [&](std::size_t a, std::size_t b, double dab, double sab) {
    double d = dab;
    double c = sab;
    if (had_edge) {
      if (lengths_equal(du[a] + old_len + dv[b], dab)) c -= su[a] * sv[b];
      if (lengths_equal(dv[a] + old_len + du[b], dab)) c -= sv[a] * su[b];
      if (c < 0.5) {
        d = kInf;
        c = 0.0;
      }
    }
    if (side[a] == kNearU && side[b] == kNearV) merge_route(d, c, du[a] + len + dv[b], su[a] * sv[b]);
    if (side[a] == kNearV && side[b] == kNearU) merge_route(d, c, dv[a] + len + du[b], sv[a] * su[b]);
    return std::pair{d, c};
  };

  // Columns over near_v gathered once so the inner loop reads contiguous memory.
  const std::size_t wn = near_v.size();
  std::vector<double> dv_w(wn), sv_w(wn);
  for (std::size_t j = 0; j < wn; ++j) {
    dv_w[j] = dv[near_v[j]];
    sv_w[j] = sv[near_v[j]];
  }

  struct Focus {
    std::size_t x;
    const double* dx;   // old row of x
    const double* sx;
    std::vector<double> old_d_w, old_s_w, new_d_w, new_s_w;  // x to near_v[j]
    std::vector<double> new_d, new_s;                         // x to s, indexed by node
    double delta = 0.0;
  };
  std::vector<Focus> focus;
  focus.reserve(nodes.size());
  for (auto id : nodes) {
    Focus f;
    f.x = id - 1;
    f.dx = dist_.data() + f.x * n;
    f.sx = sigma_.data() + f.x * n;
    f.new_d.assign(n, kInf);
    f.new_s.assign(n, 0.0);
    for (auto s : near_u) {
      if (s == f.x) continue;
      std::tie(f.new_d[s], f.new_s[s]) = updated(s, f.x, f.dx[s], f.sx[s]);
    }
    f.old_d_w.resize(wn);
    f.old_s_w.resize(wn);
    f.new_d_w.resize(wn);
    f.new_s_w.resize(wn);
    for (std::size_t j = 0; j < wn; ++j) {
      const auto t = near_v[j];
      f.old_d_w[j] = f.dx[t];
      f.old_s_w[j] = f.sx[t];
      if (t == f.x) {
        f.new_d_w[j] = kInf;
        f.new_s_w[j] = 0.0;
      } else {
        std::tie(f.new_d_w[j], f.new_s_w[j]) = updated(t, f.x, f.dx[t], f.sx[t]);
      }
    }
    focus.push_back(std::move(f));
  }

  std::vector<std::uint32_t> changed;
  std::vector<double> new_dst, new_sst;
  changed.reserve(wn);
  new_dst.reserve(wn);
  new_sst.reserve(wn);
  for (auto s : near_u) {
    const double* ds = dist_.data() + s * n;
    const double* ss = sigma_.data() + s * n;
    const double dus = du[s] + len;
    const double sus = su[s];
    // Pair (s, t) with s near u and t near v: the only new route is s..u-v..t,
    // and the only old route through the edge that can be tight is the same way
    // round. When the new route is strictly longer than the old distance, the
    // old edge was not tight either, so the pair keeps all its shortest paths.
    changed.clear();
    new_dst.clear();
    new_sst.clear();
    for (std::size_t j = 0; j < wn; ++j) {
      const auto t = near_v[j];
      const double route = dus + dv_w[j];
      double d = ds[t];
      if (route > d && !lengths_equal(route, d)) continue;
      double c = ss[t];
      if (had_edge) {
        if (lengths_equal(du[s] + old_len + dv_w[j], d)) c -= sus * sv_w[j];
        if (c < 0.5) {
          d = kInf;
          c = 0.0;
        }
      }
      merge_route(d, c, route, sus * sv_w[j]);
      changed.push_back(static_cast<std::uint32_t>(j));
      new_dst.push_back(d);
      new_sst.push_back(c);
    }
    if (changed.empty()) continue;
    for (auto& f : focus) {
      if (s == f.x) continue;
      const double old_dsx = f.dx[s];
      const double old_ssx = f.sx[s];
      const double new_dsx = f.new_d[s];
      const double new_ssx = f.new_s[s];
      double delta = 0.0;
      for (std::size_t k = 0; k < changed.size(); ++k) {
        const auto j = changed[k];
        const auto t = near_v[j];
        if (t == f.x) continue;
        const double before = share(old_dsx, old_ssx, f.old_d_w[j], f.old_s_w[j], ds[t], ss[t]);
        const double after = share(new_dsx, new_ssx, f.new_d_w[j], f.new_s_w[j], new_dst[k], new_sst[k]);
        delta += after - before;
      }
      f.delta += delta;
    }
  }

  for (std::size_t i = 0; i < focus.size(); ++i) {
    result[i] = std::max(0.0, result[i] + focus[i].delta);
  }
  return result;
}

}  // namespace netboost
