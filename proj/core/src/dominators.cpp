#include "ucalc/dominators.hpp"

#include <functional>

namespace ucalc::vminus {

std::optional<std::string> DomTree::idom(const std::string& l) const {
  auto it = idom_.find(l);
  if (it == idom_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& DomTree::children(const std::string& l) const {
  static const std::vector<std::string> none;
  auto it = children_.find(l);
  return it == children_.end() ? none : it->second;
}

bool DomTree::dominates(const std::string& a, const std::string& b) const {
  if (!reachable(a) || !reachable(b)) return false;
  std::string cur = b;
  for (;;) {
    if (cur == a) return true;
    auto it = idom_.find(cur);
    if (it == idom_.end()) return false;
    cur = it->second;
  }
}

bool DomTree::strictly_dominates(const std::string& a, const std::string& b) const {
  return a != b && dominates(a, b);
}

DomTree compute_dominators(const Function& f) {
  DomTree t;
  if (f.blocks.empty()) return t;
  t.entry_ = f.entry().label;

  std::map<std::string, std::size_t> block_index;
  for (std::size_t i = 0; i < f.blocks.size(); ++i) block_index[f.blocks[i].label] = i;
  const std::size_t n = f.blocks.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& s : successors(f.blocks[i])) {
      auto it = block_index.find(s);
      if (it != block_index.end()) succ[i].push_back(it->second);
    }

  // DFS numbering, 1-based; 0 means unvisited.
  std::vector<std::size_t> dfnum(n, 0), vertex(1, 0), parent(n, 0);
  std::size_t counter = 0;
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    dfnum[v] = ++counter;
    vertex.push_back(v);
    for (std::size_t w : succ[v])
      if (!dfnum[w]) {
        parent[w] = v;
        dfs(w);
      }
  };
  dfs(0);

  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t v = 0; v < n; ++v)
    if (dfnum[v])
      for (std::size_t w : succ[v]) pred[w].push_back(v);

  std::vector<std::size_t> semi(n), idom(n), ancestor(n, n), label(n);
  std::vector<std::vector<std::size_t>> bucket(n);
  for (std::size_t v = 0; v < n; ++v) {
    semi[v] = dfnum[v];
    label[v] = v;
  }
  std::function<void(std::size_t)> compress = [&](std::size_t v) {
    std::size_t a = ancestor[v];
    if (ancestor[a] == n) return;
    compress(a);
    if (semi[label[a]] < semi[label[v]]) label[v] = label[a];
    ancestor[v] = ancestor[a];
  };
  auto eval = [&](std::size_t v) {
    if (ancestor[v] == n) return v;
    compress(v);
    return label[v];
  };

  for (std::size_t i = counter; i >= 2; --i) {
    std::size_t w = vertex[i];
    for (std::size_t v : pred[w]) {
      std::size_t u = eval(v);
      if (semi[u] < semi[w]) semi[w] = semi[u];
    }
    bucket[vertex[semi[w]]].push_back(w);
    ancestor[w] = parent[w];
    for (std::size_t v : bucket[parent[w]]) {
      std::size_t u = eval(v);
      idom[v] = semi[u] < semi[v] ? u : parent[w];
    }
    bucket[parent[w]].clear();
  }
  for (std::size_t i = 2; i <= counter; ++i) {
    std::size_t w = vertex[i];
    if (idom[w] != vertex[semi[w]]) idom[w] = idom[idom[w]];
  }

  for (std::size_t v = 0; v < n; ++v) {
    if (!dfnum[v]) continue;
    const std::string& l = f.blocks[v].label;
    t.index_[l] = t.blocks_.size();
    t.blocks_.push_back(l);
    if (v != 0) t.idom_[l] = f.blocks[idom[v]].label;
  }
  for (const auto& l : t.blocks_) {
    auto it = t.idom_.find(l);
    if (it != t.idom_.end()) t.children_[it->second].push_back(l);
  }
  return t;
}

}  // namespace ucalc::vminus
