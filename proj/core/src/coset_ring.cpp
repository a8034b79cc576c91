#include "quasicomb/coset_ring.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace quasicomb {

namespace {

struct VecLess {
  bool operator()(const Vec& a, const Vec& b) const { return lex_less(a, b); }
};

struct CosetLess {
  bool operator()(const Coset& a, const Coset& b) const { return coset_less(a, b); }
};

bool evaluate(const CosetExpression& e, const std::function<bool(const Coset&)>& leaf_value) {
  using Op = CosetExpression::Op;
  switch (e.op()) {
    case Op::Leaf:
      return leaf_value(e.coset());
    case Op::Union:
      return std::any_of(e.args().begin(), e.args().end(),
                         [&](const CosetExpression& a) { return evaluate(a, leaf_value); });
    case Op::Intersection:
      return std::all_of(e.args().begin(), e.args().end(),
                         [&](const CosetExpression& a) { return evaluate(a, leaf_value); });
    case Op::Difference: {
      if (!evaluate(e.args().front(), leaf_value)) return false;
      for (std::size_t i = 1; i < e.args().size(); ++i)
        if (evaluate(e.args()[i], leaf_value)) return false;
      return true;
    }
  }
  return false;
}

int index_of(const std::vector<Coset>& v, const Coset& c) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == c) return static_cast<int>(i);
  return -1;
}

using Combo = std::map<Coset, long, CosetLess>;

void add_into(Combo& acc, const Combo& x, long sign) {
  for (const auto& [c, m] : x) {
    long& slot = acc.try_emplace(c, 0).first->second;
    slot += sign * m;
    if (slot == 0) acc.erase(c);
  }
}

Combo product(const Combo& a, const Combo& b) {
  Combo out;
  for (const auto& [ca, ma] : a)
    for (const auto& [cb, mb] : b) {
      auto c = intersect(ca, cb);
      if (!c) continue;
      long& slot = out.try_emplace(*c, 0).first->second;
      slot += ma * mb;
      if (slot == 0) out.erase(*c);
    }
  return out;
}

Combo union_combo(const Combo& a, const Combo& b) {
  Combo out = a;
  add_into(out, b, 1);
  add_into(out, product(a, b), -1);
  return out;
}

Combo combo_of(const CosetExpression& e) {
  using Op = CosetExpression::Op;
  switch (e.op()) {
    case Op::Leaf:
      return Combo{{e.coset(), 1}};
    case Op::Union: {
      Combo acc = combo_of(e.args().front());
      for (std::size_t i = 1; i < e.args().size(); ++i) acc = union_combo(acc, combo_of(e.args()[i]));
      return acc;
    }
    case Op::Intersection: {
      Combo acc = combo_of(e.args().front());
      for (std::size_t i = 1; i < e.args().size(); ++i) acc = product(acc, combo_of(e.args()[i]));
      return acc;
    }
    case Op::Difference: {
      Combo a = combo_of(e.args().front());
      if (e.args().size() == 1) return a;
      Combo removed = combo_of(e.args()[1]);
      for (std::size_t i = 2; i < e.args().size(); ++i)
        removed = union_combo(removed, combo_of(e.args()[i]));
      add_into(a, product(a, removed), -1);
      return a;
    }
  }
  return {};
}

void require_exact_leaves(const std::vector<Coset>& leaves) {
  for (const auto& c : leaves)
    if (!c.is_exact())
      throw IncommensurableLeaves("coset algebra needs rational leaves; got numeric leaf " +
                                  to_string(c.offset()));
}

}  // namespace

CosetExpression CosetExpression::leaf(Coset coset) {
  CosetExpression e;
  e.op_ = Op::Leaf;
  e.dim_ = coset.dim();
  e.leaf_.push_back(std::move(coset));
  return e;
}

CosetExpression CosetExpression::make(Op op, std::vector<CosetExpression> args) {
  if (op == Op::Leaf) throw std::invalid_argument("use CosetExpression::leaf for leaves");
  if (args.empty()) throw std::invalid_argument("coset expression node needs arguments");
  CosetExpression e;
  e.op_ = op;
  e.dim_ = args.front().dim();
  for (const auto& a : args) check_dim(e.dim_, a.dim(), "coset expression");
  e.args_ = std::move(args);
  return e;
}

CosetExpression CosetExpression::difference(CosetExpression a,
                                            std::vector<CosetExpression> removed) {
  removed.insert(removed.begin(), std::move(a));
  return make(Op::Difference, std::move(removed));
}

std::vector<Coset> CosetExpression::leaves() const {
  std::vector<Coset> out;
  std::function<void(const CosetExpression&)> walk = [&](const CosetExpression& e) {
    if (e.op() == Op::Leaf) {
      if (index_of(out, e.coset()) < 0) out.push_back(e.coset());
      return;
    }
    for (const auto& a : e.args()) walk(a);
  };
  walk(*this);
  return out;
}

bool membership(const CosetExpression& expr, const Point& p) {
  check_dim(expr.dim(), static_cast<int>(p.size()), "membership");
  return evaluate(expr, [&](const Coset& c) { return c.contains(p); });
}

long NormalizedSystem::indicator(const Point& p) const {
  check_dim(dim, static_cast<int>(p.size()), "indicator");
  long n = 0;
  for (const auto& c : full_rank_cosets)
    if (c.contains(p)) ++n;
  for (const auto& r : residue)
    if (r.coset.contains(p)) n += r.multiplicity;
  return n;
}

NormalizedSystem normalize(const CosetExpression& expr) {
  const int d = expr.dim();
  std::vector<Coset> leaves = expr.leaves();
  require_exact_leaves(leaves);

  std::vector<Coset> full;
  std::vector<Coset> low;
  for (auto& c : leaves) (c.lattice().is_full_rank() ? full : low).push_back(c);

  NormalizedSystem out;
  out.dim = d;

  // Common refinement M and its classes inside the full-rank leaves.
  std::vector<Coset> classes;
  std::optional<Lattice> common;
  if (!full.empty()) {
    Lattice m = full.front().lattice();
    for (std::size_t i = 1; i < full.size(); ++i) m = intersect(m, full[i].lattice());
    std::map<Vec, int, VecLess> seen;
    for (const auto& leaf : full) {
      for (const auto& rep : coset_representatives(leaf.lattice(), m)) {
        Coset c(m, vec_add(leaf.offset(), rep));
        if (seen.emplace(c.offset(), static_cast<int>(classes.size())).second)
          classes.push_back(std::move(c));
      }
    }
    common = m;
  }

  // Full-rank leaf memberships per class (constant on each class).
  std::vector<std::vector<char>> inside(classes.size(), std::vector<char>(full.size(), 0));
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t i = 0; i < full.size(); ++i)
      inside[c][i] = full[i].contains(classes[c].offset()) ? 1 : 0;

  // E(class, U): expression value on points of `class` lying in exactly the
  // lower-rank leaves of U. class == -1 stands for points outside every
  // full-rank leaf.
  const std::size_t nlow = low.size();
  const std::size_t nsub = std::size_t{1} << nlow;
  auto value = [&](long cls, std::size_t mask) -> long {
    return evaluate(expr, [&](const Coset& leaf) {
             int fi = index_of(full, leaf);
             if (fi >= 0) return cls >= 0 && inside[static_cast<std::size_t>(cls)][fi] != 0;
             int li = index_of(low, leaf);
             return ((mask >> li) & 1U) != 0;
           })
               ? 1
               : 0;
  };

  // Generic points: classes whose value is 1 with no lower-rank leaf involved.
  std::vector<char> selected(classes.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c) selected[c] = value(static_cast<long>(c), 0) ? 1 : 0;

  if (common) {
    // Merge complete classes into cosets of leaf lattices, coarsest first.
    std::vector<Lattice> candidates;
    for (const auto& leaf : full)
      if (std::none_of(candidates.begin(), candidates.end(),
                       [&](const Lattice& l) { return l == leaf.lattice(); }))
        candidates.push_back(leaf.lattice());
    if (std::none_of(candidates.begin(), candidates.end(),
                     [&](const Lattice& l) { return l == *common; }))
      candidates.push_back(*common);
    std::stable_sort(candidates.begin(), candidates.end(), [](const Lattice& a, const Lattice& b) {
      if (a.det_abs() != b.det_abs()) return a.det_abs() < b.det_abs();
      return lex_less(a.basis().data, b.basis().data);
    });
    std::vector<char> left = selected;
    for (const auto& lat : candidates) {
      const long need = index_in(*common, lat).get_si();
      std::map<Vec, std::vector<std::size_t>, VecLess> groups;
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (left[c]) groups[reduce_offset(lat, classes[c].offset())].push_back(c);
      for (auto& [off, members] : groups) {
        if (static_cast<long>(members.size()) != need) continue;
        out.full_rank_cosets.emplace_back(lat, off);
        for (auto c : members) left[c] = 0;
      }
    }
    std::sort(out.full_rank_cosets.begin(), out.full_rank_cosets.end(), coset_less);
  }

  // Residue by Möbius inversion over sets S of lower-rank leaves:
  //   E(C, T) = Σ_{S ⊆ T} g(S, C),  g(S, C) = Σ_{U ⊆ S} (-1)^{|S - U|} E(C, U).
  // Points outside every class are handled through [outside] = 1 - Σ [class].
  std::map<Coset, long, CosetLess> residue;
  auto add_residue = [&](const Coset& c, long m) {
    if (m == 0) return;
    long& slot = residue.try_emplace(c, 0).first->second;
    slot += m;
  };
  auto g = [&](long cls, std::size_t s) {
    long acc = 0;
    for (std::size_t u = s;; u = (u - 1) & s) {
      int parity = __builtin_popcountll(s & ~u) & 1;
      acc += (parity ? -1 : 1) * value(cls, u);
      if (u == 0) break;
    }
    return acc;
  };
  for (std::size_t s = 1; s < nsub; ++s) {
    std::optional<Coset> rs;
    bool empty = false;
    for (std::size_t i = 0; i < nlow && !empty; ++i) {
      if (!((s >> i) & 1U)) continue;
      if (!rs) {
        rs = low[i];
      } else {
        rs = intersect(*rs, low[i]);
        if (!rs) empty = true;
      }
    }
    if (empty || !rs) continue;
    const long g_out = g(-1, s);
    add_residue(*rs, g_out);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      long coef = g(static_cast<long>(c), s) - g_out;
      if (coef == 0) continue;
      auto piece = intersect(*rs, classes[c]);
      if (piece) add_residue(*piece, coef);
    }
  }
  for (const auto& [c, m] : residue) {
    if (m == 0) continue;
    if (c.lattice().is_full_rank())
      throw std::logic_error("normalize: full-rank piece left in residue");
    out.residue.push_back(ResidueEntry{c, m});
  }
  return out;
}

std::vector<std::pair<Coset, long>> comb_coefficients(const CosetExpression& expr) {
  require_exact_leaves(expr.leaves());
  Combo c = combo_of(expr);
  return {c.begin(), c.end()};
}

}  // namespace quasicomb
