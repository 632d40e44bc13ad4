#include "kmchev/hwmod.hpp"
#include "kmchev/errors.hpp"
#include <algorithm>

namespace kmchev {

namespace {

long ksum(const KVec& k) {
  long s = 0;
  for (long x : k) s += x;
  return s;
}

void enumerate_depth(size_t rank, long total, KVec& cur, size_t pos, std::vector<KVec>& out) {
  if (pos + 1 == rank) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (long v = 0; v <= total; ++v) {
    cur[pos] = v;
    enumerate_depth(rank, total - v, cur, pos + 1, out);
  }
}

std::vector<KVec> weights_at_depth(size_t rank, long t) {
  std::vector<KVec> out;
  KVec cur(rank, 0);
  enumerate_depth(rank, t, cur, 0, out);
  return out;
}

Int factorial(long m) {
  Int f(1);
  for (long i = 2; i <= m; ++i) f *= i;
  return f;
}

} // namespace

std::shared_ptr<const TruncatedModule> TruncatedModule::build(const Gcm& A, IVec lambda, long d,
                                                              BuildOptions opts) {
  if (lambda.size() != A.rank()) fail(ErrorCode::UsageError, "lambda rank mismatch");
  for (const Int& l : lambda)
    if (l < 0) fail(ErrorCode::NotDominant, "highest weight must be dominant integral");
  if (d < 0) fail(ErrorCode::UsageError, "negative depth bound");
  auto mod = std::shared_ptr<TruncatedModule>(new TruncatedModule(A, std::move(lambda), d));
  mod->build_all(opts);
  return mod;
}

void TruncatedModule::build_all(const BuildOptions& opts) {
  size_t n = A_.rank();
  // highest weight line
  WeightSpace top;
  top.k = KVec(n, 0);
  top.dim = 1;
  top.basis = {Monomial{}};
  top.parent = {{-1, 0}};
  top.gram = QMat(1, 1);
  top.gram.at(0, 0) = 1;
  top.gram_inv = top.gram;
  top.f_plain.assign(n, QMat());
  top.e_plain.assign(n, QMat(0, 1));
  top.zbasis = top.gram;
  top.zbasis_inv = top.gram;
  top.f_int.assign(n, QMat());
  top.e_int.assign(n, QMat(0, 1));
  total_dim_ = 1;
  spaces_.emplace(top.k, std::move(top));

  for (long t = 1; t <= d_; ++t)
    for (const KVec& k : weights_at_depth(n, t)) build_weight(k, opts);

  // integral rebasing of the e/f action matrices
  for (auto& [k, ws] : spaces_) {
    for (size_t i = 0; i < n; ++i) {
      KVec up = k;
      up[i] += 1;
      if (ksum(up) <= d_) {
        const WeightSpace* child = space(up);
        if (child && child->dim > 0)
          ws.f_int[i] = child->zbasis_inv * ws.f_plain[i] * ws.zbasis;
        else
          ws.f_int[i] = QMat(0, static_cast<size_t>(ws.dim));
      }
      if (k[i] >= 1) {
        KVec dn = k;
        dn[i] -= 1;
        const WeightSpace* par = space(dn);
        if (par && par->dim > 0)
          ws.e_int[i] = par->zbasis_inv * ws.e_plain[i] * ws.zbasis;
        else
          ws.e_int[i] = QMat(0, static_cast<size_t>(ws.dim));
      } else {
        ws.e_int[i] = QMat(0, static_cast<size_t>(ws.dim));
      }
    }
  }
}

void TruncatedModule::build_weight(const KVec& k, const BuildOptions& opts) {
  size_t n = A_.rank();
  struct Cand {
    Monomial mono;
    int dir;
    size_t parent_idx;
  };
  std::vector<Cand> cands;
  for (size_t i = 0; i < n; ++i) {
    if (k[i] == 0) continue;
    KVec pk = k;
    pk[i] -= 1;
    const WeightSpace* p = space(pk);
    if (!p || p->dim == 0) continue;
    for (size_t u = 0; u < p->basis.size(); ++u) {
      Monomial m;
      m.letters.reserve(p->basis[u].letters.size() + 1);
      m.letters.push_back(static_cast<int>(i));
      m.letters.insert(m.letters.end(), p->basis[u].letters.begin(), p->basis[u].letters.end());
      cands.push_back({std::move(m), static_cast<int>(i), u});
    }
  }
  // a weight that ends up with multiplicity zero must still leave 0-row
  // f-action matrices in its parents so chain products keep their shapes
  auto fill_zero_parents = [&]() {
    for (size_t i = 0; i < n; ++i) {
      if (k[i] == 0) continue;
      KVec pk = k;
      pk[i] -= 1;
      auto it = spaces_.find(pk);
      if (it != spaces_.end() && it->second.dim > 0)
        it->second.f_plain[i] = QMat(0, static_cast<size_t>(it->second.dim));
    }
  };
  if (cands.empty()) {
    fill_zero_parents();
    return;
  }
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.mono.letters < b.mono.letters; });

  size_t m = cands.size();
  QMat G(m, m);
  // contravariant Gram over the candidates, assembled blockwise per
  // direction pair: (f_p u, f_q w) = (u, f_q e_p w) + [p==q] <mu_w, p> (u, w)
  for (size_t ip = 0; ip < n; ++ip) {
    if (k[ip] == 0) continue;
    KVec kp = k;
    kp[ip] -= 1;
    const WeightSpace* sp = space(kp);
    if (!sp || sp->dim == 0) continue;
    for (size_t iq = 0; iq < n; ++iq) {
      if (k[iq] == 0) continue;
      KVec kq = k;
      kq[iq] -= 1;
      const WeightSpace* sq = space(kq);
      if (!sq || sq->dim == 0) continue;
      QMat block(static_cast<size_t>(sp->dim), static_cast<size_t>(sq->dim));
      KVec kqe = kq;
      kqe[ip] -= 1;
      const WeightSpace* mid = (kqe[ip] >= 0) ? space(kqe) : nullptr;
      if (mid && mid->dim > 0) {
        // e_p into kq - e_p, then f_q back up into kp
        const QMat& estep = sq->e_plain[ip];
        const QMat& fstep = mid->f_plain[iq];
        block = sp->gram * (fstep * estep);
      }
      if (ip == iq) {
        ModuleWeight mu{lambda_, kq};
        Rat pr{pairing(A_, mu, static_cast<int>(ip))};
        block = block + sq->gram.scaled(pr);
      }
      for (size_t p = 0; p < m; ++p) {
        if (cands[p].dir != static_cast<int>(ip)) continue;
        for (size_t q = 0; q < m; ++q)
          if (cands[q].dir == static_cast<int>(iq))
            G.at(p, q) = block.at(cands[p].parent_idx, cands[q].parent_idx);
      }
    }
  }

  // greedy maximal invertible principal submatrix, in monomial order; the
  // form is positive definite on the quotient so the Schur test is a rank
  // test
  std::vector<size_t> sel;
  QMat Ginv(0, 0);
  for (size_t c = 0; c < m; ++c) {
    QVec v(sel.size());
    for (size_t s = 0; s < sel.size(); ++s) v[s] = G.at(sel[s], c);
    QVec w = Ginv * v;
    Rat schur = G.at(c, c);
    for (size_t s = 0; s < sel.size(); ++s) schur -= v[s] * w[s];
    if (schur == 0) continue;
    if (schur < 0) fail(ErrorCode::Internal, "contravariant form not positive definite");
    size_t s0 = sel.size();
    QMat grown(s0 + 1, s0 + 1);
    Rat inv_s = 1 / schur;
    for (size_t a = 0; a < s0; ++a)
      for (size_t b = 0; b < s0; ++b) grown.at(a, b) = Ginv.at(a, b) + w[a] * w[b] * inv_s;
    for (size_t a = 0; a < s0; ++a) {
      grown.at(a, s0) = -w[a] * inv_s;
      grown.at(s0, a) = -w[a] * inv_s;
    }
    grown.at(s0, s0) = inv_s;
    Ginv = std::move(grown);
    sel.push_back(c);
  }

  if (sel.empty()) { // multiplicity zero
    fill_zero_parents();
    return;
  }

  WeightSpace ws;
  ws.k = k;
  ws.dim = static_cast<long>(sel.size());
  for (size_t s : sel) {
    ws.basis.push_back(cands[s].mono);
    ws.parent.emplace_back(cands[s].dir, cands[s].parent_idx);
  }
  ws.gram = QMat(sel.size(), sel.size());
  for (size_t a = 0; a < sel.size(); ++a)
    for (size_t b = 0; b < sel.size(); ++b) ws.gram.at(a, b) = G.at(sel[a], sel[b]);
  ws.gram_inv = Ginv;
  ws.f_plain.assign(n, QMat());
  ws.e_plain.assign(n, QMat());
  ws.f_int.assign(n, QMat());
  ws.e_int.assign(n, QMat());

  total_dim_ += ws.dim;
  if (total_dim_ > opts.max_total_dim)
    fail(ErrorCode::ResourceBudgetExceeded,
         "total dimension exceeds cap of " + std::to_string(opts.max_total_dim));

  // coordinates of every candidate over the chosen basis fill the parents'
  // f-action matrices
  std::map<int, QMat> fmat; // dir -> matrix (dim x parent_dim)
  for (size_t i = 0; i < n; ++i) {
    if (k[i] == 0) continue;
    KVec pk = k;
    pk[i] -= 1;
    const WeightSpace* p = space(pk);
    if (!p || p->dim == 0) continue;
    fmat.emplace(static_cast<int>(i), QMat(sel.size(), static_cast<size_t>(p->dim)));
  }
  for (size_t c = 0; c < m; ++c) {
    QVec v(sel.size());
    for (size_t s = 0; s < sel.size(); ++s) v[s] = G.at(sel[s], c);
    QVec coords = Ginv * v;
    QMat& target = fmat.at(cands[c].dir);
    for (size_t s = 0; s < sel.size(); ++s) target.at(s, cands[c].parent_idx) = coords[s];
  }
  for (auto& [dir, mat] : fmat) {
    KVec pk = k;
    pk[dir] -= 1;
    spaces_.at(pk).f_plain[dir] = std::move(mat);
  }

  // e-action at this weight from the commutation relation
  for (size_t i = 0; i < n; ++i) {
    KVec tk = k;
    tk[i] -= 1;
    const WeightSpace* tgt = (tk[i] >= 0) ? space(tk) : nullptr;
    size_t tdim = (tgt && tgt->dim > 0) ? static_cast<size_t>(tgt->dim) : 0;
    QMat E(tdim, sel.size());
    if (tdim > 0 && k[i] >= 1) {
      for (size_t col = 0; col < sel.size(); ++col) {
        int im = ws.parent[col].first;
        size_t u = ws.parent[col].second;
        KVec ku = k;
        ku[im] -= 1;
        const WeightSpace& pu = spaces_.at(ku);
        // f_im (e_i u)
        KVec kui = ku;
        kui[i] -= 1;
        const WeightSpace* midp = (kui[i] >= 0) ? space(kui) : nullptr;
        QVec col_acc(tdim, Rat(0));
        if (midp && midp->dim > 0) {
          const QMat& estep = pu.e_plain[i];
          QVec eu(static_cast<size_t>(midp->dim));
          for (size_t r = 0; r < eu.size(); ++r) eu[r] = estep.at(r, u);
          const QMat& fstep = midp->f_plain[im];
          QVec fu = fstep * eu;
          for (size_t r = 0; r < tdim; ++r) col_acc[r] += fu[r];
        }
        if (static_cast<int>(i) == im) {
          ModuleWeight mu{lambda_, ku};
          Rat pr{pairing(A_, mu, static_cast<int>(i))};
          col_acc[u] += pr;
        }
        for (size_t r = 0; r < tdim; ++r) E.at(r, col) = col_acc[r];
      }
    }
    ws.e_plain[i] = std::move(E);
  }

  // integral lattice: generated by divided powers of the parents' lattices
  {
    std::vector<QVec> gens;
    for (size_t j = 0; j < n; ++j) {
      for (long mm = 1; mm <= k[j]; ++mm) {
        KVec src = k;
        src[j] -= mm;
        const WeightSpace* sp = space(src);
        if (!sp || sp->dim == 0) continue;
        // F_j^{(mm)} column by column through the plain f-action chain
        for (size_t col = 0; col < static_cast<size_t>(sp->dim); ++col) {
          QVec v(static_cast<size_t>(sp->dim), Rat(0));
          for (size_t r = 0; r < static_cast<size_t>(sp->dim); ++r)
            v[r] = sp->zbasis.at(r, col);
          KVec cur = src;
          bool dead = false;
          for (long step = 0; step < mm; ++step) {
            const WeightSpace* cw = space(cur);
            if (!cw || cw->dim == 0) { dead = true; break; }
            v = cw->f_plain[j] * v;
            cur[j] += 1;
            if (is_zero(v)) { dead = true; break; }
          }
          if (dead) continue;
          Rat fct{factorial(mm)};
          for (Rat& x : v) x /= fct;
          gens.push_back(std::move(v));
        }
      }
    }
    // clear denominators, Hermite-reduce, rescale back
    Int den(1);
    for (const QVec& g : gens)
      for (const Rat& x : g) den = lcm(den, x.get_den());
    std::vector<IVec> M(sel.size(), IVec(gens.size(), Int(0)));
    for (size_t c = 0; c < gens.size(); ++c)
      for (size_t r = 0; r < sel.size(); ++r) {
        Rat scaled = gens[c][r] * Rat(den);
        M[r][c] = scaled.get_num();
      }
    std::vector<IVec> H = hermite_column_basis(M);
    if (H.size() != sel.size())
      fail(ErrorCode::Internal, "integral lattice is not full rank in the weight space");
    ws.zbasis = QMat(sel.size(), sel.size());
    Rat dr{den};
    for (size_t c = 0; c < H.size(); ++c)
      for (size_t r = 0; r < sel.size(); ++r) ws.zbasis.at(r, c) = Rat(H[c][r]) / dr;
    ws.zbasis_inv = ws.zbasis.inverse();
  }

  spaces_.emplace(k, std::move(ws));
}

long TruncatedModule::mult(const KVec& k) const {
  if (k.size() != A_.rank()) fail(ErrorCode::UsageError, "depth vector rank mismatch");
  if (ksum(k) > d_) fail(ErrorCode::DepthOutOfRange, "weight beyond the truncation depth");
  return dim_at(k);
}

long TruncatedModule::dim_at(const KVec& k) const {
  for (long x : k)
    if (x < 0) return 0;
  if (ksum(k) > d_) fail(ErrorCode::DepthOutOfRange, "weight beyond the truncation depth");
  auto it = spaces_.find(k);
  return it == spaces_.end() ? 0 : it->second.dim;
}

const WeightSpace* TruncatedModule::space(const KVec& k) const {
  auto it = spaces_.find(k);
  return it == spaces_.end() ? nullptr : &it->second;
}

QVec TruncatedModule::e_action(int i, const KVec& k, const QVec& v) const {
  if (ksum(k) > d_) fail(ErrorCode::DepthOutOfRange, "source weight beyond truncation");
  const WeightSpace* ws = space(k);
  if (!ws || ws->dim == 0) return {};
  if (k[i] == 0) return {};
  return ws->e_int[i] * v;
}

QVec TruncatedModule::f_action(int i, const KVec& k, const QVec& v) const {
  if (ksum(k) + 1 > d_)
    fail(ErrorCode::TruncationOverflow, "f-action exits the truncation depth");
  const WeightSpace* ws = space(k);
  if (!ws || ws->dim == 0) return {};
  return ws->f_int[i] * v;
}

TruncatedModule::ZBasis TruncatedModule::zbasis(const KVec& k) const {
  if (ksum(k) > d_) fail(ErrorCode::DepthOutOfRange, "weight beyond the truncation depth");
  const WeightSpace* ws = space(k);
  if (!ws) return {};
  return {ws->basis, ws->zbasis};
}

namespace {

void enum_divided(const Gcm& A, const KVec& remaining, int last, DividedMonomial& cur,
                  std::vector<DividedMonomial>& out) {
  if (ksum(remaining) == 0) {
    out.push_back(cur);
    return;
  }
  for (size_t j = 0; j < A.rank(); ++j) {
    if (static_cast<int>(j) == last || remaining[j] == 0) continue;
    for (long m = 1; m <= remaining[j]; ++m) {
      KVec next = remaining;
      next[j] -= m;
      cur.push_back({static_cast<int>(j), m});
      enum_divided(A, next, static_cast<int>(j), cur, out);
      cur.pop_back();
    }
  }
}

} // namespace

std::vector<DividedMonomial> TruncatedModule::divided_monomials(const KVec& k) const {
  std::vector<DividedMonomial> out;
  DividedMonomial cur;
  enum_divided(A_, k, -1, cur, out);
  return out;
}

QVec TruncatedModule::divided_monomial_coords(const DividedMonomial& mono) const {
  size_t n = A_.rank();
  KVec cur(n, 0);
  QVec v{Rat(1)};
  for (auto it = mono.rbegin(); it != mono.rend(); ++it) {
    const WeightSpace* ws = space(cur);
    if (!ws || ws->dim == 0) return {};
    for (long step = 0; step < it->m; ++step) {
      const WeightSpace* cw = space(cur);
      if (!cw || cw->dim == 0) return {};
      v = cw->f_plain[it->i] * v;
      cur[it->i] += 1;
      if (v.empty() || is_zero(v)) return {};
    }
    Rat fct{factorial(it->m)};
    for (Rat& x : v) x /= fct;
  }
  return v;
}

ModuleCollection::ModuleCollection(std::vector<ModulePtr> mods) : mods_(std::move(mods)) {
  if (mods_.empty()) fail(ErrorCode::UsageError, "empty module collection");
  for (const auto& m : mods_) {
    if (!(m->gcm() == mods_.front()->gcm()))
      fail(ErrorCode::UsageError, "collection members must share one GCM");
    if (m->depth_bound() != mods_.front()->depth_bound())
      fail(ErrorCode::UsageError, "collection members must share one depth bound");
  }
}

bool check_faithful_weight_lattice(const TruncatedModule& M) {
  size_t n = M.gcm().rank();
  for (size_t i = 0; i < n; ++i) {
    bool found = false;
    for (const auto& [k, ws] : M.spaces()) {
      if (ws.dim == 0) continue;
      KVec down = k;
      down[i] += 1;
      long s = 0;
      for (long x : down) s += x;
      if (s > M.depth_bound()) continue;
      const WeightSpace* dn = M.space(down);
      if (dn && dn->dim > 0) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool check_faithful_weight_lattice(const ModuleCollection& C) {
  size_t n = C.gcm().rank();
  for (size_t i = 0; i < n; ++i) {
    bool found = false;
    for (const auto& m : C.modules()) {
      for (const auto& [k, ws] : m->spaces()) {
        if (ws.dim == 0) continue;
        KVec down = k;
        down[i] += 1;
        long s = 0;
        for (long x : down) s += x;
        if (s > m->depth_bound()) continue;
        const WeightSpace* dn = m->space(down);
        if (dn && dn->dim > 0) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return false;
  }
  return true;
}

} // namespace kmchev
