#include "kmchev/chevgroup.hpp"
#include "kmchev/errors.hpp"
#include <algorithm>

namespace kmchev {

namespace {

long ksum(const KVec& k) {
  long s = 0;
  for (long x : k) s += x;
  return s;
}

} // namespace

Letter chi(int i, Sgn s, const Rat& t) {
  Letter l;
  l.kind = Letter::Kind::ChiSimple;
  l.i = i;
  l.sign = s;
  l.t = t;
  return l;
}

Letter chi_real_letter(const RealRoot& r, Sgn s, const Rat& t) {
  if (r.witness.word.empty()) return chi(r.witness.simple, s, t);
  Letter l;
  l.kind = Letter::Kind::ChiReal;
  l.i = r.witness.simple;
  l.sign = s;
  l.root = r.coords;
  l.wword = r.witness.word;
  l.t = t;
  return l;
}

Letter torus_letter(int i, const Rat& t) {
  if (t == 0) fail(ErrorCode::ZeroTorusParameter, "torus parameter must be nonzero");
  Letter l;
  l.kind = Letter::Kind::Torus;
  l.i = i;
  l.t = t;
  return l;
}

Letter wtilde_letter(int i, const Rat& t) {
  if (t == 0) fail(ErrorCode::ZeroTorusParameter, "wtilde parameter must be nonzero");
  Letter l;
  l.kind = Letter::Kind::WTilde;
  l.i = i;
  l.t = t;
  return l;
}

Letter inverse_letter(const Letter& l) {
  Letter r = l;
  switch (l.kind) {
    case Letter::Kind::ChiSimple:
    case Letter::Kind::ChiReal:
    case Letter::Kind::WTilde:
      r.t = -l.t;
      break;
    case Letter::Kind::Torus:
      r.t = 1 / l.t;
      break;
  }
  return r;
}

Word inverse_word(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(inverse_letter(*it));
  return r;
}

Word expand_elementary(const Word& w) {
  Word out;
  for (const Letter& l : w) {
    if (l.kind != Letter::Kind::ChiReal) {
      out.push_back(l);
      continue;
    }
    for (int j : l.wword) out.push_back(wtilde_letter(j, Rat(1)));
    out.push_back(chi(l.i, l.sign, l.t));
    for (auto it = l.wword.rbegin(); it != l.wword.rend(); ++it)
      out.push_back(wtilde_letter(*it, Rat(-1)));
  }
  return out;
}

Graded graded_unit(const TruncatedModule& M, const KVec& k, size_t index) {
  const WeightSpace* ws = M.space(k);
  if (!ws || static_cast<size_t>(ws->dim) <= index)
    fail(ErrorCode::Internal, "graded_unit outside the weight space");
  QVec v(static_cast<size_t>(ws->dim), Rat(0));
  v[index] = 1;
  return {{k, std::move(v)}};
}

bool graded_is_zero(const Graded& v) {
  for (const auto& [k, vec] : v)
    if (!is_zero(vec)) return false;
  return true;
}

bool graded_is_integral(const Graded& v) {
  for (const auto& [k, vec] : v)
    for (const Rat& x : vec)
      if (x.get_den() != 1) return false;
  return true;
}

namespace {

void add_into(Graded& acc, const KVec& k, const QVec& v) {
  if (v.empty() || is_zero(v)) return;
  auto it = acc.find(k);
  if (it == acc.end())
    acc.emplace(k, v);
  else
    it->second = it->second + v;
}

void prune(Graded& v) {
  for (auto it = v.begin(); it != v.end();) {
    if (it->second.empty() || is_zero(it->second))
      it = v.erase(it);
    else
      ++it;
  }
}

} // namespace

Graded apply_f(const TruncatedModule& M, int i, const Graded& v) {
  Graded out;
  for (const auto& [k, vec] : v) {
    if (ksum(k) + 1 > M.depth_bound())
      fail(ErrorCode::TruncationOverflow, "f-step exits the truncation");
    const WeightSpace* ws = M.space(k);
    if (!ws) continue;
    KVec up = k;
    up[i] += 1;
    add_into(out, up, ws->f_int[i] * vec);
  }
  prune(out);
  return out;
}

Graded apply_e(const TruncatedModule& M, int i, const Graded& v) {
  Graded out;
  for (const auto& [k, vec] : v) {
    if (k[i] == 0) continue;
    const WeightSpace* ws = M.space(k);
    if (!ws) continue;
    KVec dn = k;
    dn[i] -= 1;
    add_into(out, dn, ws->e_int[i] * vec);
  }
  prune(out);
  return out;
}

namespace {

// chi_{sign alpha_i}(t) = sum_m t^m X^(m); ascending series always
// terminate, descending ones must end inside the truncation.
void apply_chi(const TruncatedModule& M, int i, Sgn sign, const Rat& t, const Graded& v,
               Graded& out) {
  for (const auto& [k, vec] : v) {
    add_into(out, k, vec);
    if (t == 0) continue;
    QVec cur = vec;
    KVec ck = k;
    Rat tm(1);
    for (long m = 1; !cur.empty() && !is_zero(cur); ++m) {
      const WeightSpace* ws = M.space(ck);
      if (!ws) break;
      if (sign == Sgn::Plus) {
        if (ck[i] == 0) break;
        cur = ws->e_int[i] * cur;
        ck[i] -= 1;
      } else {
        if (ksum(ck) + 1 > M.depth_bound())
          fail(ErrorCode::TruncationOverflow,
               "descending exponential string is not certified to end within depth " +
                   std::to_string(M.depth_bound()));
        cur = ws->f_int[i] * cur;
        ck[i] += 1;
      }
      if (cur.empty() || is_zero(cur)) break;
      for (Rat& x : cur) x /= m; // divided power
      tm *= t;
      add_into(out, ck, tm * cur);
    }
  }
}

} // namespace

Graded apply_letter(const TruncatedModule& M, const Letter& l, const Graded& v) {
  Graded out;
  switch (l.kind) {
    case Letter::Kind::ChiSimple:
      apply_chi(M, l.i, l.sign, l.t, v, out);
      break;
    case Letter::Kind::ChiReal: {
      Word one{l};
      return apply_word(M, expand_elementary(one), v);
    }
    case Letter::Kind::Torus: {
      if (l.t == 0) fail(ErrorCode::ZeroTorusParameter, "torus parameter must be nonzero");
      for (const auto& [k, vec] : v) {
        Int p = pairing(M.gcm(), ModuleWeight{M.lambda(), k}, l.i);
        if (!p.fits_slong_p()) fail(ErrorCode::Internal, "pairing exceeds machine range");
        add_into(out, k, rat_pow(l.t, p.get_si()) * vec);
      }
      break;
    }
    case Letter::Kind::WTilde: {
      if (l.t == 0) fail(ErrorCode::ZeroTorusParameter, "wtilde parameter must be nonzero");
      Graded a, b;
      apply_chi(M, l.i, Sgn::Plus, l.t, v, a);
      prune(a);
      apply_chi(M, l.i, Sgn::Minus, -1 / l.t, a, b);
      prune(b);
      apply_chi(M, l.i, Sgn::Plus, l.t, b, out);
      break;
    }
  }
  prune(out);
  return out;
}

Graded apply_word(const TruncatedModule& M, const Word& w, Graded v) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = apply_letter(M, *it, v);
  return v;
}

BlockOperator::BlockOperator(ModulePtr M, Word letters)
    : M_(std::move(M)), letters_(expand_elementary(std::move(letters))),
      cache_(std::make_shared<Cache>()) {}

const std::map<KVec, QMat>* BlockOperator::fill(const KVec& k) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->rows.find(k);
    if (it != cache_->rows.end()) return it->second ? &*it->second : nullptr;
  }
  const WeightSpace* ws = M_->space(k);
  std::optional<std::map<KVec, QMat>> result;
  if (!ws || ws->dim == 0) {
    result.emplace(); // empty row
  } else {
    try {
      std::map<KVec, QMat> blocks;
      for (size_t col = 0; col < static_cast<size_t>(ws->dim); ++col) {
        Graded img = apply_word(*M_, letters_, graded_unit(*M_, k, col));
        for (const auto& [tk, vec] : img) {
          auto [it, fresh] = blocks.try_emplace(
              tk, QMat(vec.size(), static_cast<size_t>(ws->dim)));
          for (size_t r = 0; r < vec.size(); ++r) it->second.at(r, col) = vec[r];
        }
      }
      for (auto it = blocks.begin(); it != blocks.end();)
        it = it->second.is_zero() ? blocks.erase(it) : std::next(it);
      result = std::move(blocks);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TruncationOverflow) throw;
      result = std::nullopt;
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto [it, fresh] = cache_->rows.emplace(k, std::move(result));
  return it->second ? &*it->second : nullptr;
}

std::map<KVec, QMat> BlockOperator::row(const KVec& k) const {
  const auto* r = fill(k);
  if (!r)
    fail(ErrorCode::TruncationOverflow,
         "operator blocks at this source weight exit the truncation");
  return *r;
}

bool BlockOperator::row_ok(const KVec& k) const { return fill(k) != nullptr; }

long BlockOperator::valid_source_depth(long pmax) const {
  for (long p = 0; p <= pmax; ++p) {
    for (const auto& [k, ws] : M_->spaces()) {
      if (ws.dim == 0 || ksum(k) != p) continue;
      if (!row_ok(k)) return p - 1;
    }
  }
  return pmax;
}

Graded BlockOperator::apply(const Graded& v) const { return apply_word(*M_, letters_, v); }

BlockOperator chi_simple(ModulePtr M, int i, Sgn s, const Rat& t) {
  return BlockOperator(std::move(M), {chi(i, s, t)});
}

BlockOperator chi_real(ModulePtr M, const RealRoot& r, Sgn s, const Rat& t) {
  return BlockOperator(std::move(M), {chi_real_letter(r, s, t)});
}

BlockOperator wtilde(ModulePtr M, int i, const Rat& t) {
  return BlockOperator(std::move(M), {wtilde_letter(i, t)});
}

BlockOperator torus(ModulePtr M, int i, const Rat& t) {
  return BlockOperator(std::move(M), {torus_letter(i, t)});
}

BlockOperator eval_word(ModulePtr M, const Word& w) { return BlockOperator(std::move(M), w); }

std::vector<BlockOperator> eval_word(const ModuleCollection& C, const Word& w) {
  std::vector<BlockOperator> ops;
  ops.reserve(C.modules().size());
  for (const auto& m : C.modules()) ops.emplace_back(m, w);
  return ops;
}

bool operator_eq(const BlockOperator& a, const BlockOperator& b, long p) {
  if (&a.module() != &b.module())
    fail(ErrorCode::UsageError, "operator_eq needs operators on one module");
  for (const auto& [k, ws] : a.module().spaces()) {
    if (ws.dim == 0 || ksum(k) > p) continue;
    if (!a.row_ok(k) || !b.row_ok(k))
      fail(ErrorCode::DepthOutOfRange, "probe depth exceeds a valid operator depth");
    if (a.row(k) != b.row(k)) return false;
  }
  return true;
}

} // namespace kmchev
