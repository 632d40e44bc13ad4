#include "kmchev/arith.hpp"
#include "kmchev/errors.hpp"
#include "kmchev/wordlang.hpp"
#include <algorithm>

namespace kmchev {

namespace {

long ksum(const KVec& k) {
  long s = 0;
  for (long x : k) s += x;
  return s;
}

constexpr long kMaxProbeDepth = 48;

// grow-on-overflow probe evaluation
template <typename F>
auto with_probe_module(ArithContext& ctx, const IVec& lambda, long d0, F&& f) {
  long d = std::max<long>(d0, 2);
  for (;;) {
    ModulePtr m = ctx.probe_module(lambda, d);
    try {
      return f(*m);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TruncationOverflow || d >= kMaxProbeDepth) throw;
      d = std::min(kMaxProbeDepth, d * 2);
    }
  }
}

Rat k0_coefficient(const Graded& v) {
  for (const auto& [k, vec] : v)
    if (ksum(k) == 0) return vec.empty() ? Rat(0) : vec[0];
  return Rat(0);
}

} // namespace

ArithContext::ArithContext(const Gcm& A, BuildOptions opts) : A_(A), opts_(opts) {}

ModulePtr ArithContext::probe_module(const IVec& lambda, long min_depth) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = modules_.find(lambda);
  if (it != modules_.end() && it->second->depth_bound() >= min_depth) return it->second;
  ModulePtr m = TruncatedModule::build(A_, lambda, min_depth, opts_);
  modules_[lambda] = m;
  return m;
}

RealRoot ArithContext::resolve_real(const RootCoords& positive) {
  Int h = height(positive);
  if (!all_nonneg(positive) || h < 1)
    fail(ErrorCode::NotARealRoot, "root coordinates must be positive");
  long hl = static_cast<long>(h.get_si());
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (hl <= roots_height_) {
      for (const RealRoot& r : roots_)
        if (r.coords == positive) return r;
      fail(ErrorCode::NotARealRoot, "not a real root");
    }
  }
  auto roots = real_roots_up_to_height(A_, hl);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (hl > roots_height_) {
      roots_ = roots;
      roots_height_ = hl;
    }
  }
  for (const RealRoot& r : roots)
    if (r.coords == positive) return r;
  fail(ErrorCode::NotARealRoot, "not a real root");
}

Graded ArithContext::x_minus_vlambda(const TruncatedModule& M, const RealRoot& r) {
  // x_{-alpha} = Ad(wtilde_w)(f_i): ride v_lambda down through the witness
  Graded v = graded_unit(M, KVec(A_.rank(), 0), 0);
  Word winv;
  for (auto it = r.witness.word.rbegin(); it != r.witness.word.rend(); ++it)
    winv.push_back(wtilde_letter(*it, Rat(-1)));
  v = apply_word(M, winv, std::move(v));
  v = apply_f(M, r.witness.simple, v);
  Word wfwd;
  for (int j : r.witness.word) wfwd.push_back(wtilde_letter(j, Rat(1)));
  return apply_word(M, wfwd, std::move(v));
}

ArithContext::ProbePair ArithContext::probe_pair(const RealRoot& r) {
  size_t n = A_.rank();
  // w omega_i as a module weight over omega_i
  ModuleWeight base{IVec(n, Int(0)), KVec(n, 0)};
  base.lambda[r.witness.simple] = 1;
  ModuleWeight moved = weyl_apply(A_, r.witness.word, base);
  IVec q(n);
  Int worst(0);
  for (size_t j = 0; j < n; ++j) {
    q[j] = pairing(A_, moved, static_cast<int>(j));
    worst = std::min(worst, q[j]);
  }
  Int scale = std::max(Int(1), Int(-worst));
  ProbePair pp;
  pp.lambda1 = IVec(n, scale);
  pp.lambda2 = IVec(n);
  for (size_t j = 0; j < n; ++j) pp.lambda2[j] = scale + q[j];
  IVec cv = coroot_coords(A_, r.witness);
  Int p1(0), p2(0);
  for (size_t j = 0; j < n; ++j) {
    p1 += cv[j] * pp.lambda1[j];
    p2 += cv[j] * pp.lambda2[j];
  }
  if (p2 != p1 + 1)
    fail(ErrorCode::Internal, "probe pair does not have consecutive pairings");
  pp.pairing1 = p1;
  return pp;
}

int ArithContext::m2_sign(int i, const RealRoot& beta) {
  SignKey key{i, beta.coords, beta.witness.word, beta.witness.simple};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = signs_.find(key);
    if (it != signs_.end()) return it->second;
  }
  RootCoords gcoords = reflect(A_, i, beta.coords);
  if (!all_nonneg(gcoords))
    fail(ErrorCode::Internal, "m2_sign called on beta = alpha_i");
  RealRoot gamma = resolve_real(gcoords);
  // probe the v_lambda-coefficient of O (x_{-gamma} v_lambda) for
  // O = wtilde^{-1} chi_beta(1) wtilde
  Word conj{wtilde_letter(i, Rat(-1)), chi_real_letter(beta, Sgn::Plus, Rat(1)),
            wtilde_letter(i, Rat(1))};
  IVec ones(A_.rank(), Int(1));
  Int expect(0);
  {
    IVec cv = coroot_coords(A_, gamma.witness);
    for (const Int& c : cv) expect += c;
  }
  if (expect == 0) fail(ErrorCode::Internal, "degenerate sign probe pairing");
  long d0 = static_cast<long>(height(gcoords).get_si()) + 4;
  Rat coeff = with_probe_module(*this, ones, d0, [&](const TruncatedModule& M) {
    Graded u = x_minus_vlambda(M, gamma);
    Graded img = apply_word(M, conj, std::move(u));
    return k0_coefficient(img);
  });
  Rat eps = coeff / Rat(expect);
  int sign;
  if (eps == 1)
    sign = 1;
  else if (eps == -1)
    sign = -1;
  else
    fail(ErrorCode::Internal, "conjugation sign probe did not return a unit");
  std::lock_guard<std::mutex> lock(mu_);
  signs_.emplace(key, sign);
  return sign;
}

Rat ArithContext::alpha_coordinate(const Word& positive, int i) {
  IVec ones(A_.rank(), Int(1));
  return with_probe_module(*this, ones, 4, [&](const TruncatedModule& M) {
    Graded u = apply_f(M, i, graded_unit(M, KVec(A_.rank(), 0), 0));
    Graded img = apply_word(M, positive, std::move(u));
    return k0_coefficient(img); // <lambda, alpha_i^vee> = 1 here
  });
}

IntegralityVerdict stabilizes_zform(const ModuleCollection& C, const Word& w, long p) {
  Word winv = inverse_word(w);
  for (bool inv : {false, true}) {
    const Word& word = inv ? winv : w;
    for (const auto& m : C.modules()) {
      BlockOperator op(m, word);
      for (const auto& [k, ws] : m->spaces()) {
        if (ws.dim == 0 || ksum(k) > p) continue;
        auto blocks = op.row(k);
        for (const auto& [tk, mat] : blocks)
          for (size_t r = 0; r < mat.rows(); ++r)
            for (size_t c = 0; c < mat.cols(); ++c)
              if (mat.at(r, c).get_den() != 1) {
                IntegralityVerdict v;
                v.integral = false;
                v.witness = IntegralityWitness{m->lambda(), k, c, mat.at(r, c), inv};
                return v;
              }
      }
    }
  }
  return {true, std::nullopt};
}

Lemma62Report lemma62_probe(ArithContext& ctx, const RealRoot& alpha, const Rat& t) {
  auto pp = ctx.probe_pair(alpha);
  Lemma62Report rep;
  rep.lambda1 = pp.lambda1;
  rep.lambda2 = pp.lambda2;
  rep.pairing1 = pp.pairing1;
  rep.pairing2 = pp.pairing1 + 1;
  Letter move = chi_real_letter(alpha, Sgn::Plus, t);
  long d0 = static_cast<long>(height(alpha.coords).get_si()) * 2 + 2;
  auto run = [&](const IVec& lambda, const Int& pair) {
    return with_probe_module(ctx, lambda, d0, [&](const TruncatedModule& M) {
      Graded u = ctx.x_minus_vlambda(M, alpha);
      Graded img = apply_word(M, {move}, std::move(u));
      Rat coeff = k0_coefficient(img);
      if (coeff != t * Rat(pair))
        fail(ErrorCode::Internal, "probe coefficient disagrees with t<lambda,alpha^vee>");
      return coeff;
    });
  };
  rep.coeff1 = run(pp.lambda1, rep.pairing1);
  rep.coeff2 = run(pp.lambda2, rep.pairing2);
  bool ok = is_integer(rep.coeff1) && is_integer(rep.coeff2);
  rep.verdict.integral = ok;
  if (!ok) {
    bool first_bad = !is_integer(rep.coeff1);
    rep.verdict.witness =
        IntegralityWitness{first_bad ? rep.lambda1 : rep.lambda2, KVec(alpha.coords.size(), 0), 0,
                           first_bad ? rep.coeff1 : rep.coeff2, false};
  }
  return rep;
}

namespace {

RootCoords letter_root(const Gcm& A, const Letter& l) {
  if (l.kind == Letter::Kind::ChiSimple) return simple_root(A.rank(), l.i);
  return l.root;
}

RealRoot letter_real_root(ArithContext& ctx, const Letter& l) {
  if (l.kind == Letter::Kind::ChiSimple)
    return RealRoot{simple_root(ctx.gcm().rank(), l.i), Witness{{}, l.i}};
  return RealRoot{l.root, Witness{l.wword, l.i}};
}

} // namespace

UnipotentReport unipotent_certificate(ArithContext& ctx, const ModuleCollection& C,
                                      const Word& u) {
  const Gcm& A = C.gcm();
  for (const Letter& l : u) {
    if ((l.kind != Letter::Kind::ChiSimple && l.kind != Letter::Kind::ChiReal) ||
        l.sign != Sgn::Plus)
      fail(ErrorCode::NotOrderedDescending,
           "unipotent word must consist of positive chi letters");
  }
  for (size_t j = 0; j + 1 < u.size(); ++j)
    if (root_order_cmp(letter_root(A, u[j]), letter_root(A, u[j + 1])) <= 0)
      fail(ErrorCode::NotOrderedDescending, "roots must strictly decrease");

  UnipotentReport rep;
  rep.params.assign(u.size(), Rat(0));
  rep.verdict.integral = true;
  Word work = u;
  for (size_t idx = u.size(); idx-- > 0;) {
    RealRoot beta = letter_real_root(ctx, u[idx]);
    auto pp = ctx.probe_pair(beta);
    long d0 = static_cast<long>(height(beta.coords).get_si()) * 2 + 2;
    auto coeff_on = [&](const IVec& lambda) {
      return with_probe_module(ctx, lambda, d0, [&](const TruncatedModule& M) {
        Graded v = ctx.x_minus_vlambda(M, beta);
        Graded img = apply_word(M, work, std::move(v));
        return k0_coefficient(img);
      });
    };
    Rat c1 = coeff_on(pp.lambda1);
    Rat c2 = coeff_on(pp.lambda2);
    Rat t = c2 - c1; // pairings are consecutive
    if (c1 != t * Rat(pp.pairing1))
      fail(ErrorCode::Internal, "probe coefficients inconsistent with a single parameter");
    rep.params[idx] = t;
    if (!(is_integer(c1) && is_integer(c2)) && rep.verdict.integral) {
      rep.verdict.integral = false;
      rep.culprit = idx;
      rep.verdict.witness = IntegralityWitness{pp.lambda1, KVec(A.rank(), 0), 0, c1, false};
    }
    // strip the recovered letter and continue with the shorter element
    Letter inv = u[idx];
    inv.t = -t;
    work.push_back(inv);
  }
  return rep;
}

Sl2Step sl2_step(const Rat& p, const Rat& q, const Rat& r, const Rat& s) {
  if (p * s - q * r != 1)
    fail(ErrorCode::NotDeterminantOne, "matrix must have determinant exactly 1");
  Int c, d;
  if (r == 0) {
    c = 0;
    d = 1;
  } else if (p == 0) {
    c = 1;
    d = 0;
  } else {
    Int u = p.get_num() * r.get_den();
    Int v = r.get_num() * p.get_den();
    Int g;
    mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
    c = v / g;
    d = -u / g;
  }
  // complete to det 1: a d - b c = 1
  Int g, x, y;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), d.get_mpz_t(), c.get_mpz_t());
  if (g != 1) fail(ErrorCode::Internal, "c, d are not coprime");
  Int a = x, b = -y;
  // row-clearing matrix m0 = [[a,b],[c,d]]; the returned gamma is its inverse
  Rat ux = Rat(a) * p + Rat(b) * r;
  Rat uy = Rat(a) * q + Rat(b) * s;
  Rat lz = Rat(c) * p + Rat(d) * r;
  Rat uz = Rat(c) * q + Rat(d) * s;
  if (lz != 0) fail(ErrorCode::Internal, "row clearing failed");
  Sl2Step out;
  out.gamma = {d, -b, -c, a};
  out.upper = {ux, uy, Rat(0), uz};
  bool product_ok = Rat(out.gamma[0]) * ux == p &&
                    Rat(out.gamma[0]) * uy + Rat(out.gamma[1]) * uz == q &&
                    Rat(out.gamma[2]) * ux == r &&
                    Rat(out.gamma[2]) * uy + Rat(out.gamma[3]) * uz == s;
  if (!product_ok) fail(ErrorCode::Internal, "product identity violated");
  return out;
}

Word sl2_integral_word(int i, const std::array<Int, 4>& m) {
  Int a = m[0], b = m[1], c = m[2], d = m[3];
  if (a * d - b * c != 1) fail(ErrorCode::NotDeterminantOne, "matrix not in SL2(Z)");
  Word out;
  auto apply_left = [&](const std::array<Int, 4>& l) {
    // replace M by l * M
    Int na = l[0] * a + l[1] * c, nb = l[0] * b + l[1] * d;
    Int nc = l[2] * a + l[3] * c, nd = l[2] * b + l[3] * d;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  };
  for (;;) {
    if (c == 0) {
      if (a == 1) {
        if (b != 0) out.push_back(chi(i, Sgn::Plus, Rat(b)));
      } else {
        // a = d = -1
        out.push_back(torus_letter(i, Rat(-1)));
        if (b != 0) out.push_back(chi(i, Sgn::Plus, Rat(-b)));
      }
      break;
    }
    if (a != 0) {
      Int qk;
      mpz_tdiv_q(qk.get_mpz_t(), c.get_mpz_t(), a.get_mpz_t());
      if (qk != 0) {
        out.push_back(chi(i, Sgn::Minus, Rat(qk)));
        apply_left({Int(1), Int(0), -qk, Int(1)});
        continue;
      }
    }
    out.push_back(wtilde_letter(i, Rat(1)));
    apply_left({Int(0), Int(-1), Int(1), Int(0)}); // wtilde(1)^{-1}
  }
  // recompose and check
  std::array<Rat, 4> acc{Rat(1), Rat(0), Rat(0), Rat(1)};
  auto mul = [&](std::array<Rat, 4> l) {
    acc = {l[0] * acc[0] + l[1] * acc[2], l[0] * acc[1] + l[1] * acc[3],
           l[2] * acc[0] + l[3] * acc[2], l[2] * acc[1] + l[3] * acc[3]};
  };
  std::array<Rat, 4> prod{Rat(1), Rat(0), Rat(0), Rat(1)};
  for (const Letter& l : out) {
    std::array<Rat, 4> lm;
    switch (l.kind) {
      case Letter::Kind::ChiSimple:
        lm = (l.sign == Sgn::Plus) ? std::array<Rat, 4>{Rat(1), l.t, Rat(0), Rat(1)}
                                   : std::array<Rat, 4>{Rat(1), Rat(0), l.t, Rat(1)};
        break;
      case Letter::Kind::Torus:
        lm = {l.t, Rat(0), Rat(0), 1 / l.t};
        break;
      case Letter::Kind::WTilde:
        lm = {Rat(0), l.t, -1 / l.t, Rat(0)};
        break;
      default:
        fail(ErrorCode::Internal, "unexpected letter kind");
    }
    prod = {prod[0] * lm[0] + prod[1] * lm[2], prod[0] * lm[1] + prod[1] * lm[3],
            prod[2] * lm[0] + prod[3] * lm[2], prod[2] * lm[1] + prod[3] * lm[3]};
  }
  (void)mul;
  if (prod[0] != m[0] || prod[1] != m[1] || prod[2] != m[2] || prod[3] != m[3])
    fail(ErrorCode::Internal, "sl2 word decomposition does not recompose");
  return out;
}

namespace {

struct RewriteEngine {
  ArithContext& ctx;
  const Gcm& A;
  const BruhatOptions& opts;
  long moves = 0;

  void spend(const std::string& what, const Word& segment) {
    if (++moves > opts.budget)
      fail(ErrorCode::MoveBudgetExceeded,
           "move budget exhausted during " + what + " at sub-word " + print_word(segment));
  }

  void verify(const Word& before, const Word& after) {
    if (!opts.verify_moves || !opts.verify_module) return;
    const TruncatedModule& M = *opts.verify_module;
    for (const auto& [k, ws] : M.spaces()) {
      if (ws.dim == 0 || ksum(k) > 1) continue;
      for (size_t colv = 0; colv < static_cast<size_t>(ws.dim); ++colv) {
        try {
          Graded u1 = apply_word(M, before, graded_unit(M, k, colv));
          Graded u2 = apply_word(M, after, graded_unit(M, k, colv));
          if (u1 != u2) fail(ErrorCode::Internal, "rewriting move changed the operator");
        } catch (const Error& e) {
          if (e.code() != ErrorCode::TruncationOverflow) throw;
        }
      }
    }
  }

  // chi_{-alpha_i}(s) = chi(1/s) h(-1/s) wtilde(1) chi(1/s)
  Word m1(const Letter& l) {
    Rat inv = 1 / l.t;
    Word out{chi(l.i, Sgn::Plus, inv), torus_letter(l.i, -inv), wtilde_letter(l.i, Rat(1)),
             chi(l.i, Sgn::Plus, inv)};
    spend("M1", {l});
    verify({l}, out);
    return out;
  }

  // wtilde_i(1)^{-1} chi_beta(s) wtilde_i(1)
  Letter m2(int i, const Letter& l) {
    spend("M2", {l});
    if (l.kind == Letter::Kind::ChiSimple && l.i == i && l.sign == Sgn::Plus) {
      Letter neg = chi(i, Sgn::Minus, -l.t);
      verify({l, wtilde_letter(i, Rat(1))}, {wtilde_letter(i, Rat(1)), neg});
      return neg;
    }
    RealRoot beta = letter_real_root(ctx, l);
    RootCoords refl = reflect(A, i, beta.coords);
    // the sign is probed against the canonical (enumeration) witness of the
    // reflected root, so the produced letter must carry that same witness
    RealRoot target = ctx.resolve_real(refl);
    int eps = ctx.m2_sign(i, beta);
    Letter out = chi_real_letter(target, Sgn::Plus, Rat(eps) * l.t);
    verify({l, wtilde_letter(i, Rat(1))}, {wtilde_letter(i, Rat(1)), out});
    return out;
  }

  // h_tau(t) chi_beta(s) = chi_beta(s t^{<beta,tau^vee>}) h_tau(t)
  Letter m3_chi(const Letter& h, const Letter& l) {
    spend("M3", {h, l});
    RootCoords beta = letter_root(A, l);
    Int e = root_pairing(A, beta, h.i);
    if (!e.fits_slong_p()) fail(ErrorCode::Internal, "pairing exceeds machine range");
    Letter out = l;
    out.t = l.t * rat_pow(h.t, e.get_si());
    verify({h, l}, {out, h});
    return out;
  }

  // h_tau(t) wtilde_i(1) = wtilde_i(1) h_tau(t) h_i(t^{-a_{tau i}})
  std::vector<Letter> m3_wtilde(const Letter& h, int i) {
    spend("M3", {h, wtilde_letter(i, Rat(1))});
    Int e = A.a(h.i, i);
    if (!e.fits_slong_p()) fail(ErrorCode::Internal, "entry exceeds machine range");
    Rat scaled = rat_pow(h.t, -e.get_si());
    std::vector<Letter> out{h};
    if (scaled != 1) out.push_back(torus_letter(i, scaled));
    verify({h, wtilde_letter(i, Rat(1))},
           [&]() {
             Word w{wtilde_letter(i, Rat(1))};
             for (const Letter& x : out) w.push_back(x);
             return w;
           }());
    return out;
  }

  // wtilde_i(t) = h_i(t) wtilde_i(1)
  Word m4(const Letter& l) {
    spend("M4", {l});
    Word out;
    if (l.t != 1) out.push_back(torus_letter(l.i, l.t));
    out.push_back(wtilde_letter(l.i, Rat(1)));
    verify({l}, out);
    return out;
  }
};

bool is_identity_letter(const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::ChiSimple:
    case Letter::Kind::ChiReal:
      return l.t == 0;
    case Letter::Kind::Torus:
      return l.t == 1;
    case Letter::Kind::WTilde:
      return false;
  }
  return false;
}

// one-parameter and torus laws on syntactically adjacent letters; keeps
// spurious inverse pairs from cascading through the rewriting
void merge_adjacent(Word& w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t idx = 0; idx < w.size();) {
      if (is_identity_letter(w[idx])) {
        w.erase(w.begin() + idx);
        changed = true;
        continue;
      }
      if (idx + 1 < w.size()) {
        Letter& a = w[idx];
        Letter& b = w[idx + 1];
        bool chi_pair = (a.kind == Letter::Kind::ChiSimple || a.kind == Letter::Kind::ChiReal) &&
                        a.kind == b.kind && a.i == b.i && a.sign == b.sign &&
                        a.root == b.root && a.wword == b.wword;
        if (chi_pair) {
          a.t += b.t;
          w.erase(w.begin() + idx + 1);
          changed = true;
          continue;
        }
        if (a.kind == Letter::Kind::Torus && b.kind == Letter::Kind::Torus && a.i == b.i) {
          a.t *= b.t;
          w.erase(w.begin() + idx + 1);
          changed = true;
          continue;
        }
      }
      ++idx;
    }
  }
}

} // namespace

Factorization bruhat_factor(ArithContext& ctx, const ModuleCollection& C, const Word& g,
                            const BruhatOptions& opts) {
  const Gcm& A = C.gcm();
  RewriteEngine eng{ctx, A, opts};

  // normalization: expand negative real letters through their witnesses,
  // put every wtilde parameter at 1
  Word work;
  for (const Letter& l : g) {
    if (l.kind == Letter::Kind::ChiReal && l.sign == Sgn::Minus) {
      Word one = expand_elementary({l});
      for (const Letter& x : one) work.push_back(x);
    } else {
      work.push_back(l);
    }
  }

  auto integral_letter = [](const Letter& l) {
    switch (l.kind) {
      case Letter::Kind::ChiSimple:
      case Letter::Kind::ChiReal:
        return is_integer(l.t);
      case Letter::Kind::Torus:
      case Letter::Kind::WTilde:
        return is_unit(l.t);
    }
    return false;
  };

  Word gamma;
  for (;;) {
    // identity letters, adjacent merges and wtilde normalization
    merge_adjacent(work);
    {
      bool m4done = false;
      for (size_t idx = 0; idx < work.size(); ++idx) {
        if (work[idx].kind == Letter::Kind::WTilde && work[idx].t != 1 && work[idx].t != -1) {
          Word rep = eng.m4(work[idx]);
          work.erase(work.begin() + idx);
          work.insert(work.begin() + idx, rep.begin(), rep.end());
          m4done = true;
          break;
        }
      }
      if (m4done) continue;
    }

    bool obstructed = false;
    for (const Letter& l : work) {
      if (l.kind == Letter::Kind::WTilde ||
          ((l.kind == Letter::Kind::ChiSimple || l.kind == Letter::Kind::ChiReal) &&
           l.sign == Sgn::Minus && l.t != 0)) {
        obstructed = true;
        break;
      }
    }
    if (!obstructed) break; // b-word reached

    // a maximal integral head is already a word over G(Z) letters; move it
    // into gamma untouched
    if (integral_letter(work.front())) {
      while (!work.empty() && integral_letter(work.front())) {
        gamma.push_back(work.front());
        work.erase(work.begin());
      }
      continue;
    }

    // wtilde(-1) letters that survive absorption get rewritten
    {
      bool m4done = false;
      for (size_t idx = 0; idx < work.size(); ++idx) {
        if (work[idx].kind == Letter::Kind::WTilde && work[idx].t != 1) {
          Word rep = eng.m4(work[idx]);
          work.erase(work.begin() + idx);
          work.insert(work.begin() + idx, rep.begin(), rep.end());
          m4done = true;
          break;
        }
      }
      if (m4done) continue;
    }

    // eliminate negative simple letters, leftmost first
    bool changed = false;
    for (size_t idx = 0; idx < work.size(); ++idx) {
      const Letter& l = work[idx];
      if (l.kind == Letter::Kind::ChiSimple && l.sign == Sgn::Minus && l.t != 0) {
        Word rep = eng.m1(l);
        work.erase(work.begin() + idx);
        work.insert(work.begin() + idx, rep.begin(), rep.end());
        changed = true;
        break;
      }
    }
    if (changed) continue;

    // collapse adjacent wtilde_i(1) wtilde_i(1) -> h_i(-1)
    for (size_t idx = 0; idx + 1 < work.size(); ++idx) {
      if (work[idx].kind == Letter::Kind::WTilde && work[idx + 1].kind == Letter::Kind::WTilde &&
          work[idx].i == work[idx + 1].i && work[idx].t == 1 && work[idx + 1].t == 1) {
        eng.spend("collapse", {work[idx], work[idx + 1]});
        Letter h = torus_letter(work[idx].i, Rat(-1));
        eng.verify({work[idx], work[idx + 1]}, {h});
        work.erase(work.begin() + idx, work.begin() + idx + 2);
        work.insert(work.begin() + idx, h);
        changed = true;
        break;
      }
    }
    if (changed) continue;

    // leftmost wtilde
    size_t pos = work.size();
    for (size_t idx = 0; idx < work.size(); ++idx)
      if (work[idx].kind == Letter::Kind::WTilde) {
        pos = idx;
        break;
      }
    if (pos == work.size()) break; // cell form reached: b-word

    int i = work[pos].i;
    // push torus letters in the prefix across the chi letters and the wtilde
    Word prefix(work.begin(), work.begin() + pos);
    Word tail(work.begin() + pos + 1, work.end());
    Word chis;
    std::vector<Letter> pending;   // torus letters drifting right (they commute)
    std::vector<Letter> collected; // after crossing the wtilde
    for (const Letter& l : prefix) {
      if (l.kind == Letter::Kind::Torus) {
        pending.push_back(l);
      } else {
        Letter cur = l;
        for (const Letter& h : pending) cur = eng.m3_chi(h, cur);
        chis.push_back(cur);
      }
    }
    for (const Letter& h : pending)
      for (const Letter& x : eng.m3_wtilde(h, i)) collected.push_back(x);

    // alpha_i-coordinate of the positive prefix
    Rat t0 = ctx.alpha_coordinate(chis, i);

    // SL2 step through phi_i on  chi_{alpha_i}(t0) wtilde_i(1)
    auto step = sl2_step(-t0, Rat(1), Rat(-1), Rat(0));
    eng.spend("sl2-step", {chi(i, Sgn::Plus, t0), wtilde_letter(i, Rat(1))});
    Word gword = sl2_integral_word(i, step.gamma);
    for (const Letter& l : gword) gamma.push_back(l);

    Word replacement;
    // b_i = h_i(x) chi_{alpha_i}(y/x) from the upper factor
    const Rat& x = step.upper[0];
    const Rat& y = step.upper[1];
    if (x != 1) replacement.push_back(torus_letter(i, x));
    if (y != 0) replacement.push_back(chi(i, Sgn::Plus, y / x));

    // u1 = chi_{alpha_i}(-t0) * prefix-chis, conjugated across the wtilde
    Word u1;
    if (t0 != 0) u1.push_back(chi(i, Sgn::Plus, -t0));
    for (const Letter& l : chis) u1.push_back(l);
    merge_adjacent(u1);
    for (const Letter& l : u1) replacement.push_back(eng.m2(i, l));

    for (const Letter& l : collected) replacement.push_back(l);
    for (const Letter& l : tail) replacement.push_back(l);
    work = std::move(replacement);
  }

  Factorization out;
  out.gamma = std::move(gamma);
  out.b = std::move(work);
  out.moves = eng.moves;

  // gamma invariants
  for (const Letter& l : out.gamma) {
    bool ok = true;
    switch (l.kind) {
      case Letter::Kind::ChiSimple:
      case Letter::Kind::ChiReal:
        ok = is_integer(l.t);
        break;
      case Letter::Kind::Torus:
        ok = is_unit(l.t);
        break;
      case Letter::Kind::WTilde:
        ok = is_unit(l.t);
        break;
    }
    if (!ok) fail(ErrorCode::Internal, "gamma letter violates integrality");
  }
  for (const Letter& l : out.b) {
    if (l.kind == Letter::Kind::WTilde)
      fail(ErrorCode::Internal, "b still contains a wtilde letter");
    if ((l.kind == Letter::Kind::ChiSimple || l.kind == Letter::Kind::ChiReal) &&
        l.sign == Sgn::Minus)
      fail(ErrorCode::Internal, "b still contains a negative letter");
  }

  // certificate: blockwise product identity on every collection module
  Word gb = out.gamma;
  for (const Letter& l : out.b) gb.push_back(l);
  long cert = opts.probe_depth;
  for (const auto& m : C.modules()) {
    BlockOperator lhs(m, g);
    BlockOperator rhs(m, gb);
    long local = -1;
    for (long p = 0; p <= opts.probe_depth; ++p) {
      bool ok = true;
      for (const auto& [k, ws] : m->spaces()) {
        if (ws.dim == 0 || ksum(k) != p) continue;
        if (!lhs.row_ok(k) || !rhs.row_ok(k)) {
          ok = false;
          break;
        }
        if (lhs.row(k) != rhs.row(k))
          fail(ErrorCode::Internal, "factorization product identity failed");
      }
      if (!ok) break;
      local = p;
    }
    cert = std::min(cert, local);
  }
  out.certificate_depth = cert;
  return out;
}

Word reduce_to_unit_generators(const Word& w) {
  Word out;
  for (const Letter& l : w) {
    switch (l.kind) {
      case Letter::Kind::ChiSimple: {
        if (!is_integer(l.t))
          fail(ErrorCode::NonIntegralParameter, "chi parameter is not an integer");
        Int n = l.t.get_num();
        Rat unit = n > 0 ? Rat(1) : Rat(-1);
        Int count = abs(n);
        for (Int c(0); c < count; ++c) out.push_back(chi(l.i, l.sign, unit));
        break;
      }
      case Letter::Kind::ChiReal: {
        if (!is_integer(l.t))
          fail(ErrorCode::NonIntegralParameter, "chi parameter is not an integer");
        Word conj;
        for (int j : l.wword) conj.push_back(wtilde_letter(j, Rat(1)));
        conj.push_back(chi(l.i, l.sign, l.t));
        for (auto it = l.wword.rbegin(); it != l.wword.rend(); ++it)
          conj.push_back(wtilde_letter(*it, Rat(-1)));
        Word expanded = reduce_to_unit_generators(conj);
        out.insert(out.end(), expanded.begin(), expanded.end());
        break;
      }
      case Letter::Kind::WTilde: {
        if (!is_unit(l.t))
          fail(ErrorCode::NonIntegralParameter, "wtilde parameter must be +-1");
        Word defn{chi(l.i, Sgn::Plus, l.t), chi(l.i, Sgn::Minus, -1 / l.t),
                  chi(l.i, Sgn::Plus, l.t)};
        out.insert(out.end(), defn.begin(), defn.end());
        break;
      }
      case Letter::Kind::Torus: {
        if (l.t == 1) break;
        if (l.t != -1)
          fail(ErrorCode::NonIntegralParameter, "torus parameter must be +-1");
        // h_i(-1) = wtilde_i(-1) wtilde_i(1)^{-1} = wtilde_i(-1) wtilde_i(-1)
        for (int rep = 0; rep < 2; ++rep) {
          out.push_back(chi(l.i, Sgn::Plus, Rat(-1)));
          out.push_back(chi(l.i, Sgn::Minus, Rat(1)));
          out.push_back(chi(l.i, Sgn::Plus, Rat(-1)));
        }
        break;
      }
    }
  }
  return out;
}

} // namespace kmchev
