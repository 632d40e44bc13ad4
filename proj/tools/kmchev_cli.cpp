#include "kmchev/arith.hpp"
#include "kmchev/errors.hpp"
#include "kmchev/freudenthal.hpp"
#include "kmchev/json_io.hpp"
#include "kmchev/wordlang.hpp"
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

using namespace kmchev;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json qmat_json(const QMat& m) {
  ordered_json rows = ordered_json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(rat_str(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json kvec_json(const KVec& k) {
  ordered_json a = ordered_json::array();
  for (long x : k) a.push_back(x);
  return a;
}

ordered_json coords_json(const RootCoords& c) {
  ordered_json a = ordered_json::array();
  for (const Int& x : c) a.push_back(x.get_str());
  return a;
}

IVec parse_lambda(const std::string& text, size_t rank) {
  IVec out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (cur.empty()) fail(ErrorCode::UsageError, "empty component in weight tuple");
      out.emplace_back(cur.c_str());
      cur.clear();
    } else if (isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+') {
      cur += ch;
    } else if (!isspace(static_cast<unsigned char>(ch))) {
      fail(ErrorCode::UsageError, "malformed weight tuple '" + text + "'");
    }
  }
  if (out.size() != rank)
    fail(ErrorCode::UsageError, "weight tuple has wrong rank for this matrix");
  return out;
}

std::vector<IVec> parse_lambdas(const std::string& text, size_t rank) {
  std::vector<IVec> out;
  std::string cur;
  for (char ch : text + ";") {
    if (ch == ';') {
      if (!cur.empty()) out.push_back(parse_lambda(cur, rank));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (out.empty()) fail(ErrorCode::UsageError, "no weights given");
  return out;
}

ModuleCollection build_collection(const Gcm& A, const std::vector<IVec>& lambdas, long depth) {
  std::vector<ModulePtr> mods;
  for (const IVec& l : lambdas) mods.push_back(TruncatedModule::build(A, l, depth));
  return ModuleCollection(std::move(mods));
}

std::vector<IVec> fundamental_lambdas(size_t rank) {
  std::vector<IVec> out;
  for (size_t i = 0; i < rank; ++i) {
    IVec l(rank, Int(0));
    l[i] = 1;
    out.push_back(std::move(l));
  }
  return out;
}

void emit(const ordered_json& j) { std::cout << j.dump() << "\n"; }

int run_classify(const std::string& file) {
  GcmFile f = load_gcm_file(file);
  ordered_json out;
  auto c = classify(f.gcm);
  out["type"] = classification_str(c);
  if (c.type == CartanType::Indefinite) out["hyperbolic"] = c.hyperbolic;
  auto rep = determinant_report(f.gcm);
  out["det"] = rep.det.get_str();
  if (rep.has_formula) {
    out["y_formula"] = rep.formula.get_str();
    out["y_formula_agrees"] = rep.equal ? "exact" : (rep.equal_abs ? "abs" : "no");
  }
  auto idx = lattice_index(f.gcm);
  out["index"] = idx ? ordered_json(idx->get_str()) : ordered_json("infinite");
  ordered_json sym = ordered_json::array();
  for (const Rat& d : symmetrize(f.gcm)) sym.push_back(rat_str(d));
  out["symmetrizer"] = sym;
  emit(out);
  return 0;
}

int run_roots(const std::string& file, long height_bound) {
  GcmFile f = load_gcm_file(file);
  ordered_json out = ordered_json::array();
  for (const RealRoot& r : real_roots_up_to_height(f.gcm, height_bound)) {
    ordered_json item;
    item["coords"] = coords_json(r.coords);
    item["height"] = height(r.coords).get_si();
    ordered_json w;
    ordered_json word = ordered_json::array();
    for (int j : r.witness.word) word.push_back(j + 1);
    w["word"] = word;
    w["simple"] = r.witness.simple + 1;
    item["witness"] = w;
    out.push_back(std::move(item));
  }
  emit(out);
  return 0;
}

int run_module(const std::string& file, const std::string& lambda_text, long depth,
               bool with_zbasis, bool with_actions) {
  GcmFile f = load_gcm_file(file);
  IVec lambda = parse_lambda(lambda_text, f.gcm.rank());
  auto m = TruncatedModule::build(f.gcm, lambda, depth);
  ordered_json out;
  ordered_json lam = ordered_json::array();
  for (const Int& x : lambda) lam.push_back(x.get_str());
  out["lambda"] = lam;
  out["depth"] = depth;
  out["total_dim"] = m->total_dim();
  ordered_json weights = ordered_json::array();
  for (const auto& [k, ws] : m->spaces()) {
    ordered_json item;
    item["k"] = kvec_json(k);
    item["dim"] = ws.dim;
    if (with_zbasis) {
      ordered_json monos = ordered_json::array();
      for (const Monomial& mono : ws.basis) {
        ordered_json letters = ordered_json::array();
        for (int l : mono.letters) letters.push_back(l + 1);
        monos.push_back(std::move(letters));
      }
      item["monomials"] = monos;
      item["zbasis"] = qmat_json(ws.zbasis);
    }
    if (with_actions) {
      ordered_json es = ordered_json::array(), fs = ordered_json::array();
      for (size_t i = 0; i < f.gcm.rank(); ++i) {
        es.push_back(qmat_json(ws.e_int[i]));
        long s = 0;
        for (long x : k) s += x;
        fs.push_back(s + 1 <= m->depth_bound() ? qmat_json(ws.f_int[i]) : ordered_json());
      }
      item["e"] = es;
      item["f"] = fs;
    }
    weights.push_back(std::move(item));
  }
  out["weights"] = weights;
  emit(out);
  return 0;
}

int run_eval(const std::string& file, const std::string& lambda_text, long depth,
             const std::string& word_text, long source_depth) {
  GcmFile f = load_gcm_file(file);
  IVec lambda = parse_lambda(lambda_text, f.gcm.rank());
  auto m = TruncatedModule::build(f.gcm, lambda, depth);
  Word w = parse_word(f.gcm, word_text);
  BlockOperator op = eval_word(m, w);
  ordered_json out;
  out["word"] = print_word(w);
  long valid = op.valid_source_depth(source_depth);
  out["valid_depth"] = valid;
  ordered_json blocks = ordered_json::array();
  for (const auto& [k, ws] : m->spaces()) {
    if (ws.dim == 0) continue;
    long s = 0;
    for (long x : k) s += x;
    if (s > valid) continue;
    ordered_json item;
    item["source"] = kvec_json(k);
    ordered_json targets = ordered_json::array();
    for (const auto& [tk, mat] : op.row(k)) {
      ordered_json t;
      t["target"] = kvec_json(tk);
      t["matrix"] = qmat_json(mat);
      targets.push_back(std::move(t));
    }
    item["targets"] = targets;
    blocks.push_back(std::move(item));
  }
  out["blocks"] = blocks;
  emit(out);
  return 0;
}

ordered_json witness_json(const IntegralityWitness& w) {
  ordered_json out;
  ordered_json lam = ordered_json::array();
  for (const Int& x : w.lambda) lam.push_back(x.get_str());
  out["lambda"] = lam;
  out["weight"] = kvec_json(w.weight);
  out["basis_index"] = w.basis_index;
  out["coefficient"] = rat_str(w.coefficient);
  out["inverse_side"] = w.inverse_side;
  return out;
}

int run_check_integral(const std::string& file, const std::string& lambdas_text, long depth,
                       const std::string& word_text, long probe) {
  GcmFile f = load_gcm_file(file);
  auto lambdas = lambdas_text.empty() ? fundamental_lambdas(f.gcm.rank())
                                      : parse_lambdas(lambdas_text, f.gcm.rank());
  ModuleCollection C = build_collection(f.gcm, lambdas, depth);
  Word w = parse_word(f.gcm, word_text);
  if (probe < 0) probe = std::max<long>(0, depth / 2);
  auto verdict = stabilizes_zform(C, w, probe);
  ordered_json out;
  out["verdict"] = verdict.integral ? "integral" : "non_integral";
  out["probe_depth"] = probe;
  if (verdict.witness) out["witness"] = witness_json(*verdict.witness);
  emit(out);
  return 0;
}

int run_factor(const std::string& file, const std::string& word_text, long budget,
               const std::string& lambdas_text, long depth, long probe) {
  GcmFile f = load_gcm_file(file);
  auto lambdas = lambdas_text.empty() ? fundamental_lambdas(f.gcm.rank())
                                      : parse_lambdas(lambdas_text, f.gcm.rank());
  ModuleCollection C = build_collection(f.gcm, lambdas, depth);
  Word w = parse_word(f.gcm, word_text);
  ArithContext ctx(f.gcm);
  BruhatOptions opts;
  opts.budget = budget;
  opts.probe_depth = probe;
  auto fac = bruhat_factor(ctx, C, w, opts);
  ordered_json out;
  out["gamma"] = print_word(fac.gamma);
  out["b"] = print_word(fac.b);
  out["certificate_depth"] = fac.certificate_depth;
  out["moves"] = fac.moves;
  emit(out);
  return 0;
}

int run_sl2_step(const std::string& p, const std::string& q, const std::string& r,
                 const std::string& s) {
  auto st = sl2_step(parse_rat(p), parse_rat(q), parse_rat(r), parse_rat(s));
  ordered_json out;
  ordered_json gamma = ordered_json::array();
  gamma.push_back(ordered_json::array({st.gamma[0].get_si(), st.gamma[1].get_si()}));
  gamma.push_back(ordered_json::array({st.gamma[2].get_si(), st.gamma[3].get_si()}));
  out["gamma"] = gamma;
  ordered_json upper = ordered_json::array();
  upper.push_back(ordered_json::array({rat_str(st.upper[0]), rat_str(st.upper[1])}));
  upper.push_back(ordered_json::array({rat_str(st.upper[2]), rat_str(st.upper[3])}));
  out["upper"] = upper;
  emit(out);
  return 0;
}

int run_reduce(const std::string& file, const std::string& word_text) {
  GcmFile f = load_gcm_file(file);
  Word w = parse_word(f.gcm, word_text);
  Word r = reduce_to_unit_generators(w);
  ordered_json out;
  out["word"] = print_word(r);
  out["letters"] = r.size();
  emit(out);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Kac-Moody Chevalley groups on truncated highest-weight modules"};
  app.require_subcommand(1);
  unsigned long long seed = 0;
  app.add_option("--seed", seed, "seed for sampling commands (core operations never sample)");

  long default_budget = 10000;
  if (const char* env = std::getenv("KMCHEV_BUDGET")) default_budget = std::atol(env);

  std::string file, lambda_text, lambdas_text, word_text;
  long height_bound = 5, depth = 6, probe = -1, budget = default_budget, source_depth = 2;
  bool with_zbasis = false, with_actions = false;
  std::string p, q, r, s;

  auto* c_classify = app.add_subcommand("classify", "classify a GCM file");
  c_classify->add_option("file", file)->required();

  auto* c_roots = app.add_subcommand("roots", "enumerate positive real roots");
  c_roots->add_option("file", file)->required();
  c_roots->add_option("--height", height_bound, "height bound")->required();

  auto* c_module = app.add_subcommand("module", "build a truncated highest-weight module");
  c_module->add_option("file", file)->required();
  c_module->add_option("--lambda", lambda_text, "dominant weight, e.g. 1,0")->required();
  c_module->add_option("--depth", depth)->required();
  c_module->add_flag("--zbasis", with_zbasis, "include integral bases");
  c_module->add_flag("--actions", with_actions, "include action matrices");

  auto* c_eval = app.add_subcommand("eval", "evaluate a word as a block operator");
  c_eval->add_option("file", file)->required();
  c_eval->add_option("--lambda", lambda_text)->required();
  c_eval->add_option("--depth", depth)->required();
  c_eval->add_option("--word", word_text)->required();
  c_eval->add_option("--source-depth", source_depth, "deepest source weight to report");

  auto* c_check = app.add_subcommand("check-integral", "Z-form stabilizer test");
  c_check->add_option("file", file)->required();
  c_check->add_option("--lambdas", lambdas_text,
                      "semicolon-separated weights (default: fundamental)");
  c_check->add_option("--depth", depth)->required();
  c_check->add_option("--word", word_text)->required();
  c_check->add_option("--probe", probe, "probe depth (default depth/2)");

  auto* c_factor = app.add_subcommand("factor", "Bruhat factorization g = gamma b");
  c_factor->add_option("file", file)->required();
  c_factor->add_option("--word", word_text)->required();
  c_factor->add_option("--budget", budget, "rewriting move budget");
  c_factor->add_option("--lambdas", lambdas_text);
  c_factor->add_option("--depth", depth);
  c_factor->add_option("--probe", probe, "certificate probe depth");

  auto* c_sl2 = app.add_subcommand("sl2-step", "rational SL2 Bruhat step");
  c_sl2->add_option("p", p)->required();
  c_sl2->add_option("q", q)->required();
  c_sl2->add_option("r", r)->required();
  c_sl2->add_option("s", s)->required();

  auto* c_reduce = app.add_subcommand("reduce", "expand an integral word over unit generators");
  c_reduce->add_option("file", file)->required();
  c_reduce->add_option("--word", word_text)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (*c_classify) return run_classify(file);
    if (*c_roots) return run_roots(file, height_bound);
    if (*c_module) return run_module(file, lambda_text, depth, with_zbasis, with_actions);
    if (*c_eval) return run_eval(file, lambda_text, depth, word_text, source_depth);
    if (*c_check) return run_check_integral(file, lambdas_text, depth, word_text, probe);
    if (*c_factor) {
      if (probe < 0) probe = 4;
      return run_factor(file, word_text, budget, lambdas_text, depth, probe);
    }
    if (*c_sl2) return run_sl2_step(p, q, r, s);
    if (*c_reduce) return run_reduce(file, word_text);
  } catch (const Error& e) {
    ordered_json err;
    err["error"]["code"] = error_code_name(e.code());
    err["error"]["message"] = e.what();
    std::cout << err.dump() << "\n";
    return e.code() == ErrorCode::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"]["code"] = "Internal";
    err["error"]["message"] = e.what();
    std::cout << err.dump() << "\n";
    return 1;
  }
  return 2;
}
