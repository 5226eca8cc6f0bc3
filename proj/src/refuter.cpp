#include "patholab/refuter.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cdcl.hpp"
#include "patholab/normal_form.hpp"
#include "patholab/parser.hpp"

namespace patholab::refuter {

namespace {

// Conflicts allowed per ground satisfiability check.
constexpr long kConflictLimit = 20000;

// ---------------------------------------------------------------------------
// Clause templates

struct TermTemplate {
  int var = -1;  // index into the template's variables, or -1
  std::string symbol;
  bool constant = false;
  std::vector<TermTemplate> args;
};

struct LiteralTemplate {
  bool negated;
  bool membership;
  TermTemplate lhs;
  TermTemplate rhs;
};

struct ClauseTemplate {
  int sentence;
  std::vector<std::string> vars;
  std::vector<LiteralTemplate> literals;
  Formula formula;  // forall vars: clause
};

TermTemplate compile(const Term& t, const std::vector<std::string>& vars) {
  TermTemplate out;
  switch (t.kind()) {
    case TermKind::Variable: {
      auto it = std::find(vars.begin(), vars.end(), t.name());
      if (it == vars.end()) throw std::logic_error("unbound variable in clause: " + t.name());
      out.var = static_cast<int>(it - vars.begin());
      break;
    }
    case TermKind::Constant:
      out.symbol = t.name();
      out.constant = true;
      break;
    case TermKind::FnApp:
      out.symbol = t.name();
      for (const auto& a : t.args()) out.args.push_back(compile(a, vars));
      break;
    case TermKind::SetAbs:
      throw std::logic_error("set abstraction in clause");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground terms and atoms, hash-consed

class GroundStore {
 public:
  int intern_term(const std::string& symbol, std::vector<int> args) {
    std::string key = symbol;
    for (int a : args) key += "," + std::to_string(a);
    auto it = term_index_.find(key);
    if (it != term_index_.end()) return it->second;
    int depth = 1;
    std::vector<Term> arg_terms;
    for (int a : args) {
      depth = std::max(depth, depths_[a] + 1);
      arg_terms.push_back(terms_[a]);
    }
    Term t = args.empty() ? Term::constant(symbol) : Term::fn_app(symbol, std::move(arg_terms));
    int id = static_cast<int>(terms_.size());
    terms_.push_back(t);
    printed_.push_back(print(t));
    depths_.push_back(depth);
    term_index_.emplace(std::move(key), id);
    return id;
  }

  int instantiate(const TermTemplate& tt, const std::vector<int>& sigma) {
    if (tt.var >= 0) return sigma[tt.var];
    std::vector<int> args;
    args.reserve(tt.args.size());
    for (const auto& a : tt.args) args.push_back(instantiate(a, sigma));
    return intern_term(tt.symbol, std::move(args));
  }

  int intern_atom(bool membership, int lhs, int rhs) {
    std::string key = (membership ? "in," : "eq,") + std::to_string(lhs) + "," + std::to_string(rhs);
    auto it = atom_index_.find(key);
    if (it != atom_index_.end()) return it->second;
    int id = static_cast<int>(atoms_.size());
    atoms_.push_back(membership ? Formula::membership(terms_[lhs], terms_[rhs])
                                : Formula::equality(terms_[lhs], terms_[rhs]));
    atom_index_.emplace(std::move(key), id);
    return id;
  }

  const Term& term(int id) const { return terms_[id]; }
  const std::string& printed(int id) const { return printed_[id]; }
  const Formula& atom(int id) const { return atoms_[id]; }
  int num_atoms() const { return static_cast<int>(atoms_.size()); }

 private:
  std::vector<Term> terms_;
  std::vector<std::string> printed_;
  std::vector<int> depths_;
  std::vector<Formula> atoms_;
  std::unordered_map<std::string, int> term_index_;
  std::unordered_map<std::string, int> atom_index_;
};

struct Instance {
  int clause_template;
  std::vector<int> tuple;
  std::vector<sat::Lit> literals;  // in template order, duplicates kept
  bool tautology;
};

// ---------------------------------------------------------------------------
// Search state

class Search {
 public:
  Search(const Theory& t, const Budget& b) : theory_(t), budget_(b) {}

  RefuteResult run() {
    BudgetExhausted exhausted{budget_, 0, 0, ""};
    if (!prepare(exhausted.reason)) return exhausted;
    for (int depth = 1; depth <= budget_.max_instantiation_depth; ++depth) {
      extend_universe(depth);
      if (!instantiate_level(depth)) {
        exhausted.steps_used = steps_;
        exhausted.reason = "step budget exhausted while instantiating depth " + std::to_string(depth);
        return exhausted;
      }
      sat::Solver solver(store_.num_atoms());
      std::vector<int> solver_to_instance;
      for (std::size_t i = 0; i < instances_.size(); ++i) {
        if (instances_[i].tautology) continue;
        solver.add_clause(instances_[i].literals);
        solver_to_instance.push_back(static_cast<int>(i));
      }
      auto result = solver.solve(kConflictLimit);
      if (result == sat::Solver::Result::Unsat) {
        Proof p = emit(solver, solver_to_instance);
        p.depth_used = depth;
        p.steps_used = steps_;
        return p;
      }
      if (result == sat::Solver::Result::Unknown) {
        exhausted.steps_used = steps_;
        exhausted.reason = "conflict limit reached at depth " + std::to_string(depth);
        return exhausted;
      }
      exhausted.depth_reached = depth;
    }
    exhausted.steps_used = steps_;
    exhausted.reason = "ground instances up to depth " + std::to_string(budget_.max_instantiation_depth) +
                       " are satisfiable";
    return exhausted;
  }

 private:
  bool prepare(std::string& reason) {
    VarSet taken;
    for (const auto& s : theory_.sentences) {
      VarSet n = all_names(s);
      taken.insert(n.begin(), n.end());
    }
    int counter = 0;
    std::function<std::string()> next = [&]() {
      std::string name;
      do {
        name = "sk" + std::to_string(counter++);
      } while (taken.contains(name));
      return name;
    };
    for (const auto& [name, arity] : theory_.functions) functions_.emplace(name, arity);
    for (const auto& c : theory_.constants) constants_.insert(c);

    for (std::size_t i = 0; i < theory_.sentences.size(); ++i) {
      nf::SkolemForm sk = nf::skolemize(theory_.sentences[i], next);
      for (const auto& [name, arity] : sk.skolem_symbols) {
        if (arity == 0) {
          constants_.insert(name);
        } else {
          functions_.emplace(name, arity);
        }
      }
      std::vector<nf::Clause> clauses;
      if (!nf::clausify(sk.matrix, clauses, static_cast<std::size_t>(std::max(1L, budget_.max_steps)))) {
        reason = "clause form of sentence " + std::to_string(i) + " exceeds the step budget";
        return false;
      }
      skolem_forms_.push_back(sk.sentence());
      for (const auto& c : clauses) {
        ClauseTemplate ct;
        ct.sentence = static_cast<int>(i);
        VarSet fv = free_vars(nf::clause_formula(c));
        for (const auto& u : sk.universals) {
          if (fv.contains(u)) ct.vars.push_back(u);
        }
        for (const auto& lit : c) {
          const Formula& atom = lit.kind() == FormulaKind::Not ? lit.child() : lit;
          ct.literals.push_back({lit.kind() == FormulaKind::Not, atom.kind() == FormulaKind::Membership,
                                 compile(atom.lhs_term(), ct.vars), compile(atom.rhs_term(), ct.vars)});
        }
        Formula f = nf::clause_formula(c);
        for (auto it = ct.vars.rbegin(); it != ct.vars.rend(); ++it) f = Formula::forall(*it, f);
        ct.formula = f;
        templates_.push_back(std::move(ct));
      }
    }
    return true;
  }

  // Ground terms of depth exactly `depth`, sorted by printed form.
  void extend_universe(int depth) {
    std::vector<int> layer;
    if (depth == 1) {
      for (const auto& c : constants_) layer.push_back(store_.intern_term(c, {}));
      if (layer.empty()) layer.push_back(store_.intern_term("c0", {}));
    } else {
      std::size_t old_size = universe_.size();
      std::size_t prev_start = layer_start_.back();
      for (const auto& [name, arity] : functions_) {
        std::vector<std::size_t> idx(arity, 0);
        while (true) {
          bool fresh = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= prev_start; });
          if (fresh) {
            std::vector<int> args;
            for (std::size_t i : idx) args.push_back(universe_[i]);
            layer.push_back(store_.intern_term(name, std::move(args)));
          }
          std::size_t k = arity;
          while (k > 0) {
            if (++idx[k - 1] < old_size) break;
            idx[k - 1] = 0;
            --k;
          }
          if (k == 0) break;
        }
      }
      std::sort(layer.begin(), layer.end(),
                [&](int a, int b) { return store_.printed(a) < store_.printed(b); });
      layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
    }
    layer_start_.push_back(universe_.size());
    universe_.insert(universe_.end(), layer.begin(), layer.end());
  }

  // All instances whose tuple uses at least one term of the newest layer.
  bool instantiate_level(int depth) {
    std::size_t fresh_from = layer_start_.back();
    std::size_t n = universe_.size();
    for (std::size_t ti = 0; ti < templates_.size(); ++ti) {
      const auto& ct = templates_[ti];
      std::size_t k = ct.vars.size();
      if (k == 0) {
        if (depth == 1 && !add_instance(ti, {})) return false;
        continue;
      }
      std::vector<std::size_t> idx(k, 0);
      while (true) {
        bool fresh = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= fresh_from; });
        if (fresh) {
          std::vector<int> tuple;
          for (std::size_t i : idx) tuple.push_back(universe_[i]);
          if (!add_instance(ti, std::move(tuple))) return false;
        }
        std::size_t pos = k;
        while (pos > 0) {
          if (++idx[pos - 1] < n) break;
          idx[pos - 1] = 0;
          --pos;
        }
        if (pos == 0) break;
      }
    }
    return true;
  }

  bool add_instance(std::size_t ti, std::vector<int> tuple) {
    if (steps_ >= budget_.max_steps) return false;
    ++steps_;
    const auto& ct = templates_[ti];
    Instance inst{static_cast<int>(ti), std::move(tuple), {}, false};
    for (const auto& lt : ct.literals) {
      int lhs = store_.instantiate(lt.lhs, inst.tuple);
      int rhs = store_.instantiate(lt.rhs, inst.tuple);
      int atom = store_.intern_atom(lt.membership, lhs, rhs);
      inst.literals.push_back(lt.negated ? sat::neg_lit(atom) : sat::pos_lit(atom));
    }
    for (sat::Lit l : inst.literals) {
      if (std::find(inst.literals.begin(), inst.literals.end(), sat::negate(l)) != inst.literals.end()) {
        inst.tautology = true;
      }
    }
    instances_.push_back(std::move(inst));
    return true;
  }

  // -------------------------------------------------------------------------
  // Proof emission

  Formula literal_formula(sat::Lit l) const {
    const Formula& a = store_.atom(sat::atom_of(l));
    return (l & 1) ? Formula::negation(a) : a;
  }

  Formula clause_formula(std::vector<sat::Lit> lits) const {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    nf::Clause c;
    for (sat::Lit l : lits) c.push_back(literal_formula(l));
    return nf::clause_formula(c);
  }

  int push(Proof& p, Rule r, std::vector<int> premises, Formula f) {
    int id = static_cast<int>(p.steps.size()) + 1;
    p.steps.push_back({id, r, std::move(premises), std::move(f)});
    return id;
  }

  int axiom_step(Proof& p, int sentence) {
    auto it = axiom_ids_.find(sentence);
    if (it != axiom_ids_.end()) return it->second;
    int a = push(p, Rule::Axiom, {}, theory_.sentences[sentence]);
    int s = push(p, Rule::Skolem, {a}, skolem_forms_[sentence]);
    axiom_ids_[sentence] = s;
    return s;
  }

  int template_step(Proof& p, int ti) {
    auto it = template_ids_.find(ti);
    if (it != template_ids_.end()) return it->second;
    int sk = axiom_step(p, templates_[ti].sentence);
    int id = push(p, Rule::Clausify, {sk}, templates_[ti].formula);
    template_ids_[ti] = id;
    return id;
  }

  int clause_step(Proof& p, const sat::Solver& solver, const std::vector<int>& solver_to_instance, int cid) {
    auto it = clause_ids_.find(cid);
    if (it != clause_ids_.end()) return it->second;
    int id;
    if (solver.is_input(cid)) {
      const Instance& inst = instances_[solver_to_instance[cid]];
      int premise = template_step(p, inst.clause_template);
      nf::Clause lits;
      for (sat::Lit l : inst.literals) lits.push_back(literal_formula(l));
      id = push(p, Rule::Inst, {premise}, nf::clause_formula(lits));
    } else {
      const sat::Chain& chain = solver.derivation(cid);
      id = clause_step(p, solver, solver_to_instance, chain.start);
      std::vector<sat::Lit> current = solver.clause(chain.start);
      for (const auto& [other, pivot] : chain.steps) {
        int other_id = clause_step(p, solver, solver_to_instance, other);
        std::vector<sat::Lit> next;
        for (sat::Lit l : current) {
          if (sat::atom_of(l) != pivot) next.push_back(l);
        }
        for (sat::Lit l : solver.clause(other)) {
          if (sat::atom_of(l) != pivot) next.push_back(l);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        id = push(p, Rule::Resolve, {id, other_id}, clause_formula(next));
        current = std::move(next);
      }
    }
    clause_ids_[cid] = id;
    return id;
  }

  Proof emit(const sat::Solver& solver, const std::vector<int>& solver_to_instance) {
    Proof p;
    axiom_ids_.clear();
    template_ids_.clear();
    clause_ids_.clear();
    clause_step(p, solver, solver_to_instance, solver.empty_clause());
    return p;
  }

  const Theory& theory_;
  Budget budget_;
  std::set<std::string> constants_;
  std::set<std::pair<std::string, std::size_t>> functions_;
  std::vector<Formula> skolem_forms_;
  std::vector<ClauseTemplate> templates_;
  GroundStore store_;
  std::vector<int> universe_;
  std::vector<std::size_t> layer_start_;
  std::vector<Instance> instances_;
  long steps_ = 0;

  std::map<int, int> axiom_ids_;
  std::map<int, int> template_ids_;
  std::map<int, int> clause_ids_;
};

}  // namespace

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Axiom: return "axiom";
    case Rule::Skolem: return "skolem";
    case Rule::Clausify: return "clausify";
    case Rule::Inst: return "inst";
    case Rule::Resolve: return "resolve";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& s) {
  for (Rule r : {Rule::Axiom, Rule::Skolem, Rule::Clausify, Rule::Inst, Rule::Resolve}) {
    if (s == rule_name(r)) return r;
  }
  return std::nullopt;
}

RefuteResult refute(const Theory& t, const Budget& b) { return Search(t, b).run(); }

PathoResult patho_check(const NearlyClosed& a, const Budget& b) {
  Theory t = build_cosi_theory(a);
  auto r = refute(t, b);
  if (auto* p = std::get_if<Proof>(&r)) return ProvedPatho{std::move(*p)};
  return Unknown{std::get<BudgetExhausted>(r)};
}

Formula close_with_constants(const Formula& f) {
  Formula g = f;
  for (const auto& v : free_vars(f)) g = substitute(g, v, Term::constant(v));
  return g;
}

std::string serialize_proof(const Proof& p) {
  std::ostringstream out;
  out << "# depth " << p.depth_used << " steps " << p.steps_used << "\n";
  for (const auto& s : p.steps) {
    out << s.id << ' ' << rule_name(s.rule) << ' ';
    if (s.premises.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < s.premises.size(); ++i) out << (i ? "," : "") << s.premises[i];
    }
    out << ' ' << print(s.formula) << '\n';
  }
  return out.str();
}

Proof parse_proof(const std::string& text) {
  Proof p;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key;
      while (meta >> key) {
        if (key == "depth") meta >> p.depth_used;
        if (key == "steps") meta >> p.steps_used;
      }
      continue;
    }
    std::istringstream fields(line);
    std::string id, rule, premises;
    if (!(fields >> id >> rule >> premises)) {
      throw std::invalid_argument("proof line " + std::to_string(line_no) + ": expected id, rule and premises");
    }
    auto r = rule_from_name(rule);
    if (!r) throw std::invalid_argument("proof line " + std::to_string(line_no) + ": unknown rule " + rule);
    ProofStep step{std::stoi(id), *r, {}, {}};
    if (premises != "-") {
      std::istringstream ps(premises);
      std::string item;
      while (std::getline(ps, item, ',')) step.premises.push_back(std::stoi(item));
    }
    std::string rest;
    std::getline(fields, rest);
    step.formula = close_with_constants(parse(rest));
    p.steps.push_back(std::move(step));
  }
  return p;
}

}  // namespace patholab::refuter
