#include "greenkernel/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

#include <CLI11.hpp>
#include <json.hpp>

#include "greenkernel/audit.hpp"
#include "greenkernel/error.hpp"
#include "greenkernel/frobform.hpp"
#include "greenkernel/green.hpp"
#include "greenkernel/hopftower.hpp"

namespace greenkernel {

namespace {

using ojson = nlohmann::ordered_json;

struct Config {
  std::uint32_t p = 2;
  std::uint32_t n = 1;
  std::uint32_t r = 1;
  std::uint32_t s = 1;
  std::uint32_t deg = 0;
  std::size_t budget = kDefaultSizeBudget;
  std::string format = "text";
  std::string out_path;
  std::size_t jobs = 1;
  std::string group;
  std::string group_file;
  std::string profile;
  std::string target_profile;
  std::string form;
  std::string images;
  std::string k;
  std::string h;
  std::string family = "all";
  std::string battery;
  bool no_timing = false;
};

/// What a command produced: JSON and text renderings plus an exit code.
struct Result {
  ojson json;
  std::string text;
  int code = kExitOk;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

std::uint64_t parse_number(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 18) {
    throw InputError("malformed " + what + ": '" + s + "'");
  }
  return std::stoull(s);
}

std::vector<std::uint32_t> parse_profile(const std::string& s) {
  if (s.empty()) throw InputError("--profile is required, e.g. --profile 4,2");
  std::vector<std::uint32_t> out;
  for (const auto& part : split(s, ',')) out.push_back(static_cast<std::uint32_t>(parse_number(part, "profile entry")));
  return out;
}

Vec parse_vector(const std::string& s, const PrimeField& f, std::size_t dim) {
  Vec v;
  for (const auto& part : split(s, ',')) v.push_back(static_cast<Residue>(parse_number(part, "vector entry") % f.p()));
  if (v.size() != dim) {
    throw InputError("vector '" + s + "' needs " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
  }
  return v;
}

std::size_t resolve_budget(const CLI::App& app, const Config& c) {
  if (app.count("--budget") > 0) return c.budget;
  if (const char* env = std::getenv("GREENKERNEL_BUDGET")) {
    return static_cast<std::size_t>(parse_number(env, "GREENKERNEL_BUDGET"));
  }
  return kDefaultSizeBudget;
}

GroupPtr load_group(const Config& c) {
  if (!c.group_file.empty()) {
    std::ifstream in(c.group_file);
    if (!in) throw InputError("cannot read group file: " + c.group_file);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_group_file(buf.str());
  }
  if (c.group.empty()) throw InputError("--group or --group-file is required");
  return named_group(c.group);
}

std::string group_label(const Config& c) { return c.group_file.empty() ? c.group : c.group_file; }

/// "G" or empty for G itself, "1", "sylow", or generators "(1 2 3);(1 2)".
GroupPtr parse_subgroup(const std::string& text, const GroupPtr& g, std::uint32_t p) {
  if (text.empty() || text == "G") return g;
  if (text == "1") return group_from_generators(g->degree(), {});
  if (text == "sylow") return sylow(*g, p);
  std::vector<Perm> gens;
  for (const auto& part : split(text, ';')) {
    Perm x = parse_cycles(part, g->degree());
    if (!g->contains(x)) throw InputError("subgroup generator " + part + " is not in the group");
    gens.push_back(std::move(x));
  }
  return subgroup(*g, std::move(gens));
}

template <class Ring>
ojson poly_terms(const TruncPoly<Ring>& f) {
  ojson terms = ojson::array();
  for (const auto& [exps, c] : f.graded_terms()) {
    ojson t;
    t["exponents"] = exps;
    if constexpr (std::is_same_v<Ring, PrimeField>) {
      t["coefficient"] = c;
    } else {
      t["coefficient"] = c.get_str();
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

/// psi(x) over l left and l right variables, printed as sums of a(x)b.
std::string tensor_string(const FpPoly& f, std::size_t l) {
  if (f.is_zero()) return "0";
  auto side = [&](const Exponents& e, std::size_t from) {
    std::string out;
    for (std::size_t v = 0; v < l; ++v) {
      const std::uint32_t k = e[from + v];
      if (k == 0) continue;
      out += l == 1 ? "x" : "x" + std::to_string(v + 1);
      if (k > 1) out += "^" + std::to_string(k);
    }
    return out.empty() ? std::string("1") : out;
  };
  std::string out;
  for (const auto& [exps, c] : f.graded_terms()) {
    if (!out.empty()) out += " + ";
    if (c != 1) out += std::to_string(c);
    out += side(exps, 0) + "⊗" + side(exps, l);
  }
  return out;
}

ojson matrix_json(const FpMatrix& m) {
  ojson rows = ojson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return rows;
}

std::string matrix_text(const FpMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += "  [";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) out += " ";
      out += std::to_string(m(r, c));
    }
    out += "]\n";
  }
  return out;
}

ojson element_json(const LocalAlgebra& a, const Vec& v) { return ojson{{"text", a.element_string(v)}, {"vector", v}}; }

Result fgl_show(const Config& c) {
  const std::uint64_t q = checked_power(c.p, c.n);
  const std::uint32_t deg = c.deg == 0 ? static_cast<std::uint32_t>(q) : c.deg;
  if (deg < q) throw InputError("--deg must be at least p^n = " + std::to_string(q));
  if (deg > c.budget) throw BudgetError("truncation degree exceeds the size budget", deg);
  const FglPtr f = cached_fgl(c.p, c.n, deg);
  const std::vector<std::string> xy{"x", "y"};
  const std::vector<std::string> x{"x"};
  Result res;
  res.json = {{"p", c.p}, {"n", c.n}, {"deg", deg},
              {"law", {{"text", f->law().to_string(xy)}, {"terms", poly_terms(f->law())}}},
              {"inverse", {{"text", f->inverse_series().to_string(x)}, {"terms", poly_terms(f->inverse_series())}}}};
  res.text = "Honda formal group law over F_" + std::to_string(c.p) + ", height " + std::to_string(c.n) +
             ", terms of degree < " + std::to_string(deg) + " in each variable\n" +
             "F(x, y) = " + f->law().to_string(xy) + "\n" + "iota(x) = " + f->inverse_series().to_string(x) + "\n";
  return res;
}

ojson hopf_json(const HopfReport& h) {
  return {{"well_defined", h.well_defined}, {"coassociative", h.coassociative}, {"counital", h.counital},
          {"antipode", h.antipode},         {"cocommutative", h.cocommutative}, {"all", h.all()}};
}

Result tower_show(const Config& c) {
  const std::uint64_t q = checked_power(c.p, c.n);
  const std::uint64_t cap = checked_power(q, c.r);
  if (cap > c.budget) throw BudgetError("level dimension exceeds the size budget", cap);
  const auto level = honda_level(c.p, c.n, c.r);
  const auto& h = level->hopf;
  const std::vector<std::string> x{"x"};
  const std::string psi = h.coproduct.empty() ? "1⊗1" : tensor_string(h.coproduct[0], 1);
  const std::string chi = h.antipode.empty() ? "1" : h.antipode[0].to_string(x);
  Result res;
  ojson coproduct = ojson::array();
  for (const auto& poly : h.coproduct) coproduct.push_back({{"text", tensor_string(poly, 1)}, {"terms", poly_terms(poly)}});
  ojson antipode = ojson::array();
  for (const auto& poly : h.antipode) antipode.push_back({{"text", poly.to_string(x)}, {"terms", poly_terms(poly)}});
  res.json = {{"p", c.p},
              {"n", c.n},
              {"r", c.r},
              {"dim", level->algebra()->dim()},
              {"profile", level->algebra()->profile()},
              {"coproduct", coproduct},
              {"antipode", antipode},
              {"counit", "augmentation"}};
  res.text = "H_" + std::to_string(c.r) + " = F_" + std::to_string(c.p) + "[x]/(x^" + std::to_string(cap) +
             "), dim " + std::to_string(level->algebra()->dim()) + "\n" + "ψ(x) = " + psi + "\n" + "χ(x) = " + chi +
             "\n" + "ε(x) = 0\n";
  return res;
}

Result tower_check(const Config& c) {
  const std::uint64_t q = checked_power(c.p, c.n);
  if (c.r < 1 || c.s < 1) throw InputError("--r and --s must be at least 1");
  const std::uint64_t cap = checked_power(q, c.r);
  if (cap > c.budget) throw BudgetError("level dimension exceeds the size budget", cap);
  const HopfReport hr = hopf_check(honda_level(c.p, c.n, c.r)->hopf);
  const PdivReport pr = pdiv_check(c.p, c.n, c.r, c.s, c.budget);
  ojson squares = ojson::object();
  for (const auto& [name, ok] : pr.squares) squares[name] = ok;
  Result res;
  res.json = {{"p", c.p},
              {"n", c.n},
              {"r", c.r},
              {"s", c.s},
              {"axioms", hopf_json(hr)},
              {"pdiv",
               {{"kernel_dim", pr.kernel_dim},
                {"ideal_dim", pr.ideal_dim},
                {"kernel_is_ideal", pr.kernel_is_ideal},
                {"p_power_vanishes", pr.p_power_vanishes},
                {"surj_hopf", pr.surj_hopf},
                {"inj_hopf", pr.inj_hopf},
                {"surj_onto", pr.surj_onto},
                {"inj_into", pr.inj_into},
                {"squares", squares},
                {"all", pr.all()}}}};
  std::ostringstream t;
  auto yes = [](bool b) { return b ? "ok" : "FAIL"; };
  t << "H_" << c.r << " Hopf axioms: well-defined " << yes(hr.well_defined) << ", coassociative "
    << yes(hr.coassociative) << ", counit " << yes(hr.counital) << ", antipode " << yes(hr.antipode)
    << ", cocommutative " << yes(hr.cocommutative) << "\n";
  t << "ker(H_" << c.r + c.s << " -> H_" << c.r << "): dim " << pr.kernel_dim << ", ideal of [p^" << c.r
    << "](x) dim " << pr.ideal_dim << " " << yes(pr.kernel_is_ideal) << "\n";
  t << "[p^" << c.r << "](x) = 0 in H_" << c.r << ": " << yes(pr.p_power_vanishes) << "\n";
  t << "tower maps: surjection Hopf " << yes(pr.surj_hopf) << ", onto " << yes(pr.surj_onto) << "; injection Hopf "
    << yes(pr.inj_hopf) << ", into " << yes(pr.inj_into) << "\n";
  for (const auto& [name, ok] : pr.squares) t << "square " << name << ": " << yes(ok) << "\n";
  res.text = t.str();
  res.code = hr.all() && pr.all() ? kExitOk : kExitCheckFailed;
  return res;
}

AlgebraPtr algebra_for(const Config& c, std::string& label) {
  if (!c.group.empty() || !c.group_file.empty()) {
    label = "A(" + group_label(c) + ")";
    return value_general(load_group(c), make_green_params(c.p, c.n, c.budget)).algebra;
  }
  const auto profile = parse_profile(c.profile);
  std::uint64_t dim = 1;
  for (auto q : profile) {
    dim *= q;
    if (dim > c.budget) throw BudgetError("algebra dimension exceeds the size budget", dim);
  }
  label = "F_" + std::to_string(c.p) + " profile " + c.profile;
  return make_algebra(c.p, profile);
}

Result frob_check(const Config& c) {
  std::string label;
  const AlgebraPtr a = algebra_for(c, label);
  const Vec covector = c.form.empty() ? canonical_form(a).covector : parse_vector(c.form, a->field(), a->dim());
  const FormCheck fc = is_frobenius_form(a, covector);
  Result res;
  ojson dual = ojson::array();
  std::string dual_text;
  if (fc.form) {
    for (std::size_t j = 0; j < a->dim(); ++j) {
      const Vec v = fc.form->dual_basis.column(j);
      dual.push_back(element_json(*a, v));
      dual_text += "  e_" + std::to_string(j) + " = " + a->element_string(a->basis_vector(j)) + "  ->  " +
                   a->element_string(v) + "\n";
    }
  }
  res.json = {{"algebra", label},        {"dim", a->dim()},          {"form", covector},
              {"frobenius", fc.frobenius}, {"pairing_rank", fc.pairing_rank}, {"dual_basis", dual}};
  res.text = label + ", dim " + std::to_string(a->dim()) + "\nform: " + nlohmann::json(covector).dump() +
             "\npairing rank " + std::to_string(fc.pairing_rank) + (fc.frobenius ? ": Frobenius\n" : ": degenerate\n") +
             (fc.form ? "dual basis:\n" + dual_text : "");
  res.code = fc.frobenius ? kExitOk : kExitCheckFailed;
  return res;
}

Result frob_gysin(const Config& c) {
  const auto a = make_algebra(c.p, parse_profile(c.profile));
  if (c.target_profile.empty()) throw InputError("--target-profile is required");
  const auto b = make_algebra(c.p, parse_profile(c.target_profile));
  if (a->dim() > c.budget || b->dim() > c.budget) {
    throw BudgetError("algebra dimension exceeds the size budget", std::max(a->dim(), b->dim()));
  }
  std::vector<Vec> images;
  for (const auto& part : split(c.images, ';')) images.push_back(parse_vector(part, b->field(), b->dim()));
  if (images.size() != a->num_generators()) {
    throw InputError("--images needs one vector per generator (" + std::to_string(a->num_generators()) + ")");
  }
  const AlgebraMap f = algebra_map(a, b, images);
  const FrobeniusForm la = canonical_form(a);
  const FrobeniusForm lb = canonical_form(b);
  const AlgebraMap g = gysin(f, la, lb);
  const bool module = is_module_map(f, g);
  Result res;
  res.json = {{"source_profile", a->profile()}, {"target_profile", b->profile()}, {"form_source", la.covector},
              {"form_target", lb.covector},     {"gysin", matrix_json(g.matrix())}, {"module_map", module}};
  res.text = "gysin map B -> A for f: A -> B with canonical forms\n" + matrix_text(g.matrix()) +
             "module map: " + (module ? "yes" : "no") + "\n";
  res.code = module ? kExitOk : kExitCheckFailed;
  return res;
}

bool is_abelian_p_group(const PermGroup& g, std::uint32_t p) {
  return g.is_abelian() && p_part(g.order(), p) == g.order();
}

Result green_value(const Config& c) {
  const GreenParams params = make_green_params(c.p, c.n, c.budget);
  const GroupPtr g = load_group(c);
  const GreenValue v = value_general(g, params);
  const LocalAlgebra& a = *v.algebra;
  Result res;
  ojson shape;
  std::string shape_text;
  if (g->order() % c.p != 0) {
    shape["profile"] = ojson::array();
    shape_text = "F_" + std::to_string(c.p);
  } else if (is_abelian_p_group(*g, c.p)) {
    const auto type = abelian_decompose(g, c.p).type();
    const auto borel = value_abelian(type, params)->borel;
    shape["profile"] = borel->profile();
    shape_text = "profile " + nlohmann::json(borel->profile()).dump();
  } else {
    const auto node = build_node(g, params);
    shape["ambient_profile"] = node.sylow_value->borel->profile();
    ojson basis = ojson::array();
    shape_text = "inside A(P), P of type " + nlohmann::json(node.stable.sylow->type()).dump() + ", basis";
    for (const auto& b : node.stable.lim_basis) {
      basis.push_back(node.sylow_value->algebra->element_string(b));
      shape_text += " " + node.sylow_value->algebra->element_string(b) + ";";
    }
    shape_text.pop_back();
    shape["basis"] = basis;
  }
  ojson socle = ojson::array();
  std::string socle_text;
  for (const auto& z : socle_basis(a)) {
    socle.push_back(element_json(a, z));
    socle_text += (socle_text.empty() ? "" : ", ") + a.element_string(z);
  }
  res.json = {{"group", group_label(c)},   {"order", g->order()}, {"p", c.p},
              {"n", c.n},                  {"dim", a.dim()},      {"profile_or_basis", shape},
              {"socle", socle},            {"ind_one", element_json(a, v.ind_one)}};
  res.text = "A(" + group_label(c) + ") over F_" + std::to_string(c.p) + ", n = " + std::to_string(c.n) +
             ": dim " + std::to_string(a.dim()) + "\n" + "  " + shape_text + "\n" + "  socle: " + socle_text + "\n" +
             "  ind^G_1(1) = " + a.element_string(v.ind_one) + "\n";
  return res;
}

Result green_map(const Config& c, bool induction) {
  const GreenParams params = make_green_params(c.p, c.n, c.budget);
  const GroupPtr g = load_group(c);
  GreenFunctor f(g, params);
  const GroupPtr k = parse_subgroup(c.k, g, c.p);
  const GroupPtr h = parse_subgroup(c.h.empty() ? "sylow" : c.h, g, c.p);
  if (!h->is_subgroup_of(*k)) throw InputError("--h must be a subgroup of --k");
  const AlgebraMap m = induction ? f.ind(*k, *h) : f.res(*k, *h);
  const std::string name = induction ? "ind" : "res";
  Result res;
  res.json = {{"group", group_label(c)},
              {"map", name},
              {"k", k->description()},
              {"h", h->description()},
              {"source_dim", m.source()->dim()},
              {"target_dim", m.target()->dim()},
              {"matrix", matrix_json(m.matrix())}};
  res.text = name + "^K_H with K = " + k->description() + ", H = " + h->description() + ": " +
             std::to_string(m.source()->dim()) + " -> " + std::to_string(m.target()->dim()) + "\n" +
             matrix_text(m.matrix());
  return res;
}

Result green_stable(const Config& c) {
  const GreenParams params = make_green_params(c.p, c.n, c.budget);
  const GroupPtr g = load_group(c);
  const auto node = build_node(g, params);
  const auto& st = node.stable;
  const LocalAlgebra& ap = *node.sylow_value->algebra;
  ojson reps = ojson::array();
  for (const auto& x : st.double_coset_reps) reps.push_back(cycle_string(x));
  ojson basis = ojson::array();
  std::string basis_text;
  for (const auto& b : st.lim_basis) {
    basis.push_back(element_json(ap, b));
    basis_text += (basis_text.empty() ? "" : ", ") + ap.element_string(b);
  }
  Result res;
  res.json = {{"group", group_label(c)},
              {"sylow", node.sylow->description()},
              {"sylow_type", st.sylow->type()},
              {"double_coset_reps", reps},
              {"lim_dim", st.lim_basis.size()},
              {"colim_dim", st.colim_dim},
              {"lim_basis", basis}};
  res.text = "Sylow " + node.sylow->description() + ", " + std::to_string(st.double_coset_reps.size()) +
             " double cosets\n" + "  lim: dim " + std::to_string(st.lim_basis.size()) + ", basis " + basis_text +
             "\n" + "  colim: dim " + std::to_string(st.colim_dim) + "\n";
  return res;
}

Result audit_result(const AuditReport& r) {
  Result res;
  res.json = to_json(r);
  std::ostringstream t;
  for (const auto& c : r.checks) {
    t << "[" << status_name(c.status) << "] " << c.name << " | " << c.instance;
    if (c.scalar) t << " | scalar " << *c.scalar;
    if (c.witness) t << " | " << *c.witness;
    t << "\n";
  }
  t << r.checks.size() << " checks: " << r.count(AuditStatus::exact) << " exact, "
    << r.count(AuditStatus::up_to_unit) << " up-to-unit, " << r.count(AuditStatus::fail) << " fail\n";
  res.text = t.str();
  res.code = r.count(AuditStatus::fail) == 0 ? kExitOk : kExitCheckFailed;
  return res;
}

Result audit_mackey_cmd(const Config& c) {
  const GreenParams params = make_green_params(c.p, c.n, c.budget);
  const GroupPtr g = load_group(c);
  std::vector<GroupPtr> family;
  if (c.family == "sylow") {
    family = sylow_family(g, c.p);
  } else if (c.family != "all") {
    throw InputError("--family must be 'all' or 'sylow'");
  }
  return audit_result(audit_mackey(g, group_label(c), params, family, AuditOptions{c.jobs, !c.no_timing}));
}

Result audit_assumptions_cmd(const Config& c) {
  const GreenParams params = make_green_params(c.p, c.n, c.budget);
  const auto battery = c.battery.empty() ? default_battery() : split(c.battery, ',');
  return audit_result(audit_assumptions(battery, params, AuditOptions{c.jobs, !c.no_timing}));
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Exact computations with the local Frobenius Green functor of a Honda formal group", "greenkernel"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kVersion));

  std::function<Result(const Config&)> action;
  CLI::App* leaf = nullptr;
  auto command = [&](CLI::App* parent, const std::string& name, const std::string& help,
                     std::function<Result(const Config&)> run) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_option("--p", c.p, "prime")->capture_default_str();
    sub->add_option("--n", c.n, "height")->capture_default_str();
    sub->add_option("--budget", c.budget, "largest algebra dimension (default 256 or $GREENKERNEL_BUDGET)");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    sub->add_option("--out", c.out_path, "write the result to this file");
    sub->callback([&, sub, run] {
      leaf = sub;
      action = run;
    });
    return sub;
  };
  auto group_options = [&](CLI::App* sub) {
    auto* name = sub->add_option("--group", c.group, "named group: C<n>, S<n>, D<n>, A4, V4");
    auto* file = sub->add_option("--group-file", c.group_file, "generators in cycle notation, one per line");
    name->excludes(file);
  };

  auto* fgl = app.add_subcommand("fgl", "formal group laws")->require_subcommand(1, 1);
  command(fgl, "show", "print the Honda law and its inverse series", fgl_show)
      ->add_option("--deg", c.deg, "truncation degree (default p^n)");

  auto* tower = app.add_subcommand("tower", "the Hopf algebra tower H_r")->require_subcommand(1, 1);
  command(tower, "show", "print H_r with its coproduct and antipode", tower_show)->add_option("--r", c.r)->capture_default_str();
  auto* check = command(tower, "check", "check the Hopf axioms and the p-divisible structure", tower_check);
  check->add_option("--r", c.r)->capture_default_str();
  check->add_option("--s", c.s)->capture_default_str();

  auto* frob = app.add_subcommand("frob", "Frobenius forms")->require_subcommand(1, 1);
  auto* fcheck = command(frob, "check", "test a covector for nondegeneracy", frob_check);
  fcheck->add_option("--profile", c.profile, "truncation profile, e.g. 4,2 for F_p[x,y]/(x^4,y^2)");
  fcheck->add_option("--form", c.form, "covector entries (default: dual of the top basis element)");
  group_options(fcheck);
  auto* fgysin = command(frob, "gysin", "Gysin map of an algebra map f: A -> B", frob_gysin);
  fgysin->add_option("--profile", c.profile, "profile of A")->required();
  fgysin->add_option("--target-profile", c.target_profile, "profile of B")->required();
  fgysin->add_option("--images", c.images, "images of the generators of A in B, vectors separated by ';'")->required();

  auto* green = app.add_subcommand("green", "values and structure maps of the Green functor")->require_subcommand(1, 1);
  group_options(command(green, "value", "A(G)", green_value));
  for (const bool induction : {false, true}) {
    auto* sub = command(green, induction ? "ind" : "res", induction ? "ind^K_H: A(H) -> A(K)" : "res^K_H: A(K) -> A(H)",
                        [induction](const Config& cfg) { return green_map(cfg, induction); });
    group_options(sub);
    sub->add_option("--k", c.k, "K: 'G' (default), '1', 'sylow' or generators '(1 2 3);(1 2)'");
    sub->add_option("--h", c.h, "H <= K, same syntax (default 'sylow')");
  }
  group_options(command(green, "stable", "stable elements and the colimit dimension", green_stable));

  auto* audit = app.add_subcommand("audit", "axiom audits")->require_subcommand(1, 1);
  auto* mackey = command(audit, "mackey", "Mackey and Green functor axioms on subgroups of G", audit_mackey_cmd);
  group_options(mackey);
  mackey->add_option("--family", c.family, "'all' subgroups or 'sylow' = {1, P, G}")->capture_default_str();
  auto* assumptions = command(audit, "assumptions", "standing assumptions over a battery of groups", audit_assumptions_cmd);
  assumptions->add_option("--battery", c.battery, "comma separated group names (default C2,C3,V4,C4,C6,S3,A4)");
  for (auto* sub : {mackey, assumptions}) {
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--no-timing", c.no_timing, "report ms = 0 for byte-identical output");
  }

  std::vector<std::string> argv_store{"greenkernel"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    c.budget = resolve_budget(*leaf, c);
    if (c.jobs == 0) c.jobs = 1;
    Result res = action(c);
    const std::string body = c.format == "json" ? res.json.dump(2) + "\n" : res.text;
    if (c.out_path.empty()) {
      out << body;
    } else {
      std::ofstream file(c.out_path);
      if (!file) throw InputError("cannot write " + c.out_path);
      file << body;
    }
    return res.code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScopeError& e) {
    err << "out of scope: " << e.what() << "\n";
    return kExitScope;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitScope;
  } catch (const InvariantError& e) {
    err << "internal consistency error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace greenkernel
