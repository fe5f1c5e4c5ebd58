#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ttwist/io.hpp"

using namespace ttwist;

namespace {

struct Inputs {
  std::string complex_path;
  std::string rep_path;
  std::string cocycle_path;
  std::string json_path;
};

struct Loaded {
  OrderedComplex k;
  Pi1Presentation pi;
  std::optional<Representation> rho;
  Theta theta;
};

std::unique_ptr<Loaded> load(const Inputs& in) {
  auto l = std::make_unique<Loaded>();
  l->k = load_complex(in.complex_path);
  if (!l->k.connected()) throw InputError("the complex must be connected");
  l->pi = fundamental_group(l->k);
  if (in.rep_path.empty()) l->rho.emplace(Representation::trivial(l->k, l->pi, 1));
  else l->rho.emplace(load_representation(in.rep_path, l->k, l->pi));
  if (!in.cocycle_path.empty()) l->theta = load_cocycle(in.cocycle_path, l->k);
  return l;
}

void emit(const Inputs& in, const Json& report) {
  if (in.json_path.empty()) return;
  if (in.json_path == "-") {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(in.json_path);
  if (!out) throw InputError("cannot write " + in.json_path);
  out << report.dump(2) << "\n";
}

std::string join(const std::vector<size_t>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

void print_stabilization(std::ostream& os, const StabilizationReport& r) {
  os << "  D  dim H^ev  dim H^od  saturation  comparison-iso\n";
  for (auto& l : r.levels)
    os << std::setw(3) << l.level << std::setw(10) << l.dims[0] << std::setw(10) << l.dims[1] << std::setw(12)
       << l.saturation << std::setw(16) << (l.comparison_iso ? "yes" : "no") << "\n";
  if (r.stabilized) os << "stabilized at D = " << r.stable_level << "\n";
  else os << "NOT stabilized within the level bound; dims above are the last level\n";
}

int run_cohomology(const Inputs& in, const std::string& model, int max_level) {
  auto l = load(in);
  const Representation& rho = *l->rho;
  Json report;
  auto betti = twisted_cochain_complex(l->k, rho).betti();
  std::cout << "complex: f-vector " << join(l->k.f_vector()) << "\n";
  std::cout << "H^q(K,E): " << join(betti) << "\n";
  report["f_vector"] = l->k.f_vector();
  report["betti"] = betti;
  int status = 0;
  std::optional<std::string> refusal;
  if (model == "mw" || model == "both") {
    try {
      MWComplex mw = mw_complex(l->k, rho, l->theta);
      std::cout << "MW: dim H^ev = " << mw.h_even() << ", dim H^od = " << mw.h_odd() << "\n";
      report["mw"] = {{"h_even", mw.h_even()}, {"h_odd", mw.h_odd()}};
    } catch (const MWObstruction& e) {
      std::cout << "MW: refused: " << e.what() << "\n";
      std::cout << "  obstruction in degree " << e.degree << ": " << cochain_label(l->k, e.degree, e.cochain) << "\n";
      report["mw"] = {{"refused", e.what()}, {"obstruction_degree", e.degree}, {"obstruction", to_json(e.cochain)}};
      refusal = e.what();
    }
  }
  if (model == "dupont" || model == "both") {
    Twist t = twist_from_theta(l->k, l->theta);
    DupontSpace du(l->k, rho);
    LadderOptions opts;
    opts.max_level = max_level;
    auto rep = stabilized_twisted_cohomology(du, t, opts);
    std::cout << "Dupont: dim H^ev = " << rep.dims[0] << ", dim H^od = " << rep.dims[1] << "\n";
    print_stabilization(std::cout, rep);
    report["dupont"] = to_json(rep);
    if (!rep.stabilized) status = 2;
  }
  // With the Dupont model available the MW refusal is informational.
  if (refusal && model == "mw") status = 2;
  emit(in, report);
  return status;
}

int run_torsion(const Inputs& in, const std::string& bases_path) {
  auto l = load(in);
  const Representation& rho = *l->rho;
  BasesInput bases;
  if (!bases_path.empty()) bases = load_bases(bases_path, l->k, rho);
  Json report;
  TorsionResult tau = reidemeister_torsion(l->k, rho, bases.untwisted);
  std::cout << "tau(K,E) = " << tau.value.coordinate().str() << "  (up to sign)\n";
  report["tau"] = to_json(tau);
  if (!l->theta.empty()) {
    MWComplex mw = mw_complex(l->k, rho, l->theta);
    TorsionResult mwt = tau_mw(mw, bases.twisted);
    TorsionResult tw = tau_twist(mw, tau.bases, bases.twisted);
    std::cout << "tau_MW = " << mwt.value.coordinate().str() << "  (up to sign)\n";
    std::cout << "tau_twist = " << tw.value.coordinate().str() << "  (up to sign; routes "
              << (tw.routes_agree ? "agree" : "DISAGREE") << ")\n";
    report["tau_mw"] = to_json(mwt);
    report["tau_twist"] = to_json(tw);
    emit(in, report);
    return tw.routes_agree ? 0 : 1;
  }
  emit(in, report);
  return 0;
}

int run_pages(const Inputs& in, int max_page, bool differentials) {
  auto l = load(in);
  MWComplex mw = mw_complex(l->k, *l->rho, l->theta);
  FilteredZ2Complex f = parity_filtration(mw.module);
  auto pages = compute_pages(f, max_page);
  std::cout << "  r  p  parity  dim\n";
  for (auto& page : pages)
    for (auto& c : page.cells)
      std::cout << std::setw(3) << page.r << std::setw(3) << c.p << std::setw(8) << (((c.n % 2) + 2) % 2)
                << std::setw(5) << c.dim() << "\n";
  auto ab = abutment(f);
  std::cout << "abutment: dim H^ev = " << mw.h_even() << ", dim H^od = " << mw.h_odd()
            << ", E_inf matches graded pieces: " << (ab.matches ? "yes" : "no") << "\n";
  Json report;
  report["pages"] = to_json(pages, differentials);
  report["abutment"] = {{"h_even", mw.h_even()}, {"h_odd", mw.h_odd()}, {"matches", ab.matches}};
  emit(in, report);
  return 0;
}

int run_subdivide(const Inputs& in) {
  auto l = load(in);
  auto r = subdivision_compare(l->k, *l->rho, l->theta);
  std::cout << "K : H^q = " << join(r.betti) << ", twisted (ev, od) = (" << r.h_even << ", " << r.h_odd << ")\n";
  std::cout << "K': H^q = " << join(r.sub_betti) << ", twisted (ev, od) = (" << r.sub_h_even << ", " << r.sub_h_odd
            << ")\n";
  std::cout << "tau_twist(K) = " << r.torsion.value.coordinate().str()
            << ", tau_twist(K') = " << r.sub_torsion.value.coordinate().str() << ", ratio = " << r.ratio.str() << "\n";
  std::cout << "dims match: " << (r.dims_match ? "yes" : "no") << ", ratio is +-1: " << (r.ratio_is_unit ? "yes" : "no")
            << "\n";
  emit(in, to_json(r));
  return r.dims_match && r.ratio_is_unit ? 0 : 1;
}

int run_lift(const Inputs& in) {
  auto l = load(in);
  if (l->theta.empty()) throw InputError("forms lift needs a nonzero cocycle");
  Json report = Json::object();
  for (auto& [deg, th] : l->theta) {
    PiecewiseForm w = whitney_lift(l->k, deg, th);
    std::cout << "degree " << deg << ":\n" << w.str() << "\n";
    Json per = Json::object();
    for (int q = deg; q <= l->k.dim(); ++q)
      for (auto& s : l->k.simplices(q)) per[l->k.label(s)] = w.on(s).str();
    report[std::to_string(deg)] = per;
  }
  emit(in, report);
  return 0;
}

int run_window(const Inputs& in, int level) {
  auto l = load(in);
  Twist t = twist_from_theta(l->k, l->theta);
  DupontSpace du(l->k, *l->rho);
  EquivariantWindow w = build_window(du, t, level);
  std::cout << "level D = " << w.level << ", p = " << w.p << "\n";
  std::cout << "  n  dim W_D  dim W_D+p  boundary(D)  twist blocks\n";
  Json rows = Json::array();
  for (size_t n = 0; n < w.low.size(); ++n) {
    std::ostringstream tw;
    Json tj = Json::array();
    for (auto& [k, m] : w.twist[n]) {
      tw << " t" << k << ":" << m.rows() << "x" << m.cols();
      tj.push_back({{"degree", k}, {"rows", m.rows()}, {"cols", m.cols()}, {"nonzeros", m.nonzeros()}});
    }
    auto& b = w.boundary_low[n];
    std::cout << std::setw(3) << n << std::setw(9) << w.low[n].size() << std::setw(11) << w.high[n].size()
              << std::setw(13) << (std::to_string(b.rows()) + "x" + std::to_string(b.cols())) << " " << tw.str() << "\n";
    rows.push_back({{"n", n},
                    {"dim_low", w.low[n].size()},
                    {"dim_high", w.high[n].size()},
                    {"boundary", {b.rows(), b.cols()}},
                    {"twist", tj}});
  }
  std::cout << "d^2 = 0: " << (w.square_zero ? "yes" : "no") << ", d t + t d = 0: " << (w.anticommutes ? "yes" : "no")
            << "\n";
  emit(in, {{"level", w.level}, {"p", w.p}, {"degrees", rows}, {"square_zero", w.square_zero},
            {"anticommutes", w.anticommutes}});
  return w.square_zero && w.anticommutes ? 0 : 1;
}

void add_common(CLI::App* app, Inputs& in, bool need_rep, bool need_cocycle) {
  app->add_option("complex", in.complex_path, "complex file")->required()->check(CLI::ExistingFile);
  auto* r = app->add_option("--rep", in.rep_path,
                            need_rep ? "representation file" : "representation file (default: trivial rank 1)");
  if (need_rep) r->required();
  r->check(CLI::ExistingFile);
  auto* c = app->add_option("--cocycle", in.cocycle_path, "cocycle file");
  if (need_cocycle) c->required();
  c->check(CLI::ExistingFile);
  app->add_option("--json", in.json_path, "write the machine-readable report to this file ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted cohomology and twisted Reidemeister torsion in exact rational arithmetic"};
  app.require_subcommand(1);
  Inputs in;

  std::string model = "both";
  int max_level = -1;
  auto* coh = app.add_subcommand("cohomology", "twisted cohomology dims (MW model and/or Dupont ladder)");
  add_common(coh, in, false, false);
  coh->add_option("--model", model, "mw, dupont or both")->check(CLI::IsMember({"mw", "dupont", "both"}));
  coh->add_option("--max-level", max_level, "largest Dupont truncation level (default dim K + 1)");

  std::string bases_path;
  auto* tor = app.add_subcommand("torsion", "Reidemeister torsion, tau_MW and tau_twist");
  add_common(tor, in, true, false);
  tor->add_option("--bases", bases_path, "cohomology bases (JSON)")->check(CLI::ExistingFile);

  int max_page = 4;
  bool differentials = false;
  auto* pages = app.add_subcommand("pages", "spectral sequence of the parity filtration");
  add_common(pages, in, true, true);
  pages->add_option("--max-page", max_page, "last page r")->check(CLI::Range(1, 64));
  pages->add_flag("--differentials", differentials, "include d_r matrices in the JSON report");

  auto* sub = app.add_subcommand("subdivide-check", "compare dims and torsion with the barycentric subdivision");
  add_common(sub, in, false, false);

  auto* forms = app.add_subcommand("forms", "piecewise polynomial forms");
  forms->require_subcommand(1);
  auto* lift = forms->add_subcommand("lift", "Whitney lift of a cocycle");
  add_common(lift, in, false, true);

  int level = 1;
  auto* window = app.add_subcommand("window", "Dupont windows");
  window->require_subcommand(1);
  auto* dump = window->add_subcommand("dump", "dimensions and matrix sizes of one window");
  add_common(dump, in, false, false);
  dump->add_option("--level", level, "truncation level D")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*coh) return run_cohomology(in, model, max_level);
    if (*tor) return run_torsion(in, bases_path);
    if (*pages) return run_pages(in, max_page, differentials);
    if (*sub) return run_subdivide(in);
    if (*lift) return run_lift(in);
    if (*dump) return run_window(in, level);
  } catch (const Refusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
