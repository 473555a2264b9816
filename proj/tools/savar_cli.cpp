#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "savar/io.hpp"
#include "savar/market.hpp"
#include "savar/riskbuild.hpp"
#include "savar/scalar_risk.hpp"

namespace {

using namespace savar;

struct CommonOpts {
  std::string instance_path;
  std::string out_path;
  std::string plot_path;
  double tol_feas = 1e-9;
  int grid = 50;
};

void add_common(CLI::App* cmd, CommonOpts* o, bool needs_out = true) {
  cmd->add_option("--instance", o->instance_path, "instance file (JSON)")
      ->required();
  auto* out = cmd->add_option("--out", o->out_path, "result file");
  if (needs_out) out->required();
  cmd->add_option("--plot", o->plot_path, "write 2-D plot data here");
  cmd->add_option("--tol", o->tol_feas, "LP feasibility tolerance");
  cmd->add_option("--grid", o->grid, "weight grid size (scalarize)");
}

Tolerances make_tol(const CommonOpts& o) {
  Tolerances t;
  t.feasibility = o.tol_feas;
  return t;
}

void print_set_summary(const RiskSet& set) {
  switch (set.status) {
    case RiskSet::Status::empty:
      std::cout << "risk set: empty\n";
      return;
    case RiskSet::Status::unbounded_below:
      std::cout << "risk set: unbounded below\n";
      return;
    case RiskSet::Status::bounded:
      break;
  }
  std::cout << "risk set: " << set.vertices.size() << " vertex(es), "
            << set.recession.generators().cols() << " recession generator(s)\n";
  for (const auto& v : set.vertices) {
    std::cout << "  vertex (";
    for (int i = 0; i < v.size(); ++i)
      std::cout << (i ? ", " : "") << format_number(v(i));
    std::cout << ")\n";
  }
}

int run_reg(const CommonOpts& o) {
  Instance inst = read_instance(o.instance_path);
  Tolerances tol = make_tol(o);
  BuiltVlp built =
      build_regulator_vlp(inst.payoff, inst.model, inst.alpha, inst.eligible, tol);
  RiskSet set =
      avar_regulator(inst.payoff, inst.model, inst.alpha, inst.eligible, tol);
  write_regulator_result(o.out_path, set, built.size);
  if (!o.plot_path.empty()) write_plot_data(o.plot_path, set);
  print_set_summary(set);
  return 0;
}

int run_mar(const CommonOpts& o) {
  Instance inst = read_instance(o.instance_path);
  if (!inst.market)
    throw validation_error("instance: 'mar' requires a market section");
  Tolerances tol = make_tol(o);
  BuiltVlp built = build_market_vlp(inst.payoff, inst.model, inst.alpha,
                                    inst.eligible, *inst.market, tol);
  auto [set, report] = avar_market(inst.payoff, inst.model, inst.alpha,
                                   inst.eligible, *inst.market, tol);
  write_market_result(o.out_path, set, built.size, report);
  if (!o.plot_path.empty()) write_plot_data(o.plot_path, set);
  print_set_summary(set);
  return 0;
}

int run_scalar(const CommonOpts& o) {
  Instance inst = read_instance(o.instance_path);
  Tolerances tol = make_tol(o);
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + o.out_path);
  out << "{\n  \"avar_scalar\": [";
  for (int i = 0; i < inst.payoff.dim(); ++i) {
    double v = avar_scalar(inst.payoff.values().row(i).transpose(), inst.model,
                           inst.alpha(i), tol);
    if (i) out << ", ";
    out << format_number(v);
    std::cout << "AV@R_" << inst.alpha(i) << "(X_" << (i + 1)
              << ") = " << format_number(v) << "\n";
  }
  out << "]\n}\n";
  return 0;
}

// Weights on the unit simplex, (grid-1) subdivisions per axis.
void simplex_grid(int d, int grid, std::vector<Eigen::VectorXd>* out) {
  std::vector<int> comp(d, 0);
  const int total = std::max(grid - 1, 1);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == d - 1) {
      comp[i] = left;
      Eigen::VectorXd w(d);
      for (int k = 0; k < d; ++k) w(k) = static_cast<double>(comp[k]) / total;
      if (w.maxCoeff() > 0) out->push_back(w);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      comp[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, total);
}

int run_scalarize(const CommonOpts& o) {
  Instance inst = read_instance(o.instance_path);
  Tolerances tol = make_tol(o);
  RiskSet set =
      avar_regulator(inst.payoff, inst.model, inst.alpha, inst.eligible, tol);
  std::vector<Eigen::VectorXd> grid;
  simplex_grid(inst.payoff.dim(), o.grid, &grid);
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + o.out_path);
  out << "# w_1 ... w_d  phi_w  support\n";
  for (const auto& w : grid) {
    double phi = phi_w(inst.payoff, inst.model, inst.alpha, w, tol);
    double sup = risk_set_support(set, w);
    for (int i = 0; i < w.size(); ++i) out << format_number(w(i)) << " ";
    out << format_number(phi) << " " << format_number(sup) << "\n";
  }
  std::cout << "scalarize: " << grid.size() << " weights written\n";
  return 0;
}

int run_acceptable(const CommonOpts& o) {
  Instance inst = read_instance(o.instance_path);
  Tolerances tol = make_tol(o);
  bool ok = is_acceptable(inst.payoff, inst.model, inst.alpha, inst.eligible,
                          inst.market, tol);
  if (!o.out_path.empty()) {
    std::ofstream out(o.out_path, std::ios::binary);
    out << "{\n  \"acceptable\": " << (ok ? "true" : "false") << "\n}\n";
  }
  std::cout << (ok ? "acceptable" : "not acceptable") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"set-valued average value at risk over finite scenario models"};
  app.require_subcommand(1);

  CommonOpts o;
  auto* reg = app.add_subcommand("reg", "regulator AV@R");
  add_common(reg, &o);
  auto* mar = app.add_subcommand("mar", "market extension of AV@R");
  add_common(mar, &o);
  auto* sca = app.add_subcommand("scalar", "component-wise scalar AV@R");
  add_common(sca, &o);
  auto* sze = app.add_subcommand("scalarize", "scalarization table over a weight grid");
  add_common(sze, &o);
  auto* acc = app.add_subcommand("acceptable", "acceptance-set membership of X");
  add_common(acc, &o, /*needs_out=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (reg->parsed()) return run_reg(o);
    if (mar->parsed()) return run_mar(o);
    if (sca->parsed()) return run_scalar(o);
    if (sze->parsed()) return run_scalarize(o);
    if (acc->parsed()) return run_acceptable(o);
  } catch (const savar::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
