#include "savar/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace savar {

using nlohmann::json;

namespace {

Eigen::VectorXd to_vector(const json& j, const char* what) {
  if (!j.is_array())
    throw validation_error(std::string("instance: ") + what + " must be an array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
  return v;
}

// Array of rows -> matrix.
Eigen::MatrixXd to_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw validation_error(std::string("instance: ") + what +
                           " must be an array of arrays");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols)
      throw validation_error(std::string("instance: ragged rows in ") + what);
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

// Array of vectors interpreted as matrix columns (generators, basis vectors).
Eigen::MatrixXd to_columns(const json& j, const char* what) {
  return to_matrix(j, what).transpose();
}

GeneratedCone parse_cone(const json& j, int d, const Tolerances& tol) {
  if (j.contains("generators"))
    return GeneratedCone(d, to_columns(j["generators"], "cone generators"), tol);
  if (j.contains("quotes")) {
    const json& q = j["quotes"];
    BidAskQuote quote(to_vector(q.at("bid"), "quotes.bid"),
                      to_vector(q.at("ask"), "quotes.ask"));
    std::optional<double> bond_price;
    std::optional<std::pair<double, double>> bond_bid_ask;
    if (j.contains("bond_price")) bond_price = j["bond_price"].get<double>();
    if (j.contains("bond_bid_ask"))
      bond_bid_ask = std::make_pair(j["bond_bid_ask"][0].get<double>(),
                                    j["bond_bid_ask"][1].get<double>());
    return solvency_cone_cash_numeraire(quote, bond_price, bond_bid_ask, tol);
  }
  throw validation_error("instance: cone needs 'generators' or 'quotes'");
}

// Orthonormal basis of the orthogonal complement of span(basis_M).
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& basis_M) {
  const int d = static_cast<int>(basis_M.rows());
  const int m = static_cast<int>(basis_M.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis_M, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(d - m);
}

}  // namespace

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw validation_error("instance: cannot open file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("instance: JSON parse error: ") + e.what());
  }
  const Tolerances tol;

  std::optional<Eigen::VectorXd> probs;
  std::optional<Eigen::MatrixXd> payoff_values;
  std::vector<Eigen::VectorXd> tree_mid_T;  // risky mid prices per scenario
  std::optional<json> tree_cfg;

  if (doc.contains("builder") && doc["builder"].contains("tree")) {
    const json& t = doc["builder"]["tree"];
    tree_cfg = t;
    OnePeriodTree tree = generate_one_period_tree(
        to_vector(t.at("spot"), "tree.spot"),
        to_vector(t.at("drift"), "tree.drift"),
        to_matrix(t.at("covariance"), "tree.covariance"),
        t.at("horizon").get<double>());
    probs = tree.model.probabilities();
    tree_mid_T = tree.prices;
  }
  if (doc.contains("probabilities"))
    probs = to_vector(doc["probabilities"], "probabilities");
  if (!probs)
    throw validation_error("instance: missing probabilities (or tree builder)");
  ScenarioModel model(*probs, tol);

  Eigen::VectorXd lambda;  // proportional costs for risky assets
  if (tree_cfg && tree_cfg->contains("lambda"))
    lambda = to_vector((*tree_cfg)["lambda"], "tree.lambda");

  if (doc.contains("builder") && doc["builder"].contains("outperformance")) {
    if (tree_mid_T.empty())
      throw validation_error("instance: outperformance builder requires a tree");
    const json& o = doc["builder"]["outperformance"];
    Eigen::VectorXd spot = to_vector((*tree_cfg)["spot"], "tree.spot");
    if (lambda.size() != spot.size())
      throw validation_error("instance: tree.lambda required for outperformance");
    Eigen::VectorXd ask0 =
        (spot.array() * (1.0 + lambda.array())).matrix();
    std::vector<Eigen::VectorXd> askT;
    for (const auto& s : tree_mid_T)
      askT.push_back((s.array() * (1.0 + lambda.array())).matrix());
    payoff_values = outperformance_payoff(ask0, askT,
                                          o.at("strike").get<double>())
                        .values();
  }
  if (doc.contains("payoff"))
    payoff_values = to_matrix(doc["payoff"], "payoff");
  if (!payoff_values)
    throw validation_error("instance: missing payoff (or builder)");
  Payoff payoff(*payoff_values);
  const int d = payoff.dim();

  AlphaVector alpha(to_vector(doc.at("alpha"), "alpha"));

  Eigen::MatrixXd basis_M = doc.contains("basis_M")
                                ? to_columns(doc["basis_M"], "basis_M")
                                : Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd basis_Mperp = doc.contains("basis_Mperp")
                                    ? to_columns(doc["basis_Mperp"], "basis_Mperp")
                                    : complement_basis(basis_M);
  EligibleSpace eligible(basis_M, basis_Mperp, tol);

  std::optional<MarketInstance> market;
  if (doc.contains("market")) {
    const json& mj = doc["market"];
    MarketInstance mi{GeneratedCone(d, Eigen::MatrixXd::Identity(d, d)), {}, {}};
    mi.k0 = parse_cone(mj.at("k0"), d, tol);
    if (mj.contains("kT")) {
      for (const auto& cj : mj["kT"]) mi.kT.push_back(parse_cone(cj, d, tol));
    } else if (tree_cfg) {
      // Build terminal cones from the tree's per-scenario quotes.
      std::optional<double> bond_price_T;
      std::optional<std::pair<double, double>> bond_bid_ask_T;
      if (tree_cfg->contains("bond_lambda")) {
        double l0 = (*tree_cfg)["bond_lambda"].get<double>();
        bond_bid_ask_T = std::make_pair(1.0 - l0, 1.0 + l0);
      }
      for (const auto& s : tree_mid_T) {
        BidAskQuote q((s.array() * (1.0 - lambda.array())).matrix(),
                      (s.array() * (1.0 + lambda.array())).matrix());
        mi.kT.push_back(
            solvency_cone_cash_numeraire(q, bond_price_T, bond_bid_ask_T, tol));
      }
    } else {
      throw validation_error("instance: market.kT missing");
    }
    if (mj.contains("k0M_generators"))
      mi.k0M = GeneratedCone(d, to_columns(mj["k0M_generators"], "k0M"), tol);
    market = std::move(mi);
  }

  return Instance{std::move(model), std::move(payoff), std::move(alpha),
                  std::move(eligible), std::move(market)};
}

double risk_set_support(const RiskSet& set, const Eigen::VectorXd& w) {
  if (set.status == RiskSet::Status::empty)
    return std::numeric_limits<double>::infinity();
  for (int j = 0; j < set.recession.generators().cols(); ++j)
    if (w.dot(set.recession.generators().col(j)) < -1e-12)
      return -std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : set.vertices) best = std::min(best, w.dot(v));
  return best;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::string vec_json(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v(i));
  }
  return s + "]";
}

std::string mat_json_rows(const Eigen::MatrixXd& m) {
  std::string s = "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) s += ", ";
    s += vec_json(m.row(r).transpose());
  }
  return s + "]";
}

const char* status_name(RiskSet::Status s) {
  switch (s) {
    case RiskSet::Status::bounded: return "bounded";
    case RiskSet::Status::empty: return "empty";
    case RiskSet::Status::unbounded_below: return "unbounded-below";
  }
  return "unknown";
}

void write_common(std::ostream& out, const RiskSet& set,
                  const ProblemSize& size) {
  out << "  \"status\": \"" << status_name(set.status) << "\",\n";
  out << "  \"problem_size\": {\n"
      << "    \"variables\": " << size.n_vars << ",\n"
      << "    \"objectives\": " << size.n_objectives << ",\n"
      << "    \"nonneg_bounds\": " << size.n_nonneg_bounds << ",\n"
      << "    \"inequality_rows\": " << size.n_ineq_rows << ",\n"
      << "    \"equality_rows\": " << size.n_eq_rows << ",\n"
      << "    \"aggregate_constraints\": " << size.aggregate_constraints()
      << "\n  },\n";
  out << "  \"vertices\": [";
  for (size_t i = 0; i < set.vertices.size(); ++i) {
    if (i) out << ", ";
    out << vec_json(set.vertices[i]);
  }
  out << "],\n";
  out << "  \"recession_generators\": [";
  for (int j = 0; j < set.recession.generators().cols(); ++j) {
    if (j) out << ", ";
    out << vec_json(set.recession.generators().col(j));
  }
  out << "],\n";
  out << "  \"preimages\": [";
  for (size_t i = 0; i < set.preimages.size(); ++i) {
    const auto& p = set.preimages[i];
    if (i) out << ", ";
    out << "{\"z_hat\": " << vec_json(p.z_hat) << ", \"z\": " << vec_json(p.z);
    if (p.s_hat.size() > 0) out << ", \"s_hat\": " << vec_json(p.s_hat);
    if (p.t_hat.size() > 0) out << ", \"t_hat\": " << vec_json(p.t_hat);
    out << "}";
  }
  out << "]";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

}  // namespace

void write_regulator_result(const std::string& path, const RiskSet& set,
                            const ProblemSize& size) {
  auto out = open_out(path);
  out << "{\n";
  write_common(out, set, size);
  out << "\n}\n";
}

void write_market_result(const std::string& path, const RiskSet& set,
                         const ProblemSize& size,
                         const StrategyReport& report) {
  auto out = open_out(path);
  out << "{\n";
  write_common(out, set, size);
  out << ",\n  \"strategies\": [";
  for (size_t i = 0; i < report.per_vertex.size(); ++i) {
    const auto& s = report.per_vertex[i];
    if (i) out << ", ";
    out << "{\"k0\": " << vec_json(s.k0) << ", \"kT\": [";
    for (size_t n = 0; n < s.kT.size(); ++n) {
      if (n) out << ", ";
      out << vec_json(s.kT[n]);
    }
    out << "], \"payoff_y\": " << mat_json_rows(s.y)
        << ", \"regulator_vertices_at_shifted\": [";
    for (size_t v = 0; v < s.regulator_at_shifted.vertices.size(); ++v) {
      if (v) out << ", ";
      out << vec_json(s.regulator_at_shifted.vertices[v]);
    }
    out << "]}";
  }
  out << "]\n}\n";
}

void write_plot_data(const std::string& path, const RiskSet& set) {
  if (!set.vertices.empty() && set.vertices.front().size() != 2 &&
      set.recession.dim() != 2)
    throw validation_error("plot: only 2-dimensional sets are plottable");
  auto out = open_out(path);
  out << "# vertices\n";
  for (const auto& v : set.vertices) {
    out << format_number(v(0));
    for (int i = 1; i < v.size(); ++i) out << " " << format_number(v(i));
    out << "\n";
  }
  out << "# rays\n";
  for (int j = 0; j < set.recession.generators().cols(); ++j) {
    const auto g = set.recession.generators().col(j);
    out << format_number(g(0));
    for (int i = 1; i < g.size(); ++i) out << " " << format_number(g(i));
    out << "\n";
  }
}

}  // namespace savar
