#pragma once

#include <optional>
#include <string>

#include "savar/market.hpp"
#include "savar/riskbuild.hpp"
#include "savar/types.hpp"

namespace savar {

// A parsed instance document: scenario data, payoff, alpha, eligible space,
// and (optionally) the one-period market.
struct Instance {
  ScenarioModel model;
  Payoff payoff;
  AlphaVector alpha;
  EligibleSpace eligible;
  std::optional<MarketInstance> market;
};

// Reads a JSON instance document.  Scenario data and payoff may be given
// verbatim or produced by a builder section (one-period tree plus
// outperformance option); market cones may be given as generators or as
// bid/ask quotes.  Throws validation_error with a named invariant on bad
// input.
Instance read_instance(const std::string& path);

// Support value min w'u over the set; -inf if unbounded in direction w.
double risk_set_support(const RiskSet& set, const Eigen::VectorXd& w);

// Deterministic result writers: fixed ordering, floats at 12 significant
// digits, byte-identical output for identical inputs.
void write_regulator_result(const std::string& path, const RiskSet& set,
                            const ProblemSize& size);
void write_market_result(const std::string& path, const RiskSet& set,
                         const ProblemSize& size, const StrategyReport& report);
void write_plot_data(const std::string& path, const RiskSet& set);

// Formats a double at 12 significant digits (shared by all writers).
std::string format_number(double v);

}  // namespace savar
