#include "taxgames/report.hpp"

#include <yaml-cpp/yaml.h>

namespace taxgames {

namespace {

void emit_steps(YAML::Emitter& out, const Arena& arena, const std::vector<Step>& steps) {
  out << YAML::BeginSeq;
  for (const auto& s : steps) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "state" << YAML::Value << arena.state_name(s.state)
        << YAML::Key << "profile" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (int i = 0; i < arena.num_agents(); ++i) out << arena.action_name(i, arena.action_of(s.profile, i));
    out << YAML::EndSeq << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

void emit_value(YAML::Emitter& out, const char* key, const Rational& v) {
  out << YAML::Key << key << YAML::Value << to_string(v);
  out << YAML::Key << (std::string(key) + "_decimal") << YAML::Value << to_decimal(v);
}

void emit_run(YAML::Emitter& out, const Arena& arena, const LassoRun& run) {
  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "prefix" << YAML::Value;
  emit_steps(out, arena, run.prefix);
  out << YAML::Key << "cycle" << YAML::Value;
  emit_steps(out, arena, run.cycle);
  out << YAML::EndMap;
}

std::string done(YAML::Emitter& out) { return std::string(out.c_str()) + "\n"; }

}  // namespace

RunReport make_run_report(const Game& game, const Profile& profile, const DynamicTax* tax) {
  check_profile(game.arena, profile);
  EquilibriumSolver untaxed(game, nullptr);
  const Outcome plain = untaxed.evaluate(profile);
  RunReport r;
  r.run = plain.run;
  r.winners = plain.winners;
  r.untaxed = plain.costs;
  if (tax) {
    check_tax(game.arena, *tax);
    for (int i = 0; i < game.arena.num_agents(); ++i) r.taxed.push_back(taxed_cost(game.arena, r.run, tax, i));
    r.trace = tax_sequence(r.run, *tax, game.arena.num_agents());
  } else {
    r.taxed = r.untaxed;
  }
  return r;
}

std::string format_run_report(const Game& game, const RunReport& r) {
  const Arena& a = game.arena;
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "run-report";
  emit_run(out, a, r.run);
  out << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < a.num_agents(); ++i) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << a.agent_name(i);
    out << YAML::Key << "goal" << YAML::Value << YAML::DoubleQuoted << game.goals[i].to_string();
    out << YAML::Key << "goal_met" << YAML::Value << static_cast<bool>(r.winners[i]);
    emit_value(out, "cost", r.untaxed[i]);
    emit_value(out, "taxed_cost", r.taxed[i]);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  if (r.trace) {
    out << YAML::Key << "tax_trace" << YAML::Value << YAML::BeginMap;
    auto states = [&](const char* key, const std::vector<int>& qs, const std::vector<CostVector>& taxes) {
      out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
      for (std::size_t k = 0; k < qs.size(); ++k) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "machine_state" << YAML::Value << "t" + std::to_string(qs[k])
            << YAML::Key << "tax" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto& x : taxes[k]) out << to_string(x);
        out << YAML::EndSeq << YAML::EndMap;
      }
      out << YAML::EndSeq;
    };
    states("prefix", r.trace->prefix_states, r.trace->prefix);
    states("cycle", r.trace->cycle_states, r.trace->cycle);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return done(out);
}

std::string format_equilibria(const Game& game, const std::vector<Profile>& equilibria, int bound,
                              std::uint64_t universe_size, const std::string& filter, const DynamicTax* tax) {
  const Arena& a = game.arena;
  EquilibriumSolver solver(game, tax);
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "equilibria";
  out << YAML::Key << "bound" << YAML::Value << bound;
  out << YAML::Key << "universe_size" << YAML::Value << universe_size;
  out << YAML::Key << "filter" << YAML::Value << YAML::DoubleQuoted << filter;
  out << YAML::Key << "count" << YAML::Value << equilibria.size();
  out << YAML::Key << "equilibria" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : equilibria) {
    const Outcome o = solver.evaluate(p);
    out << YAML::BeginMap;
    out << YAML::Key << "memory" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& m : p) out << m->num_states();
    out << YAML::EndSeq;
    emit_run(out, a, o.run);
    out << YAML::Key << "winners" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (int i = 0; i < a.num_agents(); ++i) {
      if (o.winners[i]) out << a.agent_name(i);
    }
    out << YAML::EndSeq;
    out << YAML::Key << "costs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& c : o.costs) out << to_string(c);
    out << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return done(out);
}

std::string format_static_report(const Game& game, const StaticInsufficiencyReport& report) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "static-insufficiency";
  out << YAML::Key << "every_tax_leaves_violation" << YAML::Value << report.every_tax_leaves_violation;
  out << YAML::Key << "findings" << YAML::Value << YAML::BeginSeq;
  for (const auto& f : report.findings) {
    out << YAML::BeginMap << YAML::Key << "found" << YAML::Value << f.found;
    if (f.found) {
      out << YAML::Key << "bound" << YAML::Value << f.bound;
      out << YAML::Key << "prefix_violation" << YAML::Value << f.prefix_violation;
      emit_run(out, game.arena, f.run);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "notes" << YAML::Value << report.notes;
  out << YAML::EndMap;
  return done(out);
}

}  // namespace taxgames
