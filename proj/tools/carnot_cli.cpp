// Command-line front end: validate groups, print Hodge split tables, apply
// the second-order differential, query weight sets, integrate forms over
// chains, classify chains, run Stokes experiments, and estimate comass/mass.
//
// Exit codes: 0 success, 1 check failure (nonzero residual where a theorem
// applies), 2 configuration or parse error.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "carnot/currents.hpp"
#include "carnot/parse.hpp"

using nlohmann::json;
using namespace carnot;

namespace {

GroupPtr resolve_group(const std::string& spec) {
  try {
    return fixture_group(spec);
  } catch (const InvalidInput&) {
    // fall through to file lookup
  }
  std::ifstream in(spec);
  if (!in) throw InvalidInput("unknown group name and no such file: " + spec);
  return CheckedGroup::validate(group_spec_from_json(json::parse(in)));
}

CubicalChain load_chain(const CheckedGroup& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open chain file: " + path);
  return chain_from_json(g, json::parse(in));
}

void print_table(const json& j, int indent = 0) {
  std::string pad(indent, ' ');
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) {
      if (v.is_object() || (v.is_array() && !v.empty() &&
                            (v[0].is_object() || v[0].is_array()))) {
        std::cout << pad << k << ":\n";
        print_table(v, indent + 2);
      } else {
        std::cout << pad << k << ": " << (v.is_string()
                                              ? v.get<std::string>()
                                              : v.dump())
                  << "\n";
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) {
      if (v.is_object() || v.is_array()) {
        std::cout << pad << "-\n";
        print_table(v, indent + 2);
      } else {
        std::cout << pad << "- "
                  << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  }
}

void emit(json report, const std::string& format) {
  report["schema"] = 1;
  if (format == "json")
    std::cout << report.dump(2) << "\n";
  else
    print_table(report);
}

json group_summary(const CheckedGroup& g) {
  json j;
  j["name"] = g.name();
  j["dim"] = g.dim();
  j["weights"] = g.weights();
  j["step"] = g.step();
  j["homogeneous_dim"] = g.homogeneous_dim();
  return j;
}

json chain_summary(const CheckedGroup& g, const CubicalChain& ch) {
  json j;
  j["dim"] = ch.dim;
  j["charts"] = ch.terms.size();
  j["degree"] = ch.terms.empty() ? 0 : degree(g, ch);
  auto bdry = boundary(ch);
  j["boundary_degree"] = bdry.terms.empty() ? 0 : degree(g, bdry);
  j["boundary_empty"] = bdry.terms.empty();
  return j;
}

const HodgeContext& ctx_of(const GroupPtr& g) {
  static std::map<std::string, std::unique_ptr<HodgeContext>> cache;
  auto [it, fresh] = cache.try_emplace(g->name(), nullptr);
  if (fresh) it->second = std::make_unique<HodgeContext>(g);
  return *it->second;
}

std::vector<PolyForm> probe_forms(const CheckedGroup& g, int k,
                                  int budget_degree) {
  std::vector<PolyForm> out;
  for (Mask m : masks_of_degree(g, k))
    for (auto& e : monomials_up_to(g.dim(), budget_degree))
      out.push_back(Poly::monomial(g.dim(), e, Rat(1)) *
                    PolyForm::from_algebraic(g.dim(),
                                             AlgebraicForm::basis(m)));
  return out;
}

json rumin_report_json(const RuminStokesReport& r, const std::string& form) {
  json j;
  j["form"] = form;
  j["boundary_integral"] = rat_str(r.boundary_integral);
  j["interior_integral"] = rat_str(r.interior_integral);
  j["discrepancy"] = rat_str(r.discrepancy);
  j["pi_e_fixes_alpha"] = r.pi_e_fixes_alpha;
  j["d_pi_e_harmonic"] = r.d_pi_e_harmonic;
  j["boundary_empty"] = r.boundary_empty;
  if (r.sigma_verdict) {
    j["sigma_sufficient"] = r.sigma_verdict->sufficient;
    j["sigma_falsified"] = r.sigma_verdict->falsified.has_value();
  }
  if (r.boundary_verdict)
    j["boundary_sufficient"] = r.boundary_verdict->sufficient;
  j["theorem_applies"] = r.theorem_applies;
  return j;
}

json spectral_report_json(const SpectralStokesReport& r,
                          const std::string& form) {
  json j;
  j["form"] = form;
  j["boundary_integral"] = rat_str(r.boundary_integral);
  j["interior_integral"] = rat_str(r.interior_integral);
  j["discrepancy"] = rat_str(r.discrepancy);
  j["weight"] = r.p;
  j["jump"] = r.j;
  j["deg_sigma"] = r.manifold.deg_sigma;
  j["deg_boundary"] = r.manifold.deg_boundary;
  j["spectral_manifold"] = r.manifold.ok;
  j["weight_matches_boundary_degree"] = r.weight_matches_boundary_degree;
  j["hypotheses_hold"] = r.hypotheses_hold;
  return j;
}

int cmd_stokes_run(const std::string& config_path, const std::string& format) {
  std::ifstream in(config_path);
  if (!in) throw InvalidInput("cannot open config: " + config_path);
  json cfg = json::parse(in);
  auto g = resolve_group(cfg.at("group").get<std::string>());
  const auto& ctx = ctx_of(g);
  CubicalChain chain = cfg.at("chain").is_string()
                           ? load_chain(*g, cfg.at("chain").get<std::string>())
                           : chain_from_json(*g, cfg.at("chain"));
  std::string mode = cfg.value("mode", std::string("rumin"));
  int probe_degree = cfg.value("probe_degree", 2);

  std::vector<PolyForm> forms;
  if (cfg.contains("forms")) {
    for (auto& f : cfg.at("forms"))
      forms.push_back(parse_polyform(g->dim(), f.get<std::string>()));
  } else {
    int budget = cfg.value("budget_degree", 1);
    forms = probe_forms(*g, chain.dim - 1, budget);
  }

  json report;
  report["group"] = g->name();
  report["mode"] = mode;
  report["chain"] = chain_summary(*g, chain);
  auto runs = json::array();
  int failures = 0, skipped = 0;
  for (auto& alpha : forms) {
    if (mode == "classical") {
      Rat lhs = integrate(*g, boundary(chain), alpha);
      Rat rhs = integrate(*g, chain, d(*g, alpha));
      json r;
      r["form"] = alpha.str();
      r["boundary_integral"] = rat_str(lhs);
      r["interior_integral"] = rat_str(rhs);
      r["discrepancy"] = rat_str(lhs - rhs);
      if (lhs != rhs) ++failures;
      runs.push_back(std::move(r));
    } else if (mode == "rumin") {
      PolyForm a = ctx.pi0(alpha);
      if (a.is_zero()) {
        ++skipped;
        continue;
      }
      auto r = run_rumin_stokes(ctx, chain, a, probe_degree);
      if (r.theorem_applies && r.discrepancy != 0) ++failures;
      runs.push_back(rumin_report_json(r, a.str()));
    } else if (mode == "spectral") {
      try {
        auto r = run_spectral_stokes(ctx, chain, alpha);
        if (r.hypotheses_hold && r.discrepancy != 0) ++failures;
        runs.push_back(spectral_report_json(r, alpha.str()));
      } catch (const ZMembershipFailed& e) {
        json r;
        r["form"] = alpha.str();
        r["skipped"] = e.what();
        ++skipped;
        runs.push_back(std::move(r));
      }
    } else {
      throw InvalidInput("unknown mode: " + mode);
    }
  }
  report["runs"] = std::move(runs);
  report["checked"] = static_cast<int>(forms.size()) - skipped;
  report["skipped"] = skipped;
  report["failures"] = failures;
  emit(report, format);
  return failures > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact second-order calculus on graded nilpotent groups"};
  app.require_subcommand(1);
  std::string group_arg, form_arg, chain_arg, format = "table";
  std::string config_arg;
  int degree_arg = -1, weight_arg = -1, budget_degree = 2, samples = 400;
  int jump_arg = 0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* c, bool need_group = true) {
    if (need_group)
      c->add_option("--group", group_arg, "fixture name (h1, h2, h1xr, "
                                          "cartan, rN) or spec file")
          ->required();
    c->add_option("--format", format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
    return c;
  };

  auto* validate = add_common(app.add_subcommand(
      "validate", "check Jacobi/grading and print the group summary"));
  auto* complex_cmd = add_common(app.add_subcommand(
      "complex", "Hodge split table of a fiber degree"));
  complex_cmd->add_option("--degree", degree_arg, "form degree k")->required();
  auto* dc_cmd = add_common(
      app.add_subcommand("dc", "second-order differential of a form"));
  dc_cmd->add_option("--form", form_arg, "polyform literal")->required();
  auto* spectral_cmd = add_common(app.add_subcommand(
      "spectral", "weight sets; optionally a cocycle witness for a form"));
  spectral_cmd->add_option("--degree", degree_arg, "restrict to one degree");
  spectral_cmd->add_option("--form", form_arg, "form to test for Z_j");
  spectral_cmd->add_option("--jump", jump_arg, "page j (default 1)");
  auto* integrate_cmd = add_common(
      app.add_subcommand("integrate", "exact integral of a form over a chain"));
  integrate_cmd->add_option("--chain", chain_arg, "chain spec file")
      ->required();
  integrate_cmd->add_option("--form", form_arg, "polyform literal")
      ->required();
  auto* degree_cmd = add_common(app.add_subcommand(
      "degree", "degree of a chain and of its boundary"));
  degree_cmd->add_option("--chain", chain_arg, "chain spec file")->required();
  auto* rmanifold_cmd = add_common(app.add_subcommand(
      "rmanifold", "weight-vanishing verdict for a chain"));
  rmanifold_cmd->add_option("--chain", chain_arg, "chain spec file")
      ->required();
  rmanifold_cmd->add_option("--budget-degree", budget_degree,
                            "probe polynomial degree");
  auto* stokes_cmd = app.add_subcommand("stokes", "run Stokes experiments");
  auto* stokes_run = stokes_cmd->add_subcommand("run", "run a config file");
  stokes_run->add_option("config", config_arg, "experiment config (JSON)")
      ->required();
  stokes_run->add_option("--format", format, "json|table")
      ->check(CLI::IsMember({"json", "table"}));
  auto* comass_cmd = add_common(app.add_subcommand(
      "comass", "weighted comass of a constant-coefficient form"));
  comass_cmd->add_option("--form", form_arg, "covector literal")->required();
  comass_cmd->add_option("--weight", weight_arg, "pure weight p")->required();
  comass_cmd->add_option("--samples", samples, "sampled frames");
  comass_cmd->add_option("--seed", seed, "sampling seed");
  auto* mass_cmd = add_common(app.add_subcommand(
      "mass", "lower-bound mass of a chain current"));
  mass_cmd->add_option("--chain", chain_arg, "chain spec file")->required();
  auto* fixtures_cmd = app.add_subcommand("fixtures", "list built-in fixtures");
  fixtures_cmd->add_option("--format", format, "json|table")
      ->check(CLI::IsMember({"json", "table"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) {
      auto g = resolve_group(group_arg);
      json j = group_summary(*g);
      j["ok"] = true;
      emit(j, format);
    } else if (app.got_subcommand(complex_cmd)) {
      auto g = resolve_group(group_arg);
      const auto& ctx = ctx_of(g);
      if (degree_arg < 0 || degree_arg > g->dim())
        throw InvalidInput("degree out of range");
      json j;
      j["group"] = g->name();
      j["degree"] = degree_arg;
      auto rows = json::array();
      for (int p : ctx.fiber_weights(degree_arg)) {
        auto split = ctx.hodge_split(degree_arg, p);
        json row;
        row["weight"] = p;
        row["dim_im_d0"] = split.im_d0.dim();
        row["dim_ker_box0"] = split.ker_box0.dim();
        row["dim_im_delta0"] = split.im_delta0.dim();
        auto basis = json::array();
        for (auto& b : split.ker_box0.basis) basis.push_back(b.str());
        row["rumin_basis"] = std::move(basis);
        rows.push_back(std::move(row));
      }
      j["fibers"] = std::move(rows);
      emit(j, format);
    } else if (app.got_subcommand(dc_cmd)) {
      auto g = resolve_group(group_arg);
      const auto& ctx = ctx_of(g);
      auto f = parse_polyform(g->dim(), form_arg);
      auto abar = ctx.pi0(f);
      json j;
      j["group"] = g->name();
      j["form"] = f.str();
      j["is_rumin"] = ctx.is_rumin(f);
      j["projection"] = abar.str();
      j["dc"] = ctx.dc(abar).str();
      emit(j, format);
    } else if (app.got_subcommand(spectral_cmd)) {
      auto g = resolve_group(group_arg);
      const auto& ctx = ctx_of(g);
      json j;
      j["group"] = g->name();
      auto sets = json::array();
      for (int k = 0; k <= g->dim(); ++k) {
        if (degree_arg >= 0 && k != degree_arg) continue;
        json row;
        row["degree"] = k;
        row["P"] = weight_set_P(ctx, k);
        sets.push_back(std::move(row));
      }
      j["weight_sets"] = std::move(sets);
      if (!form_arg.empty()) {
        auto f = parse_polyform(g->dim(), form_arg);
        int jmp = jump_arg > 0 ? jump_arg : 1;
        auto z = z_solve(ctx, f, jmp);
        json zc;
        zc["form"] = f.str();
        zc["jump"] = jmp;
        if (std::holds_alternative<ZWitness>(z)) {
          auto& w = std::get<ZWitness>(z);
          zc["in_z"] = true;
          zc["delta"] = delta_r(ctx, w).str();
        } else {
          auto& fail = std::get<ZFailure>(z);
          zc["in_z"] = false;
          zc["obstruction_stage"] = fail.stage;
          zc["obstruction"] = fail.obstruction.str();
        }
        j["cocycle"] = std::move(zc);
      }
      emit(j, format);
    } else if (app.got_subcommand(integrate_cmd)) {
      auto g = resolve_group(group_arg);
      auto chain = load_chain(*g, chain_arg);
      auto f = parse_polyform(g->dim(), form_arg);
      json j;
      j["group"] = g->name();
      j["form"] = f.str();
      j["chain"] = chain_summary(*g, chain);
      j["integral"] = rat_str(integrate(*g, chain, f));
      emit(j, format);
    } else if (app.got_subcommand(degree_cmd)) {
      auto g = resolve_group(group_arg);
      auto chain = load_chain(*g, chain_arg);
      json j = chain_summary(*g, chain);
      j["group"] = g->name();
      auto certs = json::array();
      for (auto& [c, chart] : chain.terms)
        certs.push_back(degree_constancy_certified(*g, chart));
      j["degree_constancy_certified"] = std::move(certs);
      emit(j, format);
    } else if (app.got_subcommand(rmanifold_cmd)) {
      auto g = resolve_group(group_arg);
      const auto& ctx = ctx_of(g);
      auto chain = load_chain(*g, chain_arg);
      auto rep = r_manifold_report(ctx, chain, budget_degree);
      json j;
      j["group"] = g->name();
      j["degree"] = rep.degree;
      j["sufficient"] = rep.sufficient;
      j["falsified"] = rep.falsified.has_value();
      if (rep.falsified) {
        j["witness"] = rep.falsified->str();
        j["witness_integral"] = rat_str(rep.witness_integral);
      }
      j["inconclusive"] = rep.inconclusive;
      j["probe_degree"] = rep.probe_degree;
      emit(j, format);
    } else if (app.got_subcommand(stokes_cmd)) {
      return cmd_stokes_run(config_arg, format);
    } else if (app.got_subcommand(comass_cmd)) {
      auto g = resolve_group(group_arg);
      auto xi = parse_form(form_arg);
      auto est = p_comass(*g, xi, weight_arg, samples, seed);
      json j;
      j["group"] = g->name();
      j["form"] = xi.str();
      j["weight"] = weight_arg;
      j["value"] = est.value;
      j["exact"] = est.exact;
      j["lower_bound"] = !est.exact;
      j["samples_used"] = est.samples_used;
      emit(j, format);
    } else if (app.got_subcommand(mass_cmd)) {
      auto g = resolve_group(group_arg);
      auto chain = load_chain(*g, chain_arg);
      auto t = chain_current(g, chain);
      // unit-comass probes: the basis covectors of the chain's dimension
      std::vector<PolyForm> probes;
      for (Mask m : masks_of_degree(*g, chain.dim))
        probes.push_back(
            PolyForm::from_algebraic(g->dim(), AlgebraicForm::basis(m)));
      auto est = mass_estimate(t, probes);
      json j;
      j["group"] = g->name();
      j["chain"] = chain_summary(*g, chain);
      j["weight_label"] = t.p;
      j["value"] = est.value;
      j["lower_bound"] = est.lower_bound;
      j["probes_used"] = est.probes_used;
      emit(j, format);
    } else if (app.got_subcommand(fixtures_cmd)) {
      json j;
      auto groups = json::array();
      for (auto& g : all_fixture_groups()) groups.push_back(group_summary(*g));
      j["groups"] = std::move(groups);
      auto chains = json::array();
      for (auto& f : stokes_fixtures()) {
        json row;
        row["name"] = f.name;
        row["group"] = f.group->name();
        row["chain"] = chain_summary(*f.group, f.chain);
        chains.push_back(std::move(row));
      }
      j["chains"] = std::move(chains);
      emit(j, format);
    }
  } catch (const JacobiViolation& e) {
    std::cerr << "JacobiViolation: " << e.what() << "\n";
    return 2;
  } catch (const GradingViolation& e) {
    std::cerr << "GradingViolation: " << e.what() << "\n";
    return 2;
  } catch (const NonpositiveWeight& e) {
    std::cerr << "NonpositiveWeight: " << e.what() << "\n";
    return 2;
  } catch (const WeightsNotSorted& e) {
    std::cerr << "WeightsNotSorted: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 2;
  } catch (const ZMembershipFailed& e) {
    std::cerr << "ZMembershipFailed: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
