// Command-line driver: validate models, run individual stages, run the full
// correspondence pipeline, and summarize report files.
// Exit codes: 0 = pass, 2 = theorem violation, 1 = infrastructure error,
// 64 = usage error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hplt/correspondence.hpp"

using namespace hplt;

namespace {

Open parse_open(const std::string& s) {
  Open u;
  for (auto& part : split_label(s, ',')) u.push_back(std::stoi(part));
  std::sort(u.begin(), u.end());
  return u;
}

int print_lines(const std::vector<CheckLine>& lines) {
  bool ok = true;
  for (auto& l : lines) {
    std::cout << (l.pass ? "PASS  " : "FAIL  ") << l.name;
    if (!l.pass) std::cout << "  [" << l.witness << "]";
    std::cout << "\n";
    ok = ok && l.pass;
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact homotopy-transfer checker for Poisson BV models on an interval"};
  app.require_subcommand(1);

  std::string model_path, open_spec = "0", out_path, config_path, in_path;
  std::string corrupt = "none", opens_kind = "single";
  int K = 3, M = 1, arity = 2, max_vertices = 3;

  auto* validate = app.add_subcommand("validate", "load a model and print its structure");
  validate->add_option("--model", model_path)->required();

  auto* sdr_check = app.add_subcommand("sdr-check", "linear retract identities on one open");
  sdr_check->add_option("--model", model_path)->required();
  sdr_check->add_option("--open", open_spec);
  sdr_check->add_option("--sym-degree", K);
  sdr_check->add_option("--interval-cap", M);

  auto* perturb_cmd = app.add_subcommand("perturb", "perturbation with smallness exponents");
  perturb_cmd->add_option("--model", model_path)->required();
  perturb_cmd->add_option("--open", open_spec);
  perturb_cmd->add_option("--sym-degree", K);
  perturb_cmd->add_option("--interval-cap", M);

  auto* trees_cmd = app.add_subcommand("trees", "enumerate labeled trees with degree accounts");
  trees_cmd->add_option("--arity", arity);
  trees_cmd->add_option("--max-vertices", max_vertices);
  trees_cmd->add_option("--opens", opens_kind)->check(CLI::IsMember({"single", "pair"}));

  auto* pipeline = app.add_subcommand("pipeline", "full correspondence run");
  pipeline->add_option("--model", model_path)->required();
  pipeline->add_option("--config", config_path);
  pipeline->add_option("--sym-degree", K);
  pipeline->add_option("--interval-cap", M);
  pipeline->add_option("--corrupt", corrupt);
  pipeline->add_option("--out", out_path);

  auto* report_cmd = app.add_subcommand("report", "summarize a report file");
  report_cmd->add_option("--in", in_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (validate->parsed()) {
      PbvModel m = load_model(model_path);
      std::cout << "OK " << m.name << ": " << m.sites << " site(s), dim L = " << m.L.size()
                << ", dim L! = " << m.Ldual.size() << "\n";
      for (auto& b : m.L)
        std::cout << "  L  " << b.label << "  degree " << b.degree << "  weight " << b.weight
                  << "\n";
      for (auto& b : m.Ldual)
        std::cout << "  L! " << b.label << "  degree " << b.degree << "  weight " << b.weight
                  << "\n";
      int ka = m.max_ell_arity(), pr = m.max_pi_r();
      std::cout << "  ell arities <= " << ka << ", Pi Taylor components <= " << pr << "\n";
      return 0;
    }

    if (sdr_check->parsed()) {
      PbvModel m = load_model(model_path);
      BulkAlg A(m, parse_open(open_spec), M);
      A.trunc_K = K;
      return print_lines(check_boundary_sdr(A, K));
    }

    if (perturb_cmd->parsed()) {
      PbvModel m = load_model(model_path);
      BulkAlg A(m, parse_open(open_spec), M);
      A.trunc_K = K;
      std::map<std::string, int> exps;
      auto lines = check_smallness_bulk(A, K, &exps);
      for (auto& [kl, p] : exps)
        std::cout << "smallness exponent at (" << kl << ") = " << p << "\n";
      auto more = check_perturbed_sdr(A, K);
      lines.insert(lines.end(), more.begin(), more.end());
      more = check_induced_differential(A, K);
      lines.insert(lines.end(), more.begin(), more.end());
      return print_lines(lines);
    }

    if (trees_cmd->parsed()) {
      Open out = opens_kind == "single" ? Open{0} : Open{0, 1};
      std::vector<Open> subopens;
      for (auto& idx : all_opens((int)out.size())) {
        Open u;
        for (int i : idx) u.push_back(out[i]);
        subopens.push_back(u);
      }
      std::vector<std::vector<Open>> colorings(1);
      for (int s = 0; s < arity; ++s) {
        std::vector<std::vector<Open>> next;
        for (auto& c : colorings)
          for (auto& u : subopens) {
            auto c2 = c;
            c2.push_back(u);
            next.push_back(c2);
          }
        colorings = next;
      }
      int count = 0;
      for (auto& leaves : colorings)
        for (auto& t : enumerate_trees(leaves, out, max_vertices)) {
          auto acct = degree_account(t);
          std::cout << tree_encode(t.root) << "  vertices=" << tree_vertices(t.root)
                    << " edges=" << acct.edges << " D=" << acct.d_total
                    << " forced_zero=" << (acct.forced_zero ? "yes" : "no") << "\n";
          ++count;
        }
      std::cout << count << " trees\n";
      return 0;
    }

    if (pipeline->parsed()) {
      PipelineConfig cfg;
      cfg.model = load_model(model_path);
      cfg.K = K;
      cfg.M = M;
      cfg.corruption = corruption_from_name(corrupt);
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw std::runtime_error("cannot open config: " + config_path);
        nlohmann::json j = nlohmann::json::parse(f);
        if (j.contains("sym_degree")) cfg.K = j["sym_degree"];
        if (j.contains("interval_cap")) cfg.M = j["interval_cap"];
        if (j.contains("max_vertices")) cfg.max_vertices = j["max_vertices"];
        if (j.contains("max_arity")) cfg.max_arity = j["max_arity"];
        if (j.contains("with_trees")) cfg.with_trees = j["with_trees"];
        if (j.contains("with_interior")) cfg.with_interior = j["with_interior"];
        if (j.contains("interior_cap")) cfg.interior_cap = j["interior_cap"];
        if (j.contains("corruption")) cfg.corruption = corruption_from_name(j["corruption"]);
      }
      CorrespondenceReport rep = run_pipeline(cfg);
      std::string json = report_json(rep);
      if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output: " + out_path);
        f << json;
      } else {
        std::cout << json;
      }
      for (auto& l : rep.lines)
        if (!l.pass) std::cerr << "FAIL  " << l.name << "  [" << l.witness << "]\n";
      std::cout << (rep.pass() ? "PASS" : "FAIL") << "\n";
      return rep.pass() ? 0 : 2;
    }

    if (report_cmd->parsed()) {
      std::ifstream f(in_path);
      if (!f) throw std::runtime_error("cannot open report: " + in_path);
      nlohmann::json j = nlohmann::json::parse(f);
      int fails = 0, total = 0;
      for (auto& c : j["checks"]) {
        ++total;
        if (!c["pass"].get<bool>()) {
          ++fails;
          std::cout << "FAIL  " << c["name"].get<std::string>() << "\n";
        }
      }
      std::cout << j["model"].get<std::string>() << ": " << (total - fails) << "/" << total
                << " checks pass\n";
      return fails == 0 ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
