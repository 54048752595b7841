// kakeyalab command-line front end.
//
// Exit status: 0 success, 1 an asserted property failed, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kakeyalab/suite.hpp"

using namespace kakeyalab;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Common {
  int q = 0;
  std::string out;
  std::uint64_t seed = 1;
  int workers = 1;
};

int default_workers() {
  if (const char* env = std::getenv("KAKEYALAB_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw FormatError("cannot write " + out);
  f << text;
}

int finish(const std::string& type, const Common& c, json result, const std::vector<std::string>& violations,
           const Provenance& prov) {
  const bool ok = violations.empty();
  emit(envelope(type, c.q, std::move(result), ok, violations, prov), c.out);
  return ok ? kOk : kViolation;
}

std::vector<std::string> identity_violations(const IdentityReport& r) {
  std::vector<std::string> out;
  for (const auto& v : r.violations)
    out.push_back(v.identity + " at (" + std::to_string(v.at.x.v) + "," + std::to_string(v.at.y.v) + "): " + v.detail);
  return out;
}

std::vector<std::string> audit_violations(const AuditReport& a) {
  std::vector<std::string> out;
  for (const auto& c : a.checks)
    if (!c.holds()) out.push_back(a.kind + " " + c.id + ": " + to_string(c.lhs) + " < " + to_string(c.rhs));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-field Kakeya and collinear-triple verification toolkit", "kakeyalab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(0, 1);

  Common c;
  c.workers = default_workers();
  Provenance prov;
  for (int i = 0; i < argc; ++i) prov.command.emplace_back(argv[i]);

  auto add_q = [&](CLI::App* sub) { sub->add_option("--q", c.q, "field order (odd prime power)")->required(); };
  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", c.out, "output file (default stdout)"); };

  // verify
  std::string function_file, cover_file;
  auto* verify = app.add_subcommand("verify", "evaluate a function graph or a cover and check every property");
  add_q(verify);
  add_out(verify);
  auto* vf = verify->add_option("--function", function_file, "function table file");
  auto* vc = verify->add_option("--cover", cover_file, "cover file");
  vf->excludes(vc);

  // construct
  std::string what;
  bool as_report = false;
  auto* construct = app.add_subcommand("construct", "emit a known construction");
  add_q(construct);
  add_out(construct);
  construct->add_option("--what", what, "inverse-perm | parabola")
      ->required()
      ->check(CLI::IsMember({"inverse-perm", "parabola"}));
  construct->add_flag("--report", as_report, "wrap the construction in a full report");

  // dualize
  auto* dualize = app.add_subcommand("dualize", "normalize a cover with R <= 1 and map it to a function graph");
  add_q(dualize);
  add_out(dualize);
  dualize->add_option("--cover", cover_file, "cover file")->required();

  // primalize
  int vertical_key = -1;
  auto* primalize_cmd = app.add_subcommand("primalize", "map a (semi)permutation graph back to a cover");
  add_q(primalize_cmd);
  add_out(primalize_cmd);
  primalize_cmd->add_option("--function", function_file, "function table file")->required();
  primalize_cmd->add_option("--vertical-key", vertical_key, "key of the vertical line (default: smallest cover)");

  // search
  std::string objective;
  bool exhaustive = false;
  long long samples = 0, budget = 0;
  std::size_t max_witnesses = 16;
  auto* search = app.add_subcommand("search", "extremal searches");
  add_q(search);
  add_out(search);
  search->add_option("--objective", objective, "triples | besicovitch | isolated-edge | matching")
      ->required()
      ->check(CLI::IsMember({"triples", "besicovitch", "isolated-edge", "matching"}));
  auto* ex = search->add_flag("--exhaustive", exhaustive, "exhaustive symmetry-reduced search (default)");
  auto* sm = search->add_option("--sample", samples, "sample this many random instances instead")->check(CLI::PositiveNumber);
  ex->excludes(sm);
  search->add_option("--budget", budget, "node budget (0 = unlimited)")->check(CLI::NonNegativeNumber);
  search->add_option("--seed", c.seed, "seed for sampled mode");
  search->add_option("--workers", c.workers, "worker threads (env KAKEYALAB_WORKERS)")->check(CLI::PositiveNumber);
  search->add_option("--max-witnesses", max_witnesses, "witnesses kept")->check(CLI::PositiveNumber);

  // audit
  long long audit_samples = 1000;
  auto* audit = app.add_subcommand("audit", "bound audits for a graph, a cover, or a whole population");
  add_q(audit);
  add_out(audit);
  auto* af = audit->add_option("--function", function_file, "function table file");
  auto* ac = audit->add_option("--cover", cover_file, "cover file");
  af->excludes(ac);
  audit->add_option("--samples", audit_samples, "random semipermutations in population mode")->check(CLI::NonNegativeNumber);
  audit->add_option("--seed", c.seed, "seed");
  audit->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);

  // suite
  SuiteOptions sopt;
  auto* suite = app.add_subcommand("suite", "run every acceptance check that applies at q");
  add_q(suite);
  add_out(suite);
  suite->add_option("--samples", sopt.samples, "random graphs per sampled check")->check(CLI::PositiveNumber);
  suite->add_option("--cover-samples", sopt.cover_samples, "random covers for q > 5")->check(CLI::PositiveNumber);
  suite->add_option("--seed", c.seed, "seed");
  suite->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);

  // schema
  auto* schema = app.add_subcommand("schema", "print the report JSON schema");
  add_out(schema);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.get_subcommands().empty() || schema->parsed()) {
      emit(report_schema(), c.out);
      return kOk;
    }
    const auto field = make_field(c.q);

    if (verify->parsed()) {
      if (function_file.empty() == cover_file.empty()) throw CLI::ValidationError("verify needs --function or --cover");
      if (!function_file.empty()) {
        const auto g = classify(field, parse_function_table(read_file(function_file)));
        const auto cs = build_structure(*field, g.points());
        json result = {{"function", function_json(g)}, {"structure", structure_json(cs)}};
        std::vector<std::string> violations;
        if (g.kind() != FunctionKind::kOther) {
          const auto ids = verify_point_identities(g);
          result["identities"] = identity_json(ids);
          violations = identity_violations(ids);
          try {
            const auto a = bound_audit(g);
            result["audit"] = audit_json(a);
            for (auto& v : audit_violations(a)) violations.push_back(v);
          } catch (const PreconditionViolated& e) {
            result["audit"] = {{"skipped", e.what()}};
          }
        }
        return finish("verify", c, result, violations, prov);
      }
      const auto cover = build_cover(field, parse_cover(read_file(cover_file), c.q));
      const auto a = bound_audit(cover);
      return finish("verify", c, {{"cover", cover_report_json(cover)}, {"audit", audit_json(a)}}, audit_violations(a), prov);
    }

    if (construct->parsed()) {
      json artifact;
      json result;
      if (what == "inverse-perm") {
        const auto g = inverse_construction(field);
        artifact = function_table_json(g.indices());
        result = {{"function", function_json(g)}, {"structure", structure_json(build_structure(*field, g.points()))}};
      } else {
        const auto cover = parabola_construction(field);
        artifact = cover_json(cover);
        result = {{"cover", cover_report_json(cover)}};
      }
      if (!as_report) {
        emit(artifact, c.out);
        return kOk;
      }
      return finish("construct", c, result, {}, prov);
    }

    if (dualize->parsed()) {
      const auto cover = build_cover(field, parse_cover(read_file(cover_file), c.q));
      const auto d = normalize_and_dualize(cover);
      return finish("dualize", c, dualization_json(d), {}, prov);
    }

    if (primalize_cmd->parsed()) {
      if (vertical_key >= c.q) throw CLI::ValidationError("--vertical-key must be below q");
      const auto g = classify(field, parse_function_table(read_file(function_file)));
      const auto cover =
          vertical_key < 0 ? primalize_best(g) : primalize(g, Elem{static_cast<std::uint16_t>(vertical_key)});
      return finish("primalize", c, cover_report_json(cover), {}, prov);
    }

    if (search->parsed()) {
      SearchOptions so;
      so.exhaustive = samples == 0;
      so.samples = samples;
      so.budget = budget;
      so.seed = c.seed;
      so.workers = c.workers;
      so.max_witnesses = max_witnesses;
      if (!so.exhaustive && (objective == "isolated-edge" || objective == "matching"))
        throw CLI::ValidationError("--sample is available for the triples and besicovitch objectives");
      SearchReport rep;
      if (objective == "triples")
        rep = min_triples_over_permutations(field, so);
      else if (objective == "besicovitch")
        rep = min_besicovitch(field, so);
      else if (objective == "isolated-edge")
        rep = isolated_edge_probe(field, so);
      else
        rep = max_isolated_matching_extremes(field, so);
      prov.seed = c.seed;
      auto violations = rep.violations;
      if (rep.budget_exceeded) std::cerr << "kakeyalab: budget exhausted; report is not exhaustive\n";
      return finish("search", c, search_json(rep), violations, prov);
    }

    if (audit->parsed()) {
      json audits = json::array();
      std::vector<std::string> violations;
      auto take = [&](const AuditReport& a) {
        audits.push_back(audit_json(a));
        for (auto& v : audit_violations(a)) violations.push_back(v);
      };
      if (!function_file.empty()) {
        take(bound_audit(classify(field, parse_function_table(read_file(function_file)))));
        return finish("audit", c, {{"audits", audits}}, violations, prov);
      }
      if (!cover_file.empty()) {
        take(bound_audit(build_cover(field, parse_cover(read_file(cover_file), c.q))));
        return finish("audit", c, {{"audits", audits}}, violations, prov);
      }
      SuiteOptions o;
      o.samples = audit_samples;
      o.seed = c.seed;
      o.workers = c.workers;
      prov.seed = c.seed;
      const auto r = check_bound_audits(c.q, o);
      if (!r.passed) violations.push_back(r.summary);
      take(bound_audit(inverse_construction(field)));
      take(bound_audit(parabola_construction(field)));
      return finish("audit", c, {{"audits", audits}, {"population", check_json(r)}}, violations, prov);
    }

    if (suite->parsed()) {
      sopt.seed = c.seed;
      sopt.workers = c.workers;
      prov.seed = c.seed;
      const auto checks = run_suite(c.q, sopt);
      json arr = json::array();
      std::vector<std::string> violations;
      for (const auto& ch : checks) {
        std::cerr << (ch.passed ? "[PASS] " : (ch.asserted ? "[FAIL] " : "[INFO] ")) << ch.id << " q=" << ch.q << "  "
                  << ch.summary << "\n";
        arr.push_back(check_json(ch));
        if (!ch.passed && ch.asserted) violations.push_back(ch.id + ": " + ch.summary);
      }
      return finish("suite", c, {{"checks", arr}}, violations, prov);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "kakeyalab: " << e.what() << "\n";
    return kUsage;
  } catch (const NotOddPrimePower& e) {
    std::cerr << "kakeyalab: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "kakeyalab: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "kakeyalab: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
