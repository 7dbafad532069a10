#include "galdef/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <iomanip>
#include <algorithm>

#include "galdef/report_io.hpp"

namespace galdef::cli {

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::HypothesisViolated ? kHypothesis : kInputError; }

mf::Gallery self_gallery(const NewformPtr& f) { return mf::Gallery{{f}, f->complete_gallery_for}; }

namespace {

OrderedJson lambda_json(const nf::PrimeAbove& lambda) {
  OrderedJson j;
  j["lambda_index"] = lambda.index;
  j["factor"] = lambda.local_factor.coeffs();
  j["residue_degree"] = lambda.residue_degree();
  j["indeterminate"] = lambda.indeterminate();
  return j;
}

std::vector<ob::ObstructionReport> check_reports(const NewformPtr& f, const mf::Gallery& gallery, u64 ell, const std::set<u64>& extra,
                                                 const ob::CheckOptions& opts) {
  std::vector<ob::ObstructionReport> out;
  for (const auto& q : ob::make_queries(f, ell, extra)) out.push_back(ob::check_conditions(q, gallery, opts));
  return out;
}

std::vector<nf::PrimeAbove> primes_for(const mf::Newform& f, u64 ell) {
  if (!ff::is_prime(ell)) throw Error(ErrorKind::NonPrimeModulus, std::to_string(ell) + " is not prime", "ell");
  if (f.level % ell == 0) throw Error(ErrorKind::Precondition, std::to_string(ell) + " divides the level " + std::to_string(f.level), "ell");
  return nf::primes_above(f.field, ell);
}

}  // namespace

OrderedJson check_json(const NewformPtr& f, const mf::Gallery& gallery, u64 ell, const std::set<u64>& extra, const ob::CheckOptions& opts) {
  OrderedJson out = OrderedJson::array();
  for (const auto& r : check_reports(f, gallery, ell, extra, opts)) out.push_back(io::to_json(r));
  return out;
}

OrderedJson scan_json(const NewformPtr& f, const mf::Gallery& gallery, u64 ell_max, const std::set<u64>& extra, const ob::CheckOptions& opts) {
  OrderedJson rows = OrderedJson::array();
  for (const auto& [ell, entry] : ob::scan_unobstructed(f, gallery, extra, ell_max, opts)) {
    if (entry.error) {
      rows.push_back(OrderedJson{{"ell", ell}, {"error", *entry.error}});
      continue;
    }
    for (const auto& r : entry.reports) {
      OrderedJson row;
      row["ell"] = ell;
      row["lambda_index"] = r.query.lambda_index;
      row["verdict"] = std::string(ob::to_string(r.verdict));
      std::set<int> ids;
      for (const auto& h : r.hits) ids.insert(h.id);
      row["hit_ids"] = ids;
      std::set<int> open;
      for (const auto& i : r.inconclusive) open.insert(i.id);
      row["inconclusive_ids"] = open;
      row["report"] = io::to_json(r);
      rows.push_back(std::move(row));
    }
  }
  OrderedJson out;
  out["label"] = f->label;
  out["ell_max"] = ell_max;
  out["rows"] = std::move(rows);
  return out;
}

OrderedJson levels_json(const mf::Newform& f, u64 ell, u64 p_max, unsigned alpha_budget) {
  OrderedJson out;
  out["label"] = f.label;
  out["level"] = f.level;
  out["ell"] = ell;
  out["p_max"] = p_max;
  out["alpha_budget"] = alpha_budget;
  out["lambdas"] = OrderedJson::array();
  for (const auto& lambda : primes_for(f, ell)) {
    const ob::AdmissibleLevels adm = ob::admissible_levels(f, lambda, p_max, alpha_budget);
    OrderedJson lj = lambda_json(lambda);
    lj["tagged"] = OrderedJson::array();
    for (const auto& s : adm.tagged) {
      OrderedJson sj = io::to_json(s);
      try {
        sj["witness"] = io::to_json(ob::witness_obstruction(f, lambda, s.p, s.tag));
      } catch (const Error& e) {
        sj["witness_error"] = e.what();
      }
      lj["tagged"].push_back(std::move(sj));
    }
    lj["excluded"] = OrderedJson::array();
    for (const auto& x : adm.excluded) lj["excluded"].push_back(OrderedJson{{"p", x.p}, {"reason", x.reason}});
    lj["levels"] = OrderedJson::array();
    for (const auto& l : adm.levels) lj["levels"].push_back(io::to_json(l));
    out["lambdas"].push_back(std::move(lj));
  }
  return out;
}

OrderedJson congruences_json(const mf::Newform& f, const mf::Gallery& gallery, u64 ell_max, u64 seed) {
  const auto members = mf::comparison_set(f, gallery);
  OrderedJson out;
  out["label"] = f.label;
  out["ell_max"] = ell_max;
  out["comparison_set"] = OrderedJson::array();
  for (const auto& g : members) out["comparison_set"].push_back(g->label);
  std::set<u64> primes, unresolved;
  OrderedJson details = OrderedJson::array();
  for (u64 ell : mf::primes_in_range(2, ell_max)) {
    if (f.level % ell == 0) continue;
    ff::Rng rng(seed ^ (ell * 0x9e3779b97f4a7c15ULL));
    bool open = false;
    for (const auto& g : members) {
      const mf::CongruenceResult r = mf::compare_forms(f, *g, ell, rng);
      for (const auto& w : r.witnesses) {
        primes.insert(ell);
        OrderedJson wj = io::to_json(w);
        wj["ell"] = ell;
        details.push_back(std::move(wj));
      }
      open = open || !r.unresolved.empty();
    }
    if (open && !primes.count(ell)) unresolved.insert(ell);
  }
  out["primes"] = primes;
  out["unresolved"] = unresolved;
  out["witnesses"] = std::move(details);
  return out;
}

OrderedJson h2bound_json(const mf::Newform& f, u64 ell, u64 level_prime) {
  if (level_prime == 0 || level_prime % f.level != 0) {
    throw Error(ErrorKind::Precondition, std::to_string(f.level) + " does not divide " + std::to_string(level_prime), "level");
  }
  const u64 m = level_prime / f.level;
  const auto primes = mf::prime_divisors(m);
  const u64 p_max = primes.empty() ? 1 : primes.back();
  OrderedJson out;
  out["label"] = f.label;
  out["level"] = f.level;
  out["level_prime"] = level_prime;
  out["ell"] = ell;
  out["lambdas"] = OrderedJson::array();
  for (const auto& lambda : primes_for(f, ell)) {
    OrderedJson lj = lambda_json(lambda);
    try {
      const auto adm = ob::admissible_levels(f, lambda, p_max, 0);
      ob::AdmissibleLevel level{level_prime, {}};
      for (u64 p : primes) {
        const unsigned alpha = mf::valuation(m, p);
        auto it = std::find_if(adm.tagged.begin(), adm.tagged.end(), [&](const ob::Supplementary& s) { return s.p == p && s.alpha == alpha; });
        if (it == adm.tagged.end()) {
          throw Error(ErrorKind::Precondition, std::to_string(p) + "^" + std::to_string(alpha) + " is not an admissible supplementary factor",
                      "level");
        }
        level.supplementary.push_back(*it);
      }
      const ob::H2Bound b = ob::h2_lower_bound(f, level, lambda);
      lj["bound"] = b.bound;
      lj["admissible_level"] = io::to_json(level);
      lj["witnesses"] = OrderedJson::array();
      for (const auto& w : b.witnesses) lj["witnesses"].push_back(io::to_json(w));
    } catch (const Error& e) {
      lj["error"] = e.what();
    }
    out["lambdas"].push_back(std::move(lj));
  }
  return out;
}

// -------------------------------------------------------------------- run

namespace {

struct RunConfig {
  std::string form_path;
  std::string gallery_path;
  u64 ell = 0;
  u64 ell_max = 0;
  u64 p_max = 100;
  unsigned alpha_budget = 1;
  u64 level_prime = 0;
  std::vector<u64> extra_primes;
  u64 seed = ff::kDefaultSeed;
  std::string format = "text";
  bool assume_irreducible = true;
};

void add_common(CLI::App* cmd, RunConfig& cfg, bool with_gallery) {
  cmd->add_option("form", cfg.form_path, "Newform record (JSON)")->required()->check(CLI::ExistingFile);
  if (with_gallery) {
    cmd->add_option("gallery,--gallery", cfg.gallery_path, "Gallery file (JSON)")->check(CLI::ExistingFile);
  }
  cmd->add_option("--seed", cfg.seed, "Seed for randomized splitting")->capture_default_str();
  cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

void add_battery_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--extra-primes", cfg.extra_primes, "Primes added to S beyond those dividing N")->delimiter(',');
  cmd->add_flag("--assume-irreducible,!--no-assume-irreducible", cfg.assume_irreducible,
                "Assert absolute irreducibility of the residual representation");
}

void print_json(std::ostream& out, const OrderedJson& j) { out << j.dump(2) << "\n"; }

void levels_text(std::ostream& out, const OrderedJson& j) {
  out << j["label"].get<std::string>() << "  N = " << j["level"] << "  ell = " << j["ell"] << "  p_max = " << j["p_max"]
      << "  alpha budget = " << j["alpha_budget"] << "\n";
  for (const auto& lj : j["lambdas"]) {
    out << "lambda[" << lj["lambda_index"] << "] residue degree " << lj["residue_degree"] << "\n";
    for (const auto& s : lj["tagged"]) {
      out << "  p = " << s["p"] << "  alpha = " << s["alpha"] << "  case " << s["case"].get<std::string>();
      if (s.contains("witness")) {
        out << "  (" << s["witness"]["id"] << ") " << s["witness"]["text"].get<std::string>();
      } else {
        out << "  witness failed: " << s["witness_error"].get<std::string>();
      }
      out << "\n";
    }
    for (const auto& x : lj["excluded"]) out << "  excluded p = " << x["p"] << ": " << x["reason"].get<std::string>() << "\n";
    out << "  levels:";
    for (const auto& l : lj["levels"]) out << " " << l["level"];
    out << "\n";
  }
}

void congruences_text(std::ostream& out, const OrderedJson& j) {
  out << j["label"].get<std::string>() << "  comparison set:";
  for (const auto& g : j["comparison_set"]) out << " " << g.get<std::string>();
  out << "\n  congruence primes <= " << j["ell_max"] << ": " << j["primes"].dump() << "\n";
  out << "  unresolved: " << j["unresolved"].dump() << "\n";
  for (const auto& w : j["witnesses"]) {
    out << "  ell = " << w["ell"] << "  " << w["other"].get<std::string>() << "  lambda_f = " << w["lambda_f"]
        << "  lambda_g = " << w["lambda_g"] << "  " << w["direction"].get<std::string>() << "  indices compared "
        << w["indices_compared"] << " (bound " << w["bound"] << ")\n";
  }
}

void h2_text(std::ostream& out, const OrderedJson& j) {
  out << j["label"].get<std::string>() << "  N = " << j["level"] << "  N' = " << j["level_prime"] << "  ell = " << j["ell"] << "\n";
  for (const auto& lj : j["lambdas"]) {
    out << "lambda[" << lj["lambda_index"] << "]  ";
    if (lj.contains("error")) {
      out << "error: " << lj["error"].get<std::string>() << "\n";
      continue;
    }
    out << "dim H^2 >= " << lj["bound"] << "\n";
    for (const auto& w : lj["witnesses"]) out << "  (" << w["id"] << ") " << w["text"].get<std::string>() << "\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Obstruction checks for modular Galois deformation problems", "galdef"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "Run the ten-condition battery at every prime above ell");
  add_common(check, cfg, true);
  add_battery_flags(check, cfg);
  check->add_option("--ell", cfg.ell, "Residue prime")->required();

  auto* scan = app.add_subcommand("scan", "Run the battery for every prime 3 < ell <= ell-max");
  add_common(scan, cfg, true);
  add_battery_flags(scan, cfg);
  scan->add_option("--ell-max", cfg.ell_max, "Largest residue prime")->required();

  auto* levels = app.add_subcommand("levels", "Enumerate admissible non-optimal levels with obstruction witnesses");
  add_common(levels, cfg, false);
  levels->add_option("--ell", cfg.ell, "Residue prime")->required();
  levels->add_option("--p-max", cfg.p_max, "Largest supplementary prime")->capture_default_str();
  levels->add_option("--alpha-budget", cfg.alpha_budget, "Most supplementary primes per level")->capture_default_str();

  auto* congruences = app.add_subcommand("congruences", "Congruence primes against the gallery");
  add_common(congruences, cfg, true);
  congruences->add_option("--ell-max", cfg.ell_max, "Largest prime tested")->required();

  auto* h2 = app.add_subcommand("h2bound", "Lower bound for dim H^2 at a non-optimal level");
  add_common(h2, cfg, false);
  h2->add_option("--ell", cfg.ell, "Residue prime")->required();
  h2->add_option("--level", cfg.level_prime, "Non-optimal level N'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  const bool json = cfg.format == "json";
  try {
    auto form = std::make_shared<const mf::Newform>(mf::load_newform(cfg.form_path));
    auto gallery = [&] { return cfg.gallery_path.empty() ? self_gallery(form) : mf::load_gallery(cfg.gallery_path); };
    const std::set<u64> extra(cfg.extra_primes.begin(), cfg.extra_primes.end());
    const ob::CheckOptions opts{cfg.assume_irreducible, cfg.seed};

    if (check->parsed()) {
      const auto reports = check_reports(form, gallery(), cfg.ell, extra, opts);
      if (json) {
        OrderedJson arr = OrderedJson::array();
        for (const auto& r : reports) arr.push_back(io::to_json(r));
        print_json(out, arr);
      } else {
        for (const auto& r : reports) out << io::render_text(r);
      }
      const bool all_violated = std::all_of(reports.begin(), reports.end(),
                                            [](const ob::ObstructionReport& r) { return r.verdict == ob::Verdict::HypothesisViolated; });
      return !reports.empty() && all_violated ? kHypothesis : kComputed;
    }
    if (scan->parsed()) {
      const OrderedJson j = scan_json(form, gallery(), cfg.ell_max, extra, opts);
      if (json) {
        print_json(out, j);
      } else {
        out << "ell  lambda  verdict                 hits\n";
        for (const auto& row : j["rows"]) {
          out << std::left << std::setw(5) << row["ell"].get<u64>();
          if (row.contains("error")) {
            out << "-       error: " << row["error"].get<std::string>() << "\n";
            continue;
          }
          out << std::setw(8) << row["lambda_index"].get<u64>() << std::setw(24) << row["verdict"].get<std::string>();
          std::string ids;
          for (const auto& id : row["hit_ids"]) ids += (ids.empty() ? "" : ",") + std::to_string(id.get<int>());
          out << (ids.empty() ? "-" : ids) << "\n";
        }
      }
      return kComputed;
    }
    if (levels->parsed()) {
      const OrderedJson j = levels_json(*form, cfg.ell, cfg.p_max, cfg.alpha_budget);
      json ? print_json(out, j) : levels_text(out, j);
      return kComputed;
    }
    if (congruences->parsed()) {
      const OrderedJson j = congruences_json(*form, gallery(), cfg.ell_max, cfg.seed);
      json ? print_json(out, j) : congruences_text(out, j);
      return kComputed;
    }
    if (h2->parsed()) {
      const OrderedJson j = h2bound_json(*form, cfg.ell, cfg.level_prime);
      json ? print_json(out, j) : h2_text(out, j);
      return kComputed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInputError;
}

}  // namespace galdef::cli
