#include "galdef/report_io.hpp"

#include <sstream>

namespace galdef::io {

using ff::u64;

namespace {

constexpr u64 kSafeInteger = 1ULL << 53;

OrderedJson number(u64 v) {
  if (v < kSafeInteger) return v;
  return std::to_string(v);
}

OrderedJson number(const nf::Integer& v) {
  if (abs(v) < nf::Integer(std::to_string(kSafeInteger))) return v.get_si();
  return v.get_str();
}

OrderedJson numbers(const std::vector<u64>& v) {
  OrderedJson out = OrderedJson::array();
  for (u64 x : v) out.push_back(number(x));
  return out;
}

[[noreturn]] void bad(const std::string& path, const std::string& msg) { throw Error(ErrorKind::Schema, msg, path); }

const OrderedJson& at(const OrderedJson& j, const char* key) {
  if (!j.is_object()) bad(key, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(key, "missing field");
  return *it;
}

nf::Integer read_integer(const OrderedJson& j, const char* key) {
  if (j.is_number_unsigned()) return nf::Integer(std::to_string(j.get<std::uint64_t>()));
  if (j.is_number_integer()) return nf::Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) {
    nf::Integer out;
    if (out.set_str(j.get<std::string>(), 10) != 0) bad(key, "malformed integer string");
    return out;
  }
  bad(key, "expected an integer");
}

u64 read_u64(const OrderedJson& j, const char* key) {
  const nf::Integer v = read_integer(j, key);
  if (v < 0) bad(key, "expected a nonnegative integer");
  return std::stoull(v.get_str());
}

u64 get_u64(const OrderedJson& j, const char* key) { return read_u64(at(j, key), key); }

std::vector<u64> get_u64s(const OrderedJson& j, const char* key) {
  const auto& arr = at(j, key);
  if (!arr.is_array()) bad(key, "expected an array");
  std::vector<u64> out;
  for (const auto& x : arr) out.push_back(read_u64(x, key));
  return out;
}

std::string get_string(const OrderedJson& j, const char* key) {
  const auto& v = at(j, key);
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const OrderedJson& j, const char* key) {
  const auto& v = at(j, key);
  if (!v.is_boolean()) bad(key, "expected a boolean");
  return v.get<bool>();
}

mf::EmbeddingDirection direction_from_string(const std::string& s) {
  for (auto d : {mf::EmbeddingDirection::GIntoF, mf::EmbeddingDirection::FIntoG, mf::EmbeddingDirection::CommonExtension}) {
    if (mf::to_string(d) == s) return d;
  }
  bad("direction", "unknown embedding direction " + s);
}

}  // namespace

std::string format_residue(const std::vector<u64>& coeffs) {
  if (coeffs.empty()) return "0";
  std::string out;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] == 0) continue;
    if (!out.empty()) out += " + ";
    const bool unit = coeffs[i] == 1 && i > 0;
    if (!unit) out += std::to_string(coeffs[i]);
    if (i > 0) out += std::string(unit ? "" : "*") + "y" + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return out;
}

// ---------------------------------------------------------------- writers

OrderedJson to_json(const mf::CongruenceWitness& w) {
  OrderedJson j;
  j["other"] = w.other_label;
  j["lambda_f"] = w.lambda_f;
  j["lambda_g"] = w.lambda_g;
  j["direction"] = std::string(mf::to_string(w.direction));
  j["target_field"] = numbers(w.target_field);
  j["source_root"] = numbers(w.source_root);
  j["f_root"] = numbers(w.f_root);
  j["frobenius_power"] = w.frobenius_power;
  j["bound"] = number(w.bound);
  j["indices_compared"] = number(w.indices_compared);
  return j;
}

OrderedJson to_json(const ob::Witness& w) {
  return std::visit(
      [](const auto& x) -> OrderedJson {
        using T = std::decay_t<decltype(x)>;
        OrderedJson j;
        if constexpr (std::is_same_v<T, ob::BoundWitness>) {
          j["kind"] = "bound";
          j["ell"] = number(x.ell);
          j["k"] = x.weight;
        } else if constexpr (std::is_same_v<T, ob::DivisibilityWitness>) {
          j["kind"] = "divisibility";
          j["ell"] = number(x.ell);
          j["p"] = number(x.p);
          j["expression"] = x.expression;
          j["value"] = number(x.value);
        } else if constexpr (std::is_same_v<T, ob::ResidueWitness>) {
          j["kind"] = "residue";
          j["p"] = number(x.p);
          j["lhs_expression"] = x.lhs_expression;
          j["rhs_expression"] = x.rhs_expression;
          j["lhs"] = numbers(x.lhs);
          j["rhs"] = numbers(x.rhs);
        } else if constexpr (std::is_same_v<T, ob::OrdinaryWitness>) {
          j["kind"] = "ordinary";
          j["ell"] = number(x.ell);
          j["k"] = x.weight;
          j["a_ell"] = numbers(x.a_ell);
        } else if constexpr (std::is_same_v<T, ob::CongruenceHitWitness>) {
          j["kind"] = "congruence";
          for (auto& [k, v] : to_json(x.congruence).items()) j[k] = v;
        } else {
          j["kind"] = "power";
          j["p"] = number(x.p);
          j["ell"] = number(x.ell);
          j["p4"] = number(x.p4);
          j["residue"] = number(x.residue);
        }
        j["holds"] = ob::witness_holds(x);
        return j;
      },
      w);
}

OrderedJson to_json(const ob::ConditionHit& hit) {
  OrderedJson j;
  j["id"] = hit.id;
  j["witness"] = to_json(hit.witness);
  if (!hit.mechanism.empty()) j["mechanism"] = hit.mechanism;
  if (hit.against_optimal_level) j["against_optimal_level"] = true;
  j["text"] = describe(hit);
  return j;
}

OrderedJson to_json(const ob::ObstructionReport& r) {
  OrderedJson j;
  OrderedJson q;
  q["label"] = r.query.label;
  q["level"] = number(r.query.level);
  q["weight"] = r.query.weight;
  q["ell"] = number(r.query.ell);
  q["lambda_index"] = r.query.lambda_index;
  q["lambda_factor"] = numbers(r.query.lambda_factor);
  q["residue_degree"] = r.query.residue_degree;
  q["lambda_indeterminate"] = r.query.lambda_indeterminate;
  q["extra_primes"] = numbers(r.query.extra_primes);
  q["S"] = numbers(r.query.S);
  q["N_S"] = number(r.query.N_S);
  j["query"] = std::move(q);

  j["hits"] = OrderedJson::array();
  for (const auto& h : r.hits) j["hits"].push_back(to_json(h));
  j["inconclusive"] = OrderedJson::array();
  for (const auto& i : r.inconclusive) j["inconclusive"].push_back(OrderedJson{{"id", i.id}, {"reason", i.reason}});

  OrderedJson hyp;
  hyp["ell_gt_3"] = r.hypotheses.ell_gt_3;
  hyp["absolutely_irreducible_asserted"] = r.hypotheses.absolutely_irreducible_asserted;
  hyp["field_irreducibility"] = r.hypotheses.field_irreducibility;
  j["hypotheses"] = std::move(hyp);
  j["verdict"] = std::string(ob::to_string(r.verdict));

  j["checks"] = OrderedJson::array();
  for (const auto& c : r.checks) {
    OrderedJson cj;
    cj["id"] = c.id;
    cj["holds"] = c.holds;
    cj["inconclusive"] = c.inconclusive;
    cj["evidence"] = OrderedJson::array();
    for (const auto& e : c.evidence) cj["evidence"].push_back(to_json(e));
    cj["note"] = c.note;
    j["checks"].push_back(std::move(cj));
  }
  j["note"] = r.note;
  return j;
}

OrderedJson to_json(const ob::Supplementary& s) {
  OrderedJson j;
  j["p"] = number(s.p);
  j["alpha"] = s.alpha;
  j["case"] = std::string(ob::to_string(s.tag));
  j["branches"] = s.branches;
  return j;
}

OrderedJson to_json(const ob::AdmissibleLevel& level) {
  OrderedJson j;
  j["level"] = number(level.level);
  j["supplementary"] = OrderedJson::array();
  for (const auto& s : level.supplementary) j["supplementary"].push_back(to_json(s));
  return j;
}

// ---------------------------------------------------------------- readers

mf::CongruenceWitness congruence_from_json(const OrderedJson& j) {
  return mf::CongruenceWitness{get_string(j, "other"),
                               static_cast<std::size_t>(get_u64(j, "lambda_f")),
                               static_cast<std::size_t>(get_u64(j, "lambda_g")),
                               direction_from_string(get_string(j, "direction")),
                               get_u64s(j, "target_field"),
                               get_u64s(j, "source_root"),
                               get_u64s(j, "f_root"),
                               static_cast<unsigned>(get_u64(j, "frobenius_power")),
                               get_u64(j, "bound"),
                               get_u64(j, "indices_compared")};
}

ob::Witness witness_from_json(const OrderedJson& j) {
  const std::string kind = get_string(j, "kind");
  if (kind == "bound") return ob::BoundWitness{get_u64(j, "ell"), static_cast<int>(get_u64(j, "k"))};
  if (kind == "divisibility") {
    return ob::DivisibilityWitness{get_u64(j, "ell"), get_u64(j, "p"), get_string(j, "expression"), read_integer(at(j, "value"), "value")};
  }
  if (kind == "residue") {
    return ob::ResidueWitness{get_u64(j, "p"), get_string(j, "lhs_expression"), get_string(j, "rhs_expression"), get_u64s(j, "lhs"),
                              get_u64s(j, "rhs")};
  }
  if (kind == "ordinary") return ob::OrdinaryWitness{get_u64(j, "ell"), static_cast<int>(get_u64(j, "k")), get_u64s(j, "a_ell")};
  if (kind == "congruence") return ob::CongruenceHitWitness{congruence_from_json(j)};
  if (kind == "power") {
    return ob::PowerWitness{get_u64(j, "p"), get_u64(j, "ell"), read_integer(at(j, "p4"), "p4"), get_u64(j, "residue")};
  }
  bad("kind", "unknown witness kind " + kind);
}

ob::ConditionHit hit_from_json(const OrderedJson& j) {
  ob::ConditionHit h{static_cast<int>(get_u64(j, "id")), witness_from_json(at(j, "witness")), {}, false};
  if (auto it = j.find("mechanism"); it != j.end()) h.mechanism = it->get<std::string>();
  if (auto it = j.find("against_optimal_level"); it != j.end()) h.against_optimal_level = it->get<bool>();
  return h;
}

ob::ObstructionReport report_from_json(const OrderedJson& j) {
  ob::ObstructionReport r;
  const auto& q = at(j, "query");
  r.query = ob::QuerySummary{get_string(q, "label"),
                             get_u64(q, "level"),
                             static_cast<int>(get_u64(q, "weight")),
                             get_u64(q, "ell"),
                             static_cast<std::size_t>(get_u64(q, "lambda_index")),
                             get_u64s(q, "lambda_factor"),
                             static_cast<int>(get_u64(q, "residue_degree")),
                             get_bool(q, "lambda_indeterminate"),
                             get_u64s(q, "extra_primes"),
                             get_u64s(q, "S"),
                             read_integer(at(q, "N_S"), "N_S")};
  for (const auto& h : at(j, "hits")) r.hits.push_back(hit_from_json(h));
  for (const auto& i : at(j, "inconclusive")) r.inconclusive.push_back(ob::Inconclusive{static_cast<int>(get_u64(i, "id")), get_string(i, "reason")});
  const auto& hyp = at(j, "hypotheses");
  r.hypotheses = ob::Hypotheses{get_bool(hyp, "ell_gt_3"), get_bool(hyp, "absolutely_irreducible_asserted"),
                                get_string(hyp, "field_irreducibility")};
  auto v = ob::verdict_from_string(get_string(j, "verdict"));
  if (!v) bad("verdict", "unknown verdict");
  r.verdict = *v;
  for (const auto& c : at(j, "checks")) {
    ob::ConditionCheck check{static_cast<int>(get_u64(c, "id")), get_bool(c, "holds"), get_bool(c, "inconclusive"), {}, get_string(c, "note")};
    for (const auto& e : at(c, "evidence")) check.evidence.push_back(hit_from_json(e));
    r.checks.push_back(std::move(check));
  }
  r.note = get_string(j, "note");
  return r;
}

// ------------------------------------------------------------------- text

std::string describe(const ob::ConditionHit& hit) {
  const bool holds = ob::witness_holds(hit.witness);
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        std::ostringstream s;
        if constexpr (std::is_same_v<T, ob::BoundWitness>) {
          s << "ell = " << x.ell << (holds ? " <= " : " > ") << "k = " << x.weight;
        } else if constexpr (std::is_same_v<T, ob::DivisibilityWitness>) {
          s << x.ell << (holds ? " | " : " does not divide ") << x.expression << " = " << x.value.get_str();
          if (x.p) s << " (p = " << x.p << ")";
        } else if constexpr (std::is_same_v<T, ob::ResidueWitness>) {
          const std::string p = x.p ? " (p = " + std::to_string(x.p) + ")" : "";
          s << x.lhs_expression << " = " << format_residue(x.lhs) << (holds ? " == " : " != ") << format_residue(x.rhs) << " = "
            << x.rhs_expression << " mod lambda" << p;
        } else if constexpr (std::is_same_v<T, ob::OrdinaryWitness>) {
          s << "ell = k + 1 = " << x.ell << " and a_ell = " << format_residue(x.a_ell) << " is a unit mod lambda";
        } else if constexpr (std::is_same_v<T, ob::CongruenceHitWitness>) {
          const auto& w = x.congruence;
          s << "f == " << w.other_label << " mod lambda at all " << w.indices_compared << " indices n <= " << w.bound
            << " coprime to ell N N' (lambda_g = " << w.lambda_g << ", " << mf::to_string(w.direction) << ", Frobenius power "
            << w.frobenius_power << ")";
        } else {
          s << x.p << "^4 = " << x.p4.get_str() << " ≡ " << x.residue << " (mod " << x.ell << ")";
        }
        if (!hit.mechanism.empty()) s << " [" << hit.mechanism << (hit.against_optimal_level ? ", optimal level" : "") << "]";
        return s.str();
      },
      hit.witness);
}

std::string render_text(const ob::ObstructionReport& r) {
  std::ostringstream s;
  const auto& q = r.query;
  s << q.label << "  N = " << q.level << "  k = " << q.weight << "  ell = " << q.ell << "  lambda[" << q.lambda_index
    << "] residue degree " << q.residue_degree << (q.lambda_indeterminate ? " (indeterminate)" : "") << "\n";
  s << "  S = {";
  for (std::size_t i = 0; i < q.S.size(); ++i) s << (i ? ", " : "") << q.S[i];
  s << "}  N_S = " << q.N_S.get_str() << "\n";
  for (const auto& c : r.checks) {
    s << "  (" << c.id << ")" << (c.id < 10 ? "  " : " ") << (c.holds ? "HOLDS" : c.inconclusive ? "inconclusive" : "fails");
    if (!c.note.empty()) s << "  " << c.note;
    s << "\n";
    for (const auto& e : c.evidence) s << "        " << describe(e) << "\n";
  }
  s << "  hypotheses: ell > 3 " << (r.hypotheses.ell_gt_3 ? "yes" : "no") << ", absolute irreducibility asserted "
    << (r.hypotheses.absolutely_irreducible_asserted ? "yes" : "no") << ", Hecke polynomial irreducibility "
    << r.hypotheses.field_irreducibility << "\n";
  s << "  verdict: " << ob::to_string(r.verdict) << "\n";
  return s.str();
}

}  // namespace galdef::io
