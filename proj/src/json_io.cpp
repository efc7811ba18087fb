#include "spectradiag/json_io.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "spectradiag/errors.hpp"

namespace spectradiag {
namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& path, const std::string& what_arg) {
  fail(errc::parse_error, path + ": " + what_arg);
}

ojson parse_document(const std::string& text, const std::string& path) {
  try {
    return ojson::parse(text);
  } catch (const ojson::exception& e) {
    bad(path, e.what());
  }
}

// Strict object shape: every expected key present (unless marked optional by
// the caller handing in a default), no unknown keys. Typos in hand-written
// input surface as errors instead of silently dropping a field.
void reject_unknown_keys(const ojson& node, std::initializer_list<const char*> known,
                         const std::string& path) {
  for (const auto& item : node.items()) {
    bool ok = false;
    for (const char* key : known) ok = ok || item.key() == key;
    if (!ok) bad(path, "unknown key \"" + item.key() + "\"");
  }
}

const ojson& member(const ojson& node, const char* key, const std::string& path) {
  if (!node.is_object()) bad(path, "expected an object");
  const auto it = node.find(key);
  if (it == node.end()) bad(path, std::string("missing key \"") + key + "\"");
  return *it;
}

Scalar rational(const ojson& node, const std::string& path) {
  if (!node.is_string()) bad(path, "expected a rational string");
  try {
    return Scalar::parse(node.get<std::string>());
  } catch (const error& e) {
    bad(path, e.what());
  }
}

std::uint64_t unsigned_int(const ojson& node, const std::string& path) {
  if (!node.is_number_unsigned()) bad(path, "expected a nonnegative integer");
  return node.get<std::uint64_t>();
}

const ojson& array_member(const ojson& node, const char* key, const std::string& path) {
  const ojson& value = member(node, key, path);
  if (!value.is_array()) bad(path + "." + key, "expected an array");
  return value;
}

ojson sequence_to_node(const DiagonalSequence& seq) {
  ojson doc = ojson::object();
  doc["bounds"] = ojson::array({seq.lo().str(), seq.hi().str()});
  ojson atoms = ojson::array();
  for (const auto& [value, count] : seq.atoms()) {
    ojson a = ojson::object();
    a["value"] = value.str();
    a["count"] = count;
    atoms.push_back(std::move(a));
  }
  doc["atoms"] = std::move(atoms);
  ojson infinite = ojson::array();
  for (const Scalar& v : seq.infinite_atoms()) infinite.push_back(v.str());
  doc["infinite_atoms"] = std::move(infinite);
  ojson tails = ojson::array();
  for (const GeometricTail& t : seq.tails()) {
    ojson tj = ojson::object();
    tj["limit"] = t.limit.str();
    tj["coeff"] = t.coeff.str();
    tj["ratio"] = t.ratio.str();
    tails.push_back(std::move(tj));
  }
  doc["tails"] = std::move(tails);
  return doc;
}

std::string finish(const ojson& doc) { return doc.dump(2) + "\n"; }

}  // namespace

DiagonalSequence sequence_from_json(const std::string& text) {
  const ojson doc = parse_document(text, "sequence");
  if (!doc.is_object()) bad("sequence", "expected an object");
  reject_unknown_keys(doc, {"bounds", "atoms", "infinite_atoms", "tails"}, "sequence");

  const ojson& bounds = array_member(doc, "bounds", "sequence");
  if (bounds.size() != 2) bad("sequence.bounds", "expected exactly two entries [lo, hi]");
  Scalar lo = rational(bounds[0], "sequence.bounds[0]");
  Scalar hi = rational(bounds[1], "sequence.bounds[1]");

  std::vector<DiagonalSequence::Atom> atoms;
  if (doc.contains("atoms")) {
    const ojson& list = array_member(doc, "atoms", "sequence");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "sequence.atoms[" + std::to_string(i) + "]";
      const ojson& a = list[i];
      if (!a.is_object()) bad(path, "expected an object");
      reject_unknown_keys(a, {"value", "count"}, path);
      atoms.emplace_back(rational(member(a, "value", path), path + ".value"),
                         unsigned_int(member(a, "count", path), path + ".count"));
    }
  }

  std::vector<Scalar> infinite_atoms;
  if (doc.contains("infinite_atoms")) {
    const ojson& list = array_member(doc, "infinite_atoms", "sequence");
    for (std::size_t i = 0; i < list.size(); ++i)
      infinite_atoms.push_back(rational(list[i], "sequence.infinite_atoms[" + std::to_string(i) + "]"));
  }

  std::vector<GeometricTail> tails;
  if (doc.contains("tails")) {
    const ojson& list = array_member(doc, "tails", "sequence");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "sequence.tails[" + std::to_string(i) + "]";
      const ojson& t = list[i];
      if (!t.is_object()) bad(path, "expected an object");
      reject_unknown_keys(t, {"limit", "coeff", "ratio"}, path);
      tails.push_back(GeometricTail{rational(member(t, "limit", path), path + ".limit"),
                                    rational(member(t, "coeff", path), path + ".coeff"),
                                    rational(member(t, "ratio", path), path + ".ratio")});
    }
  }

  return DiagonalSequence::create(std::move(lo), std::move(hi), std::move(atoms),
                                  std::move(infinite_atoms), std::move(tails));
}

SpectrumSpec spectrum_from_json(const std::string& text) {
  const ojson doc = parse_document(text, "spectrum");
  if (!doc.is_object()) bad("spectrum", "expected an object");
  reject_unknown_keys(doc, {"pairs"}, "spectrum");

  const ojson& list = array_member(doc, "pairs", "spectrum");
  std::vector<SpectrumSpec::Pair> pairs;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "spectrum.pairs[" + std::to_string(i) + "]";
    const ojson& p = list[i];
    if (!p.is_object()) bad(path, "expected an object");
    reject_unknown_keys(p, {"eigenvalue", "multiplicity"}, path);
    Scalar eigenvalue = rational(member(p, "eigenvalue", path), path + ".eigenvalue");
    const ojson& mult = member(p, "multiplicity", path);
    ExtendedCount count{0};
    if (mult.is_number_unsigned()) {
      count = ExtendedCount(mult.get<std::uint64_t>());
    } else if (mult.is_string()) {
      try {
        count = ExtendedCount::parse(mult.get<std::string>());
      } catch (const error& e) {
        bad(path + ".multiplicity", e.what());
      }
    } else {
      bad(path + ".multiplicity", "expected a nonnegative integer or \"inf\"");
    }
    pairs.emplace_back(std::move(eigenvalue), count);
  }
  return SpectrumSpec::create(std::move(pairs));
}

std::vector<Scalar> lambda_from_json(const std::string& text) {
  const ojson doc = parse_document(text, "lambda");
  if (!doc.is_array()) bad("lambda", "expected an array of rational strings");
  std::vector<Scalar> values;
  for (std::size_t i = 0; i < doc.size(); ++i)
    values.push_back(rational(doc[i], "lambda[" + std::to_string(i) + "]"));
  return values;
}

std::string to_json(const DiagonalSequence& seq) { return finish(sequence_to_node(seq)); }

std::string to_json(const SpectrumSpec& spec) {
  ojson doc = ojson::object();
  ojson pairs = ojson::array();
  for (const auto& [eigenvalue, multiplicity] : spec.pairs()) {
    ojson p = ojson::object();
    p["eigenvalue"] = eigenvalue.str();
    if (multiplicity.is_infinite())
      p["multiplicity"] = "inf";
    else
      p["multiplicity"] = multiplicity.finite_value();
    pairs.push_back(std::move(p));
  }
  doc["pairs"] = std::move(pairs);
  return finish(doc);
}

std::string to_json(const FeasibilityVerdict& verdict) {
  ojson doc = ojson::object();
  doc["feasible"] = verdict.feasible;
  doc["branch"] = branch_name(verdict.branch);
  if (verdict.k0) doc["k0"] = verdict.k0->numerator().convert_to<std::int64_t>();
  ojson slacks = ojson::array();
  for (const auto& [id, margin] : verdict.slacks)
    slacks.push_back(ojson::array({id, margin.str()}));
  doc["slacks"] = std::move(slacks);
  if (verdict.failed_condition) doc["failed_condition"] = *verdict.failed_condition;
  return finish(doc);
}

std::string to_json(const MinimalElementReport& report) {
  ojson doc = ojson::object();
  doc["eta"] = report.eta.str();
  ojson entries = ojson::array();
  for (const MinimalElement& e : report.entries) {
    ojson ej = ojson::object();
    ej["k"] = e.k;
    ojson mu = ojson::array();
    for (const Scalar& x : e.mu) mu.push_back(x.str());
    ej["mu"] = std::move(mu);
    ej["case"] = minimal_case_name(e.tag);
    if (e.a) ej["a"] = e.a->str();
    if (e.b) ej["b"] = e.b->str();
    if (e.Na) ej["Na"] = *e.Na;
    if (e.Nb) ej["Nb"] = *e.Nb;
    entries.push_back(std::move(ej));
  }
  doc["entries"] = std::move(entries);
  return finish(doc);
}

std::string to_json(const TransformResult& result) {
  ojson doc = ojson::object();
  doc["sequence"] = sequence_to_node(result.sequence);
  ojson receipt = ojson::object();
  receipt["moved_mass"] = result.receipt.moved_mass.str();
  receipt["touched_indices"] = result.receipt.touched_indices;
  ojson changes = ojson::array();
  for (const AggregateChange& c : result.receipt.changes) {
    ojson cj = ojson::object();
    cj["label"] = c.label;
    cj["threshold"] = c.threshold.str();
    cj["before"] = c.before.str();
    cj["after"] = c.after.str();
    changes.push_back(std::move(cj));
  }
  receipt["changes"] = std::move(changes);
  doc["receipt"] = std::move(receipt);
  return finish(doc);
}

}  // namespace spectradiag
