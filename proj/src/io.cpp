#include "ka/io.hpp"

#include <cmath>
#include <fstream>

namespace ka {

namespace {

json cplx_json(cplx c) { return {{"re", c.real()}, {"im", c.imag()}}; }

cplx cplx_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  return {j.value("re", 0.0), j.value("im", 0.0)};
}

json residual_map(const std::map<std::string, double>& m) {
  json out = json::object();
  // JSON has no infinities; they are written as null.
  for (const auto& [k, v] : m) out[k] = std::isfinite(v) ? json(v) : json(nullptr);
  return out;
}

}  // namespace

json to_json(const Multivector& a) {
  json terms = json::array();
  for (const auto& [b, c] : a.terms()) {
    if (c == 0.0) continue;
    json idx = json::array();
    for (int i = 0; i < a.sig().d(); ++i)
      if (b & (Blade(1) << i)) idx.push_back(i + 1);
    terms.push_back({{"blade", idx}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"p", a.sig().p}, {"q", a.sig().q}, {"terms", terms}};
}

Multivector multivector_from_json(const json& j) {
  try {
    Signature sig(j.at("p").get<int>(), j.at("q").get<int>());
    Multivector out(sig);
    for (const auto& t : j.at("terms")) {
      Blade b = 0;
      int last = 0;
      for (const auto& i : t.at("blade")) {
        int k = i.get<int>();
        if (k < 1 || k > sig.d()) throw Error("blade index out of range: " + std::to_string(k));
        if (k <= last) throw Error("blade indices must be strictly ascending");
        last = k;
        b |= Blade(1) << (k - 1);
      }
      out.add(b, cplx(t.value("re", 0.0), t.value("im", 0.0)));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed multivector JSON: ") + e.what());
  }
}

json to_json(const SpinorData& s) {
  json comps = json::array();
  for (Eigen::Index i = 0; i < s.comps.size(); ++i) comps.push_back(cplx_json(s.comps(i)));
  return {{"comps", comps}, {"chirality", s.chirality ? json(*s.chirality) : json(nullptr)}};
}

SpinorData spinor_from_json(const json& j) {
  try {
    SpinorData s;
    const json& c = j.at("comps");
    s.comps.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) s.comps(i) = cplx_from(c[i]);
    if (j.contains("chirality") && !j["chirality"].is_null()) {
      int m = j["chirality"].get<int>();
      if (m != 1 && m != -1) throw Error("chirality must be 1, -1 or null");
      s.chirality = m;
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed spinor JSON: ") + e.what());
  }
}

json to_json(const StructureData& d) {
  json scalars = json::object(), forms = json::object(), factors = json::array();
  for (const auto& [k, v] : d.scalars) scalars[k] = cplx_json(v);
  for (const auto& [k, v] : d.forms) forms[k] = to_json(v);
  for (const auto& f : d.factors) factors.push_back(to_json(f));
  return {{"tag", to_string(d.tag)}, {"p", d.sig.p},     {"q", d.sig.q},          {"kind", to_string(d.kind)},
          {"mu", d.mu},              {"scalars", scalars}, {"forms", forms}, {"factors", factors}};
}

StructureData structure_from_json(const json& j) {
  try {
    StructureData d;
    d.tag = structure_tag_from_string(j.at("tag").get<std::string>());
    d.sig = Signature(j.at("p").get<int>(), j.at("q").get<int>());
    std::string kind = j.value("kind", "hermitian");
    if (kind == "hermitian")
      d.kind = PairingKind::hermitian;
    else if (kind == "bilinear")
      d.kind = PairingKind::bilinear;
    else
      throw Error("unknown pairing kind " + kind);
    d.mu = j.value("mu", 1);
    if (j.contains("scalars"))
      for (const auto& [k, v] : j["scalars"].items()) d.scalars[k] = cplx_from(v);
    if (j.contains("forms"))
      for (const auto& [k, v] : j["forms"].items()) {
        Multivector m = multivector_from_json(v);
        if (m.sig() != d.sig) throw Error("form " + k + " has signature " + m.sig().str());
        d.forms[k] = m;
      }
    if (j.contains("factors"))
      for (const auto& v : j["factors"]) d.factors.push_back(multivector_from_json(v));
    return d;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed structure JSON: ") + e.what());
  }
}

json to_json(const VerificationReport& r) {
  json out = {{"passed", r.passed}, {"tol", r.tol}, {"residuals", residual_map(r.residuals)}};
  if (!r.witness.empty()) out["witness"] = to_json(r.witness);
  return out;
}

json to_json(const ConditionReport& r) {
  return {{"passed", r.passed},
          {"tol", r.tol},
          {"case", to_string(r.dimension_case)},
          {"residuals", residual_map(r.residuals)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace ka
