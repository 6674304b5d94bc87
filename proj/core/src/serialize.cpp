#include "quadloop/serialize.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace quadloop {

namespace {

using nlohmann::json;

json cx_json(Cx z) { return json::array({z.real(), z.imag()}); }

Cx cx_parse(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw SerializationError("complex values are [re, im] pairs");
  }
  return Cx(j[0].get<double>(), j[1].get<double>());
}

json c3_json(const C3& v) { return json::array({cx_json(v[0]), cx_json(v[1]), cx_json(v[2])}); }

C3 c3_parse(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw SerializationError("points are triples of complex values");
  }
  return C3{cx_parse(j[0]), cx_parse(j[1]), cx_parse(j[2])};
}

json coeffs_json(const std::vector<C3>& coeffs) {
  json out = json::array();
  for (const auto& c : coeffs) out.push_back(c3_json(c));
  return out;
}

std::vector<C3> coeffs_parse(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw SerializationError("coefficient list must be a nonempty array");
  }
  std::vector<C3> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(c3_parse(e));
  return out;
}

json parse_root(const std::string& text, const char* record) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SerializationError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", -1) != kSchemaVersion ||
      j.value("record", "") != record) {
    throw SerializationError(std::string("expected schema ") +
                             std::to_string(kSchemaVersion) + " record '" + record + "'");
  }
  return j;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw SerializationError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SerializationError(std::string("malformed field '") + key + "'");
  }
}

std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

json loop_json(const Loop& x) {
  return json{{"schema", kSchemaVersion},
              {"record", "loop"},
              {"sobolev_k", x.sobolev_k()},
              {"coeffs", coeffs_json(x.coeffs())}};
}

Loop loop_parse(const json& j) {
  auto coeffs = coeffs_parse(j.contains("coeffs") ? j.at("coeffs") : json());
  if (coeffs.size() % 2 == 0) {
    throw SerializationError("loop coefficient count must be odd (2N+1)");
  }
  return Loop(std::move(coeffs), field<int>(j, "sobolev_k"));
}

json disc_json(const AnalyticDisc& d) {
  return json{{"schema", kSchemaVersion},
              {"record", "disc"},
              {"n_grid", d.n_grid()},
              {"coeffs", coeffs_json(d.coeffs())}};
}

AnalyticDisc disc_parse(const json& j) {
  return AnalyticDisc(coeffs_parse(j.contains("coeffs") ? j.at("coeffs") : json()),
                      field<int>(j, "n_grid"));
}

}  // namespace

std::string loop_to_json(const Loop& x) { return loop_json(x).dump(2); }

Loop loop_from_json(const std::string& text) {
  return loop_parse(parse_root(text, "loop"));
}

std::string curve_to_json(const LoopCurve& c) {
  json loops = json::array();
  for (const auto& x : c.loops()) {
    loops.push_back(json{{"sobolev_k", x.sobolev_k()}, {"coeffs", coeffs_json(x.coeffs())}});
  }
  return json{{"schema", kSchemaVersion},
              {"record", "loop_curve"},
              {"times", c.times()},
              {"loops", loops}}
      .dump(2);
}

LoopCurve curve_from_json(const std::string& text) {
  const json j = parse_root(text, "loop_curve");
  const auto times = field<std::vector<double>>(j, "times");
  if (!j.contains("loops") || !j.at("loops").is_array() ||
      j.at("loops").size() != times.size()) {
    throw SerializationError("times and loops must have equal length");
  }
  std::vector<Loop> loops;
  loops.reserve(times.size());
  for (const auto& e : j.at("loops")) loops.push_back(loop_parse(e));
  return LoopCurve(std::move(times), std::move(loops));
}

std::string disc_to_json(const AnalyticDisc& d) { return disc_json(d).dump(2); }

AnalyticDisc disc_from_json(const std::string& text) {
  return disc_parse(parse_root(text, "disc"));
}

std::string push_problem_to_json(const PushProblem& p) {
  return json{{"schema", kSchemaVersion},
              {"record", "push_problem"},
              {"kappa_disc", disc_json(p.kappa_disc)},
              {"alpha", p.alpha},
              {"eta", p.eta},
              {"J", p.J},
              {"region", json{{"a", p.region.a}, {"b", p.region.b}, {"c", p.region.c}}}}
      .dump(2);
}

PushProblem push_problem_from_json(const std::string& text) {
  const json j = parse_root(text, "push_problem");
  PushProblem p;
  if (!j.contains("kappa_disc")) throw SerializationError("missing field 'kappa_disc'");
  p.kappa_disc = disc_parse(j.at("kappa_disc"));
  p.alpha = field<std::vector<double>>(j, "alpha");
  p.eta = field<double>(j, "eta");
  p.J = field<int>(j, "J");
  if (j.contains("region")) {
    const json& r = j.at("region");
    p.region.a = field<double>(r, "a");
    p.region.b = field<double>(r, "b");
    p.region.c = field<double>(r, "c");
  }
  return p;
}

std::string push_report_to_json(const PushReport& r) {
  return json{{"schema", kSchemaVersion},
              {"record", "push_report"},
              {"delta0", r.delta0},
              {"identity_error", r.identity_error},
              {"center_error", r.center_error},
              {"boundary_low", r.boundary_low},
              {"boundary_high", r.boundary_high},
              {"interior_low", r.interior_low},
              {"interior_high", r.interior_high},
              {"pass_i", r.pass_i},
              {"pass_ii", r.pass_ii},
              {"pass_iii", r.pass_iii},
              {"pass_iv", r.pass_iv},
              {"fejer_error", r.fejer_error},
              {"section_phase", r.section_phase},
              {"degree_support_ok", r.degree_support_ok}}
      .dump(2);
}

std::string certificate_to_json(const HarmonicCertificate& c) {
  json coeffs = json::array();
  for (const Cx z : c.theta.coeffs) coeffs.push_back(cx_json(z));
  return json{{"schema", kSchemaVersion},
              {"record", "harmonic_certificate"},
              {"delta", c.delta},
              {"theta", coeffs},
              {"report",
               json{{"pass", c.build_report.pass},
                    {"value_at_zero_error", c.build_report.value_at_zero_error},
                    {"sup_re_disc", c.build_report.sup_re_disc},
                    {"margin_off_gamma", c.build_report.margin_off_gamma},
                    {"boundary_grid", c.build_report.boundary_grid},
                    {"degree", c.build_report.degree}}}}
      .dump(2);
}

HarmonicCertificate certificate_from_json(const std::string& text) {
  const json j = parse_root(text, "harmonic_certificate");
  HarmonicCertificate c;
  c.delta = field<double>(j, "delta");
  if (!j.contains("theta") || !j.at("theta").is_array() || j.at("theta").empty()) {
    throw SerializationError("missing polynomial coefficients");
  }
  for (const auto& e : j.at("theta")) c.theta.coeffs.push_back(cx_parse(e));
  if (j.contains("report")) {
    const json& r = j.at("report");
    c.build_report.pass = field<bool>(r, "pass");
    c.build_report.value_at_zero_error = field<double>(r, "value_at_zero_error");
    c.build_report.sup_re_disc = field<double>(r, "sup_re_disc");
    c.build_report.margin_off_gamma = field<double>(r, "margin_off_gamma");
    c.build_report.boundary_grid = field<int>(r, "boundary_grid");
    c.build_report.degree = field<int>(r, "degree");
  }
  return c;
}

std::string chain_to_json(const ContinuationChain& chain) {
  json records = json::array();
  for (const auto& r : chain.records) {
    records.push_back(json{{"t", r.t},
                           {"value", cx_json(r.value)},
                           {"delta1", r.delta1},
                           {"overlap_residual", r.overlap_residual}});
  }
  return json{{"schema", kSchemaVersion},
              {"record", "continuation_chain"},
              {"delta", chain.delta},
              {"epsilon", chain.epsilon},
              {"records", records}}
      .dump(2);
}

std::string monodromy_to_json(const MonodromyResult& r) {
  return json{{"schema", kSchemaVersion},
              {"record", "monodromy_result"},
              {"increment", cx_json(r.increment)},
              {"frame_holonomy", r.frame_holonomy},
              {"anchored", r.anchored},
              {"boundary_kappa_min", r.boundary_kappa_min},
              {"start_value", cx_json(r.chain.start_value())},
              {"end_value", cx_json(r.chain.end_value())},
              {"steps", r.chain.records.size()}}
      .dump(2);
}

std::string chain_to_csv(const ContinuationChain& chain) {
  std::ostringstream out;
  out << "t,f_re,f_im,delta1,overlap_residual\n";
  for (const auto& r : chain.records) {
    out << csv_num(r.t) << ',' << csv_num(r.value.real()) << ',' << csv_num(r.value.imag())
        << ',' << csv_num(r.delta1) << ',' << csv_num(r.overlap_residual) << '\n';
  }
  return out.str();
}

std::string monodromy_trace_csv(const MonodromyResult& r) {
  std::ostringstream out;
  out << "t,f_re,f_im,kappa_margin\n";
  for (const auto& rec : r.chain.records) {
    out << csv_num(rec.t) << ',' << csv_num(rec.value.real()) << ','
        << csv_num(rec.value.imag()) << ',' << csv_num(r.boundary_kappa_min) << '\n';
  }
  return out.str();
}

}  // namespace quadloop
