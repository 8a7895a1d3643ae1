#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "dws/theorems.hpp"

namespace dws {

// Writer for the machine-readable report format: bracketed sections, one
// `key = value` per line (the same shape the config parser reads).
class ReportWriter {
 public:
  void section(const std::string& name) { out_ << "[" << name << "]\n"; }
  void kv(const std::string& key, const std::string& value) {
    out_ << key << " = " << value << "\n";
  }
  void kv(const std::string& key, const char* value) { kv(key, std::string(value)); }
  void kv(const std::string& key, const Scalar& v) { kv(key, v.str()); }
  void kv(const std::string& key, bool v) { kv(key, std::string(v ? "true" : "false")); }
  void kv(const std::string& key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    kv(key, std::string(buf));
  }
  void kv(const std::string& key, long v) { kv(key, std::to_string(v)); }
  void blank() { out_ << "\n"; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline void write_verdict(ReportWriter& w, const Verdict& v) {
  w.section("verdict");
  w.kv("theorem", theorem_name(v.id));
  if (!v.case_label.empty()) w.kv("case", v.case_label);
  w.kv("satisfied", v.satisfied);
  if (v.kappa) {
    w.kv("kappa", *v.kappa);
    w.kv("kappa_side", v.kappa_side);
  }
  if (v.admissible_p) w.kv("p_range", v.admissible_p->str("p"));
  if (v.admissible_q) w.kv("q_range", v.admissible_q->str("q"));

  for (const auto& c : v.clauses) {
    w.section("verdict.clause." + c.name);
    w.kv("requirement", c.requirement);
    w.kv("actual", c.actual);
    w.kv("pass", c.pass);
    if (c.boundary) w.kv("boundary", true);
  }

  auto envelope = [&](const char* side, const DecayEnvelope& env) {
    w.section(std::string("verdict.envelope.") + side);
    w.kv("loss", env.loss);
    for (const auto& e : env.entries) {
      std::string desc = "(1+B)^(" + e.exponent.str() + ")";
      if (e.l > 0) desc = "b(t)^-" + std::to_string(e.l) + " * " + desc;
      w.kv(e.norm_label, desc);
    }
  };
  envelope("u", v.envelope_u);
  envelope("v", v.envelope_v);

  if (!v.warnings.empty()) {
    w.section("verdict.warnings");
    for (std::size_t i = 0; i < v.warnings.size(); ++i)
      w.kv("warning_" + std::to_string(i), v.warnings[i]);
  }
  if (!v.notes.empty()) {
    w.section("verdict.notes");
    for (std::size_t i = 0; i < v.notes.size(); ++i)
      w.kv("note_" + std::to_string(i), v.notes[i]);
  }
}

}  // namespace dws
