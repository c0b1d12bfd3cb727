#include "cmtsim/report.hpp"

#include "cmtsim/errors.hpp"
#include "cmtsim/io.hpp"

namespace cmtsim {

double StatReport::stat(const std::string& name) const {
  for (const auto& [k, v] : stats)
    if (k == name) return v;
  throw usage_error("StatReport: no stat named " + name);
}

void StatReport::evaluate() {
  pass = true;
  for (const auto& [name, b] : thresholds) {
    const double v = stat(name);
    if (!(v >= b.lo && v <= b.hi)) pass = false;
  }
}

namespace {
void json_escape_into(std::string& out, const std::string& s) {
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
}
}  // namespace

std::string StatReport::to_json() const {
  std::string out = "{\"suite\":\"";
  json_escape_into(out, suite);
  out += "\",\"seed\":" + std::to_string(seed);
  out += ",\"reps\":" + std::to_string(reps);
  out += ",\"stats\":{";
  for (size_t i = 0; i < stats.size(); ++i) {
    if (i) out += ',';
    out += '"';
    json_escape_into(out, stats[i].first);
    out += "\":" + format17(stats[i].second);
  }
  out += "},\"thresholds\":{";
  for (size_t i = 0; i < thresholds.size(); ++i) {
    if (i) out += ',';
    out += '"';
    json_escape_into(out, thresholds[i].first);
    out += "\":[" + format17(thresholds[i].second.lo) + ',' +
           format17(thresholds[i].second.hi) + ']';
  }
  out += "},\"soft\":";
  out += soft ? "true" : "false";
  out += ",\"pass\":";
  out += pass ? "true" : "false";
  out += "}";
  return out;
}

}  // namespace cmtsim
