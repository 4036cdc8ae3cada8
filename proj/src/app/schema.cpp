#include "voipstat/app/schema.hpp"

#include <cmath>

namespace voipstat::app {

namespace embedded {
extern const char* const kSessionReportSchema;
extern const char* const kFitReportSchema;
extern const char* const kScenarioSchema;
}  // namespace embedded

namespace {

bool has_type(const Json& v, const std::string& type) {
  if (type == "null") return v.is_null();
  if (type == "boolean") return v.is_boolean();
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    if (!v.is_number_float()) return false;
    const double d = v.get<double>();
    return std::isfinite(d) && std::floor(d) == d;
  }
  return false;
}

class Validator {
 public:
  explicit Validator(const Json& root) : root_(root) {}

  void check(const Json& v, const Json& schema, const std::string& path) {
    if (schema.is_boolean()) {
      if (!schema.get<bool>()) fail(path, "no value allowed");
      return;
    }
    if (auto ref = schema.find("$ref"); ref != schema.end()) {
      check(v, resolve(ref->get<std::string>()), path);
      return;
    }
    if (auto any = schema.find("anyOf"); any != schema.end()) {
      bool ok = false;
      for (const auto& alt : *any) {
        Validator sub(root_);
        sub.check(v, alt, path);
        ok = ok || sub.errors.empty();
      }
      if (!ok) fail(path, "matches none of the anyOf alternatives");
    }
    if (auto t = schema.find("type"); t != schema.end()) {
      bool ok = false;
      if (t->is_string()) {
        ok = has_type(v, t->get<std::string>());
      } else {
        for (const auto& alt : *t) ok = ok || has_type(v, alt.get<std::string>());
      }
      if (!ok) {
        fail(path, "expected type " + t->dump() + ", got " + std::string(v.type_name()));
        return;
      }
    }
    if (auto e = schema.find("enum"); e != schema.end()) {
      bool ok = false;
      for (const auto& alt : *e) ok = ok || alt == v;
      if (!ok) fail(path, "value " + v.dump() + " not in " + e->dump());
    }
    if (auto c = schema.find("const"); c != schema.end() && *c != v) {
      fail(path, "expected " + c->dump());
    }
    if (v.is_number()) {
      const double d = v.get<double>();
      if (auto m = schema.find("minimum"); m != schema.end() && d < m->get<double>()) {
        fail(path, "below minimum " + m->dump());
      }
      if (auto m = schema.find("maximum"); m != schema.end() && d > m->get<double>()) {
        fail(path, "above maximum " + m->dump());
      }
    }
    if (v.is_object()) check_object(v, schema, path);
    if (v.is_array()) {
      if (auto m = schema.find("minItems"); m != schema.end() && v.size() < m->get<std::size_t>()) {
        fail(path, "fewer than " + m->dump() + " items");
      }
      if (auto items = schema.find("items"); items != schema.end()) {
        for (std::size_t i = 0; i < v.size(); ++i) check(v[i], *items, path + "/" + std::to_string(i));
      }
    }
  }

  std::vector<std::string> errors;

 private:
  void check_object(const Json& v, const Json& schema, const std::string& path) {
    if (auto req = schema.find("required"); req != schema.end()) {
      for (const auto& name : *req) {
        if (!v.contains(name.get<std::string>())) fail(path, "missing property '" + name.get<std::string>() + "'");
      }
    }
    const auto props = schema.find("properties");
    const auto extra = schema.find("additionalProperties");
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string child = path + "/" + it.key();
      if (props != schema.end() && props->contains(it.key())) {
        check(it.value(), (*props)[it.key()], child);
      } else if (extra != schema.end()) {
        if (extra->is_boolean()) {
          if (!extra->get<bool>()) fail(child, "unexpected property");
        } else {
          check(it.value(), *extra, child);
        }
      }
    }
  }

  const Json& resolve(const std::string& ref) {
    static const Json empty = Json::object();
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0) {
      fail("", "unsupported reference " + ref);
      return empty;
    }
    const auto defs = root_.find("definitions");
    if (defs == root_.end() || !defs->contains(ref.substr(prefix.size()))) {
      fail("", "unresolved reference " + ref);
      return empty;
    }
    return (*defs)[ref.substr(prefix.size())];
  }

  void fail(const std::string& path, const std::string& msg) { errors.push_back((path.empty() ? "/" : path) + ": " + msg); }

  const Json& root_;
};

}  // namespace

std::vector<std::string> validate_schema(const Json& doc, const Json& schema) {
  Validator v(schema);
  v.check(doc, schema, "");
  return v.errors;
}

const Json& session_report_schema() {
  static const Json s = Json::parse(embedded::kSessionReportSchema);
  return s;
}

const Json& fit_report_schema() {
  static const Json s = Json::parse(embedded::kFitReportSchema);
  return s;
}

const Json& scenario_schema() {
  static const Json s = Json::parse(embedded::kScenarioSchema);
  return s;
}

}  // namespace voipstat::app
