#include "vertiport/document.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vertiport {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw DocumentError(path, message);
}

void require_object(const Json& j, const std::string& path, std::set<std::string> allowed,
                    const std::set<std::string>& required) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [name, value] : j.items()) {
    if (!allowed.contains(name)) fail(path + "." + name, "unknown field");
  }
  for (const auto& name : required) {
    if (!j.contains(name)) fail(path + "." + name, "missing field");
  }
}

const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

int read_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(path, "integer out of range");
  }
  return static_cast<int>(v);
}

std::string read_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Rational read_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) fail(path, "expected an exact rational string such as \"1/3\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

std::vector<int> read_int_table(const Json& j, const std::string& path) {
  std::vector<int> out;
  for (std::size_t t = 0; t < array_at(j, path).size(); ++t) {
    out.push_back(read_int(j[t], path + "[" + std::to_string(t) + "]"));
  }
  return out;
}

std::vector<Rational> read_rational_table(const Json& j, const std::string& path) {
  std::vector<Rational> out;
  for (std::size_t q = 0; q < array_at(j, path).size(); ++q) {
    out.push_back(read_rational(j[q], path + "[" + std::to_string(q) + "]"));
  }
  return out;
}

template <typename T>
void sort_by_id(std::vector<T>& items, const std::string& path) {
  std::stable_sort(items.begin(), items.end(),
                   [](const T& a, const T& b) { return a.id < b.id; });
  for (std::size_t n = 1; n < items.size(); ++n) {
    if (items[n].id == items[n - 1].id) fail(path, "duplicate id \"" + items[n].id + "\"");
  }
}

Vertiport read_vertiport(const Json& j, const std::string& path) {
  require_object(j, path,
                 {"id", "arrival_cap", "departure_cap", "parking_cap", "congestion_cost"},
                 {"id", "arrival_cap", "departure_cap", "parking_cap", "congestion_cost"});
  Vertiport port;
  port.id = read_string(j["id"], path + ".id");
  port.arrival_cap = read_int_table(j["arrival_cap"], path + ".arrival_cap");
  port.departure_cap = read_int_table(j["departure_cap"], path + ".departure_cap");
  port.parking_cap = read_int_table(j["parking_cap"], path + ".parking_cap");
  const std::string cpath = path + ".congestion_cost";
  for (std::size_t t = 0; t < array_at(j["congestion_cost"], cpath).size(); ++t) {
    port.congestion_cost.push_back(
        read_rational_table(j["congestion_cost"][t], cpath + "[" + std::to_string(t) + "]"));
  }
  return port;
}

// Menu entries refer to vertiports by id; indices are resolved once the
// vertiport list is sorted.
struct RawRoute {
  RouteOption route;
  std::string destination;
};
struct RawAircraft {
  std::string id;
  std::string origin;
  std::vector<RawRoute> menu;
  std::string path;
};

RawAircraft read_aircraft(const Json& j, const std::string& path) {
  require_object(j, path, {"id", "origin", "menu"}, {"id", "origin", "menu"});
  RawAircraft ac;
  ac.path = path;
  ac.id = read_string(j["id"], path + ".id");
  ac.origin = read_string(j["origin"], path + ".origin");
  const std::string mpath = path + ".menu";
  bool has_stay = false;
  for (std::size_t k = 0; k < array_at(j["menu"], mpath).size(); ++k) {
    const std::string epath = mpath + "[" + std::to_string(k) + "]";
    const Json& e = j["menu"][k];
    if (!e.is_object()) fail(epath, "expected an object");
    const std::string kind = e.contains("kind") ? read_string(e["kind"], epath + ".kind") : "";
    RawRoute raw;
    if (kind == "stay") {
      require_object(e, epath, {"key", "kind"}, {"key", "kind"});
      raw.route.kind = RouteKind::kStay;
      raw.destination = ac.origin;
      has_stay = true;
    } else if (kind == "transit") {
      require_object(e, epath, {"key", "kind", "depart", "destination", "arrive"},
                     {"key", "kind", "depart", "destination", "arrive"});
      raw.route.kind = RouteKind::kTransit;
      raw.route.depart_time = read_int(e["depart"], epath + ".depart");
      raw.route.arrive_time = read_int(e["arrive"], epath + ".arrive");
      raw.destination = read_string(e["destination"], epath + ".destination");
    } else {
      fail(epath + ".kind", "expected \"stay\" or \"transit\"");
    }
    raw.route.key = read_int(e["key"], epath + ".key");
    ac.menu.push_back(std::move(raw));
  }
  if (!has_stay) fail(mpath, "aircraft \"" + ac.id + "\" has no stay entry");
  std::stable_sort(ac.menu.begin(), ac.menu.end(),
                   [](const RawRoute& a, const RawRoute& b) { return a.route.key < b.route.key; });
  return ac;
}

Instance read_instance(const Json& j) {
  const std::string path = "instance";
  require_object(j, path, {"horizon", "lambda", "vertiports", "operators"},
                 {"horizon", "lambda", "vertiports", "operators"});
  Instance instance;
  instance.horizon = read_int(j["horizon"], path + ".horizon");
  instance.lambda = read_rational(j["lambda"], path + ".lambda");

  const std::string vpath = path + ".vertiports";
  for (std::size_t r = 0; r < array_at(j["vertiports"], vpath).size(); ++r) {
    instance.vertiports.push_back(
        read_vertiport(j["vertiports"][r], vpath + "[" + std::to_string(r) + "]"));
  }
  sort_by_id(instance.vertiports, vpath);
  std::map<std::string, std::size_t> port_index;
  for (std::size_t r = 0; r < instance.vertiports.size(); ++r) {
    port_index[instance.vertiports[r].id] = r;
  }
  auto resolve = [&](const std::string& id, const std::string& where) {
    const auto it = port_index.find(id);
    if (it == port_index.end()) fail(where, "unknown vertiport \"" + id + "\"");
    return it->second;
  };

  const std::string opath = path + ".operators";
  for (std::size_t i = 0; i < array_at(j["operators"], opath).size(); ++i) {
    const std::string ipath = opath + "[" + std::to_string(i) + "]";
    const Json& o = j["operators"][i];
    require_object(o, ipath, {"id", "weight", "fleet"}, {"id", "fleet"});
    Operator op;
    op.id = read_string(o["id"], ipath + ".id");
    if (o.contains("weight")) op.weight = read_rational(o["weight"], ipath + ".weight");
    const std::string fpath = ipath + ".fleet";
    for (std::size_t a = 0; a < array_at(o["fleet"], fpath).size(); ++a) {
      const RawAircraft raw =
          read_aircraft(o["fleet"][a], fpath + "[" + std::to_string(a) + "]");
      Aircraft ac;
      ac.id = raw.id;
      ac.origin = resolve(raw.origin, raw.path + ".origin");
      for (const auto& entry : raw.menu) {
        RouteOption route = entry.route;
        route.destination = resolve(entry.destination, raw.path + ".menu");
        ac.menu.push_back(route);
      }
      op.fleet.push_back(std::move(ac));
    }
    sort_by_id(op.fleet, fpath);
    instance.operators.push_back(std::move(op));
  }
  sort_by_id(instance.operators, opath);
  return instance;
}

ValueProfile read_profile(const Json& j, const Instance& instance, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object keyed by operator id");
  ValueProfile profile = ValueProfile::zeros(instance);
  std::set<std::string> ops;
  for (const auto& op : instance.operators) ops.insert(op.id);
  for (const auto& [name, value] : j.items()) {
    if (!ops.contains(name)) fail(path + "." + name, "unknown operator");
  }
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    const auto& op = instance.operators[i];
    const std::string ipath = path + "." + op.id;
    if (!j.contains(op.id)) fail(ipath, "missing operator");
    const Json& jo = j[op.id];
    if (!jo.is_object()) fail(ipath, "expected an object keyed by aircraft id");
    std::set<std::string> fleet;
    for (const auto& ac : op.fleet) fleet.insert(ac.id);
    for (const auto& [name, value] : jo.items()) {
      if (!fleet.contains(name)) fail(ipath + "." + name, "unknown aircraft");
    }
    for (std::size_t a = 0; a < op.fleet.size(); ++a) {
      const auto& ac = op.fleet[a];
      const std::string apath = ipath + "." + ac.id;
      if (!jo.contains(ac.id)) fail(apath, "missing aircraft");
      auto values = read_rational_table(jo[ac.id], apath);
      if (values.size() != ac.menu.size()) {
        fail(apath, "expected " + std::to_string(ac.menu.size()) + " values, one per menu key");
      }
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] < 0) fail(apath + "[" + std::to_string(k) + "]", "value is negative");
      }
      profile.values[i][a] = std::move(values);
    }
  }
  return profile;
}

Json write_rationals(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

Json write_profile(const Instance& instance, const ValueProfile& profile) {
  Json out = Json::object();
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    Json op = Json::object();
    for (std::size_t a = 0; a < instance.operators[i].fleet.size(); ++a) {
      op[instance.operators[i].fleet[a].id] = write_rationals(profile.values.at(i).at(a));
    }
    out[instance.operators[i].id] = std::move(op);
  }
  return out;
}

Json write_instance(const Instance& instance) {
  Json out;
  out["horizon"] = instance.horizon;
  out["lambda"] = to_string(instance.lambda);
  Json ports = Json::array();
  for (const auto& port : instance.vertiports) {
    Json p;
    p["id"] = port.id;
    p["arrival_cap"] = port.arrival_cap;
    p["departure_cap"] = port.departure_cap;
    p["parking_cap"] = port.parking_cap;
    Json g = Json::array();
    for (const auto& slot : port.congestion_cost) g.push_back(write_rationals(slot));
    p["congestion_cost"] = std::move(g);
    ports.push_back(std::move(p));
  }
  out["vertiports"] = std::move(ports);
  Json ops = Json::array();
  for (const auto& op : instance.operators) {
    Json o;
    o["id"] = op.id;
    o["weight"] = to_string(op.weight);
    Json fleet = Json::array();
    for (const auto& ac : op.fleet) {
      Json a;
      a["id"] = ac.id;
      a["origin"] = instance.vertiports.at(ac.origin).id;
      Json menu = Json::array();
      for (const auto& route : ac.menu) {
        Json e;
        e["key"] = route.key;
        if (route.is_stay()) {
          e["kind"] = "stay";
        } else {
          e["kind"] = "transit";
          e["depart"] = route.depart_time;
          e["destination"] = instance.vertiports.at(route.destination).id;
          e["arrive"] = route.arrive_time;
        }
        menu.push_back(std::move(e));
      }
      a["menu"] = std::move(menu);
      fleet.push_back(std::move(a));
    }
    o["fleet"] = std::move(fleet);
    ops.push_back(std::move(o));
  }
  out["operators"] = std::move(ops);
  return out;
}

void raise_report(const ValidationReport& report, const std::string& prefix) {
  if (report.ok()) return;
  const auto& first = report.violations.front();
  std::string message = first.message;
  if (report.violations.size() > 1) {
    message += " (and " + std::to_string(report.violations.size() - 1) + " more)";
  }
  fail(prefix + first.where, message);
}

}  // namespace

InstanceDocument parse_document(std::string_view text, bool validate) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("$", std::string("malformed JSON: ") + e.what());
  }
  require_object(j, "$", {"schema_version", "instance", "bids", "valuations"},
                 {"schema_version", "instance"});
  InstanceDocument doc;
  doc.schema_version = read_string(j["schema_version"], "schema_version");
  if (doc.schema_version != kSchemaVersion) {
    fail("schema_version", "unsupported version \"" + doc.schema_version + "\"");
  }
  doc.instance = read_instance(j["instance"]);
  if (validate) raise_report(validate_instance(doc.instance), "instance.");
  if (j.contains("bids")) doc.bids = read_profile(j["bids"], doc.instance, "bids");
  if (j.contains("valuations")) {
    doc.valuations = read_profile(j["valuations"], doc.instance, "valuations");
  }
  return doc;
}

std::string render_document(const InstanceDocument& doc) {
  Json j;
  j["schema_version"] = doc.schema_version;
  j["instance"] = write_instance(doc.instance);
  if (doc.bids) j["bids"] = write_profile(doc.instance, *doc.bids);
  if (doc.valuations) j["valuations"] = write_profile(doc.instance, *doc.valuations);
  return j.dump(2) + "\n";
}

InstanceDocument load_document(const std::filesystem::path& path, bool validate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return parse_document(buffer.str(), validate);
}

void save_document(const std::filesystem::path& path, const InstanceDocument& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << render_document(doc);
  if (!out) throw IoError("cannot write " + path.string());
}

BidProfile effective_bids(const InstanceDocument& doc) {
  if (doc.bids) return *doc.bids;
  if (doc.valuations) return *doc.valuations;
  fail("$", "document has neither bids nor valuations");
}

}  // namespace vertiport
