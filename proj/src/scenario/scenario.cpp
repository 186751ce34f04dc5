#include "twinslice/scenario/scenario.hpp"
#include "twinslice/error.hpp"
#include "twinslice/net/routing.hpp"
#include "twinslice/scenario/units.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace twinslice {

using Json = nlohmann::json;

namespace {

std::string
joinErrors(const std::vector<std::string>& errors)
{
  std::string out = "ValidationError: " + std::to_string(errors.size()) + " problem(s)";
  for (const auto& e : errors)
    out += "\n  " + e;
  return out;
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> errors)
  : std::runtime_error(joinErrors(errors))
  , m_errors(std::move(errors))
{
}

std::optional<NodeId>
Scenario::findNode(std::string_view name) const
{
  for (NodeId i = 0; i < topology.nodes.size(); ++i)
    if (topology.nodes[i].name == name)
      return i;
  return std::nullopt;
}

std::string
sha256Hex(std::string_view bytes)
{
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

namespace {

// Reads one document, collecting every problem instead of stopping at the
// first. Each problem is prefixed with the path of the offending field.
class Reader
{
public:
  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  static std::string at(const std::string& path, std::string_view key)
  {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }
  static std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

  bool object(const Json& j, const std::string& path)
  {
    if (j.is_object())
      return true;
    error(path, "expected an object");
    return false;
  }

  bool array(const Json& j, const std::string& path)
  {
    if (j.is_array())
      return true;
    error(path, "expected an array");
    return false;
  }

  void keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> allowed)
  {
    for (const auto& [k, v] : obj.items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        error(at(path, k), "unknown field");
  }

  const Json* find(const Json& obj, std::string_view key, const std::string& path, bool required)
  {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) {
      if (required)
        error(at(path, key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string(const Json& obj, std::string_view key, const std::string& path,
                                    bool required = false)
  {
    const Json* j = find(obj, key, path, required);
    if (!j)
      return std::nullopt;
    if (!j->is_string()) {
      error(at(path, key), "expected a string");
      return std::nullopt;
    }
    return j->get<std::string>();
  }

  std::optional<double> number(const Json& obj, std::string_view key, const std::string& path,
                               bool required = false)
  {
    const Json* j = find(obj, key, path, required);
    if (!j)
      return std::nullopt;
    if (!j->is_number() || !std::isfinite(j->get<double>())) {
      error(at(path, key), "expected a finite number");
      return std::nullopt;
    }
    return j->get<double>();
  }

  std::optional<std::uint64_t> integer(const Json& obj, std::string_view key, const std::string& path,
                                       bool required = false)
  {
    const Json* j = find(obj, key, path, required);
    if (!j)
      return std::nullopt;
    if (!j->is_number_unsigned() && !(j->is_number_integer() && j->get<std::int64_t>() >= 0)) {
      error(at(path, key), "expected a non-negative integer");
      return std::nullopt;
    }
    return j->get<std::uint64_t>();
  }

  std::optional<bool> boolean(const Json& obj, std::string_view key, const std::string& path)
  {
    const Json* j = find(obj, key, path, false);
    if (!j)
      return std::nullopt;
    if (!j->is_boolean()) {
      error(at(path, key), "expected true or false");
      return std::nullopt;
    }
    return j->get<bool>();
  }

  // Integers are taken as nanoseconds / bps / pJ; strings carry a unit suffix.
  template <typename T, typename Parse>
  std::optional<T> quantity(const Json& obj, std::string_view key, const std::string& path, bool required,
                            Parse parse, std::string_view what)
  {
    const Json* j = find(obj, key, path, required);
    if (!j)
      return std::nullopt;
    std::optional<T> v;
    if (j->is_number_unsigned() || (j->is_number_integer() && j->get<std::int64_t>() >= 0))
      v = T{j->get<std::uint64_t>()};
    else if (j->is_string())
      v = parse(j->get<std::string>());
    if (!v)
      error(at(path, key), "expected " + std::string(what));
    return v;
  }

  std::optional<SimTime> duration(const Json& obj, std::string_view key, const std::string& path,
                                  bool required = false)
  {
    return quantity<SimTime>(obj, key, path, required, units::parseDuration,
                             "a duration such as \"10ms\" (ns, us, ms, s)");
  }

  std::optional<std::uint64_t> rate(const Json& obj, std::string_view key, const std::string& path,
                                    bool required = false)
  {
    return quantity<std::uint64_t>(obj, key, path, required, units::parseRate,
                                   "a rate such as \"10gbps\" (bps, kbps, mbps, gbps, tbps)");
  }

  std::optional<std::uint64_t> energy(const Json& obj, std::string_view key, const std::string& path,
                                      bool required = false)
  {
    return quantity<std::uint64_t>(obj, key, path, required, units::parseEnergy,
                                   "an energy such as \"10uJ\" (pJ, nJ, uJ, mJ, J)");
  }
};

struct DeviceGroup
{
  std::string prefix;
  std::vector<NodeId> devices;
};

class ScenarioParser
{
public:
  explicit ScenarioParser(const Json& root) : m_root(root) {}

  Scenario parse()
  {
    if (!r.object(m_root, "<root>"))
      throw ValidationError(r.errors);
    r.keys(m_root, "",
           {"meta", "topology", "twins", "twin_groups", "contracts", "admission", "workloads", "faults", "run"});
    parseMeta();
    parseRun();
    parseTopology();
    parseContracts();
    parseAdmission();
    parseWorkloads();
    parseTwins();
    parseFaults();
    if (r.errors.empty())
      checkReachability();
    if (!r.errors.empty())
      throw ValidationError(r.errors);
    return std::move(s);
  }

private:
  const Json* section(std::string_view key, bool required = false)
  {
    const Json* j = r.find(m_root, key, "", required);
    return j;
  }

  void parseMeta()
  {
    const Json* meta = section("meta", true);
    if (!meta || !r.object(*meta, "meta"))
      return;
    r.keys(*meta, "meta", {"name", "description"});
    if (auto v = r.string(*meta, "name", "meta", true))
      s.name = *v;
    if (auto v = r.string(*meta, "description", "meta"))
      s.description = *v;
  }

  void parseRun()
  {
    const Json* run = section("run", true);
    if (!run || !r.object(*run, "run"))
      return;
    const std::string p = "run";
    r.keys(*run, p, {"t_end", "master_seed", "formats", "output", "detail", "metrics_period"});
    if (auto v = r.duration(*run, "t_end", p, true)) {
      if (v->ticks == 0)
        r.error("run.t_end", "must be positive");
      s.run.tEnd = *v;
    }
    if (auto v = r.integer(*run, "master_seed", p))
      s.run.masterSeed = *v;
    if (const Json* f = r.find(*run, "formats", p, false); f && r.array(*f, "run.formats")) {
      s.run.json = s.run.csv = false;
      for (std::size_t i = 0; i < f->size(); ++i) {
        const auto& e = (*f)[i];
        if (e == "json")
          s.run.json = true;
        else if (e == "csv")
          s.run.csv = true;
        else
          r.error(Reader::at("run.formats", i), "expected \"json\" or \"csv\"");
      }
    }
    if (auto v = r.string(*run, "output", p))
      s.run.output = *v;
    if (auto v = r.boolean(*run, "detail", p))
      s.run.detail = *v;
    if (auto v = r.duration(*run, "metrics_period", p))
      s.run.metricsPeriod = *v;
  }

  // A node reference is a node name or a numeric node id.
  std::optional<NodeId> nodeRef(const Json& j, const std::string& path)
  {
    if (j.is_string()) {
      if (auto it = m_nodeIndex.find(j.get<std::string>()); it != m_nodeIndex.end())
        return it->second;
      r.error(path, "unknown node '" + j.get<std::string>() + "'");
      return std::nullopt;
    }
    if (j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
      const auto id = j.get<std::uint64_t>();
      if (id < s.topology.nodes.size())
        return static_cast<NodeId>(id);
      r.error(path, "unknown node " + std::to_string(id));
      return std::nullopt;
    }
    r.error(path, "expected a node name or id");
    return std::nullopt;
  }

  std::optional<NodeId> nodeField(const Json& obj, std::string_view key, const std::string& path, bool required)
  {
    const Json* j = r.find(obj, key, path, required);
    if (!j)
      return std::nullopt;
    return nodeRef(*j, Reader::at(path, key));
  }

  bool expectKind(std::optional<NodeId> id, NodeKind kind, const std::string& path)
  {
    if (!id)
      return false;
    if (s.topology.nodes[*id].kind != kind) {
      r.error(path, "node '" + s.nodeName(*id) + "' must be a " + std::string(toString(kind)) + " node");
      return false;
    }
    return true;
  }

  void parseLinkParams(const Json& obj, const std::string& path, LinkSpec& link)
  {
    if (auto v = r.rate(obj, "rate", path))
      link.rateBps = *v;
    if (auto v = r.duration(obj, "prop_delay", path))
      link.propDelay = *v;
    if (auto v = r.number(obj, "loss", path))
      link.lossProb = *v;
    if (auto v = r.integer(obj, "queue_cap", path)) {
      if (*v == 0 || *v > 0xffffffffULL)
        r.error(Reader::at(path, "queue_cap"), "must be in [1, 2^32)");
      else
        link.queueCap = static_cast<std::uint32_t>(*v);
    }
  }

  void parseTopology()
  {
    const Json* topo = section("topology", true);
    if (!topo || !r.object(*topo, "topology"))
      return;
    const std::string p = "topology";
    r.keys(*topo, p, {"nodes", "device_groups", "link_defaults", "links", "stack", "spectrum"});

    std::set<std::string> names;
    auto addNode = [&](std::string name, NodeKind kind, const std::string& path) {
      if (name.empty())
        r.error(path, "node name must not be empty");
      else if (!names.insert(name).second)
        r.error(path, "duplicate node name '" + name + "'");
      s.topology.nodes.push_back(NodeSpec{std::move(name), kind});
      m_nodeIndex[s.topology.nodes.back().name] = static_cast<NodeId>(s.topology.nodes.size() - 1);
    };

    if (const Json* nodes = r.find(*topo, "nodes", p, true); nodes && r.array(*nodes, "topology.nodes")) {
      for (std::size_t i = 0; i < nodes->size(); ++i) {
        const std::string np = Reader::at("topology.nodes", i);
        const auto& n = (*nodes)[i];
        if (!r.object(n, np))
          continue;
        r.keys(n, np, {"name", "kind"});
        auto name = r.string(n, "name", np, true);
        auto kindText = r.string(n, "kind", np, true);
        std::optional<NodeKind> kind;
        if (kindText && !(kind = parseNodeKind(*kindText)))
          r.error(Reader::at(np, "kind"), "expected \"device\", \"edge\" or \"core\"");
        addNode(name.value_or(""), kind.value_or(NodeKind::Device), np);
      }
    }

    LinkSpec defaults;
    if (const Json* d = r.find(*topo, "link_defaults", p, false); d && r.object(*d, "topology.link_defaults")) {
      r.keys(*d, "topology.link_defaults", {"rate", "prop_delay", "loss", "queue_cap"});
      parseLinkParams(*d, "topology.link_defaults", defaults);
    }

    // Device groups create `count` devices named <prefix><i>, each linked to
    // one of `edges` in round-robin order.
    if (const Json* groups = r.find(*topo, "device_groups", p, false);
        groups && r.array(*groups, "topology.device_groups")) {
      for (std::size_t i = 0; i < groups->size(); ++i) {
        const std::string gp = Reader::at("topology.device_groups", i);
        const auto& g = (*groups)[i];
        if (!r.object(g, gp))
          continue;
        r.keys(g, gp, {"prefix", "count", "edges", "link"});
        auto prefix = r.string(g, "prefix", gp, true);
        auto count = r.integer(g, "count", gp, true);
        std::vector<NodeId> edges;
        if (const Json* e = r.find(g, "edges", gp, true); e && r.array(*e, Reader::at(gp, "edges"))) {
          for (std::size_t k = 0; k < e->size(); ++k) {
            const std::string ep = Reader::at(Reader::at(gp, "edges"), k);
            auto id = nodeRef((*e)[k], ep);
            if (expectKind(id, NodeKind::EdgeNode, ep))
              edges.push_back(*id);
          }
          if (e->empty())
            r.error(Reader::at(gp, "edges"), "must list at least one edge node");
        }
        LinkSpec params = defaults;
        if (const Json* l = r.find(g, "link", gp, false); l && r.object(*l, Reader::at(gp, "link"))) {
          r.keys(*l, Reader::at(gp, "link"), {"rate", "prop_delay", "loss", "queue_cap"});
          parseLinkParams(*l, Reader::at(gp, "link"), params);
        }
        if (!prefix || !count || edges.empty())
          continue;
        if (*count == 0 || *count > 1'000'000) {
          r.error(Reader::at(gp, "count"), "must be in [1, 1000000]");
          continue;
        }
        DeviceGroup group{*prefix, {}};
        for (std::uint64_t k = 0; k < *count; ++k) {
          addNode(*prefix + std::to_string(k), NodeKind::Device, gp);
          const NodeId dev = static_cast<NodeId>(s.topology.nodes.size() - 1);
          group.devices.push_back(dev);
          LinkSpec link = params;
          link.a = dev;
          link.b = edges[k % edges.size()];
          link.name = s.topology.nodes[dev].name + "-" + s.topology.nodes[link.b].name;
          s.topology.links.push_back(std::move(link));
        }
        m_groups.push_back(std::move(group));
      }
    }

    if (const Json* links = r.find(*topo, "links", p, false); links && r.array(*links, "topology.links")) {
      std::set<std::string> linkNames;
      for (const auto& l : s.topology.links)
        linkNames.insert(l.name);
      for (std::size_t i = 0; i < links->size(); ++i) {
        const std::string lp = Reader::at("topology.links", i);
        const auto& l = (*links)[i];
        if (!r.object(l, lp))
          continue;
        r.keys(l, lp, {"name", "a", "b", "rate", "prop_delay", "loss", "queue_cap"});
        LinkSpec link = defaults;
        const std::size_t before = r.errors.size();
        auto a = nodeField(l, "a", lp, true);
        auto b = nodeField(l, "b", lp, true);
        parseLinkParams(l, lp, link);
        // Name the link in its own errors; the index alone is hard to find.
        if (l.contains("name") && l["name"].is_string())
          for (std::size_t e = before; e < r.errors.size(); ++e)
            r.errors[e] += " (link '" + l["name"].get<std::string>() + "')";
        if (!a || !b)
          continue;
        link.a = *a;
        link.b = *b;
        link.name = r.string(l, "name", lp).value_or(s.nodeName(*a) + "-" + s.nodeName(*b));
        if (!linkNames.insert(link.name).second)
          r.error(lp, "duplicate link name '" + link.name + "'");
        s.topology.links.push_back(std::move(link));
      }
    }

    if (const Json* stack = r.find(*topo, "stack", p, false); stack && r.object(*stack, "topology.stack"))
      parseStack(*stack, "topology.stack");

    if (const Json* sp = r.find(*topo, "spectrum", p, false); sp && r.object(*sp, "topology.spectrum")) {
      r.keys(*sp, "topology.spectrum", {"frequency_thz", "wavelength_um"});
      s.frequencyThz = r.number(*sp, "frequency_thz", "topology.spectrum");
      s.wavelengthUm = r.number(*sp, "wavelength_um", "topology.spectrum");
    }

    m_neighbors.assign(s.topology.nodes.size(), {});
    for (const auto& l : s.topology.links)
      if (l.a < m_neighbors.size() && l.b < m_neighbors.size()) {
        m_neighbors[l.a].push_back(l.b);
        m_neighbors[l.b].push_back(l.a);
      }

    if (!s.topology.nodes.empty())
      for (const auto& e : Topology::validate(s.topology))
        r.error("topology", e);
  }

  void parseStack(const Json& j, const std::string& p)
  {
    r.keys(j, p, {"transport", "overhead", "handshake_rtts", "setup_latency"});
    auto& st = s.stack;
    if (auto t = r.string(j, "transport", p)) {
      if (*t == "quic")
        st.transport = Transport::Quic;
      else if (*t == "udp")
        st.transport = Transport::Udp;
      else
        r.error(Reader::at(p, "transport"), "expected \"quic\" or \"udp\"");
    }
    if (const Json* o = r.find(j, "overhead", p, false); o && r.object(*o, Reader::at(p, "overhead"))) {
      const std::string op = Reader::at(p, "overhead");
      r.keys(*o, op, {"alp", "mqtt", "tls", "quic", "udp", "ipv6", "phy"});
      auto field = [&](std::string_view key, std::uint32_t& dst) {
        if (auto v = r.integer(*o, key, op)) {
          if (*v > 65535)
            r.error(Reader::at(op, key), "header larger than 65535 bytes");
          else
            dst = static_cast<std::uint32_t>(*v);
        }
      };
      field("alp", st.alp);
      field("mqtt", st.mqtt);
      field("tls", st.tls);
      field("quic", st.quic);
      field("udp", st.udp);
      field("ipv6", st.ipv6);
      field("phy", st.phy);
    }
    if (const Json* h = r.find(j, "handshake_rtts", p, false); h && r.object(*h, Reader::at(p, "handshake_rtts"))) {
      const std::string hp = Reader::at(p, "handshake_rtts");
      r.keys(*h, hp, {"tls", "quic"});
      if (auto v = r.integer(*h, "tls", hp))
        st.tlsHandshakeRtts = static_cast<std::uint32_t>(std::min<std::uint64_t>(*v, 64));
      if (auto v = r.integer(*h, "quic", hp))
        st.quicHandshakeRtts = static_cast<std::uint32_t>(std::min<std::uint64_t>(*v, 64));
    }
    if (const Json* sl = r.find(j, "setup_latency", p, false); sl && !(sl->is_string() && *sl == "auto"))
      st.fixedSetupLatency = r.duration(j, "setup_latency", p);
  }

  void parseContracts()
  {
    const Json* c = section("contracts");
    if (!c || !r.object(*c, "contracts"))
      return;
    for (const auto& [key, value] : c->items()) {
      const std::string cp = Reader::at("contracts", key);
      auto slice = parseSliceClass(key);
      if (!slice) {
        r.error(cp, "unknown slice (expected FeMBB, ERLLC, LDHMC, umMTC or ELPC)");
        continue;
      }
      if (!r.object(value, cp))
        continue;
      r.keys(value, cp, {"min_rate", "max_delay", "max_loss", "mobility_kmh", "max_energy_per_msg"});
      auto& q = s.contracts[index(*slice)];
      if (auto v = r.rate(value, "min_rate", cp))
        q.minRateBps = *v;
      if (value.contains("max_delay") && value["max_delay"] == "unbounded")
        q.maxE2eDelay = SimTime::max();
      else if (auto v = r.duration(value, "max_delay", cp))
        q.maxE2eDelay = *v;
      if (auto v = r.number(value, "max_loss", cp)) {
        if (*v < 0.0 || *v > 1.0)
          r.error(Reader::at(cp, "max_loss"), "must be in [0, 1]");
        q.maxLoss = *v;
      }
      if (auto v = r.number(value, "mobility_kmh", cp)) {
        if (*v < 0.0)
          r.error(Reader::at(cp, "mobility_kmh"), "must be non-negative");
        q.mobilityKmh = *v;
      }
      if (value.contains("max_energy_per_msg") && value["max_energy_per_msg"] == "unbounded")
        q.maxEnergyPerMsg = kUnboundedEnergy;
      else if (auto v = r.energy(value, "max_energy_per_msg", cp))
        q.maxEnergyPerMsg = *v;
    }
  }

  void parseAdmission()
  {
    const Json* a = section("admission");
    if (!a || !r.object(*a, "admission"))
      return;
    r.keys(*a, "admission", {"mode", "utilization_cap"});
    if (auto m = r.string(*a, "mode", "admission")) {
      if (*m == "enforce")
        s.admission.mode = AdmissionConfig::Mode::Enforce;
      else if (*m == "observe")
        s.admission.mode = AdmissionConfig::Mode::Observe;
      else
        r.error("admission.mode", "expected \"enforce\" or \"observe\"");
    }
    if (auto v = r.number(*a, "utilization_cap", "admission")) {
      if (*v <= 0.0 || *v > 1.0)
        r.error("admission.utilization_cap", "must be in (0, 1]");
      s.admission.utilizationCap = *v;
    }
  }

  template <typename W>
  void window(const Json& j, const std::string& p, W& w)
  {
    if (auto v = r.duration(j, "start", p))
      w.start = *v;
    if (auto v = r.duration(j, "duration", p)) {
      if (v->ticks == 0)
        r.error(Reader::at(p, "duration"), "must be positive");
      w.duration = *v;
    }
  }

  void positive(std::uint64_t v, const std::string& path)
  {
    if (v == 0)
      r.error(path, "must be positive");
  }

  void distinct(NodeId a, NodeId b, const std::string& path)
  {
    if (a == b)
      r.error(path, "source and destination are the same node");
  }

  void parseWorkloads()
  {
    const Json* ws = section("workloads");
    if (!ws || !r.array(*ws, "workloads"))
      return;
    std::set<std::string> names;
    for (std::size_t i = 0; i < ws->size(); ++i) {
      const std::string p = Reader::at("workloads", i);
      const auto& j = (*ws)[i];
      if (!r.object(j, p))
        continue;
      auto type = r.string(j, "type", p, true);
      auto name = r.string(j, "name", p, true);
      if (!type || !name)
        continue;
      if (name->empty() || !names.insert(*name).second)
        r.error(Reader::at(p, "name"), "workload names must be unique and non-empty");

      bool ok = true;
      auto node = [&](std::string_view key, bool required, std::optional<NodeKind> kind = {}) -> NodeId {
        auto id = nodeField(j, key, p, required);
        if (!id) {
          if (required)
            ok = false;
          return kNoNode;
        }
        if (kind && !expectKind(id, *kind, Reader::at(p, key)))
          ok = false;
        return *id;
      };

      if (*type == "telemedicine") {
        r.keys(j, p, {"type", "name", "src", "dst", "bitrate", "frame_bytes", "start", "duration"});
        TelemedicineStream w;
        w.name = *name;
        w.src = node("src", true);
        w.dst = node("dst", true);
        if (auto v = r.rate(j, "bitrate", p))
          w.bitrateBps = *v;
        if (auto v = r.integer(j, "frame_bytes", p))
          w.frameBytes = *v;
        positive(w.bitrateBps, Reader::at(p, "bitrate"));
        positive(w.frameBytes, Reader::at(p, "frame_bytes"));
        window(j, p, w);
        if (ok)
          distinct(w.src, w.dst, p);
        s.workloads.push_back(std::move(w));
      } else if (*type == "surgery") {
        r.keys(j, p, {"type", "name", "console", "robot", "cmd_rate_hz", "cmd_bytes", "ack_bytes", "rtt_budget",
                      "start", "duration"});
        SurgeryLoop w;
        w.name = *name;
        w.console = node("console", true);
        w.robot = node("robot", true);
        if (auto v = r.integer(j, "cmd_rate_hz", p))
          w.cmdRateHz = *v;
        if (auto v = r.integer(j, "cmd_bytes", p))
          w.cmdBytes = *v;
        if (auto v = r.integer(j, "ack_bytes", p))
          w.ackBytes = *v;
        if (auto v = r.duration(j, "rtt_budget", p))
          w.rttBudget = *v;
        positive(w.cmdRateHz, Reader::at(p, "cmd_rate_hz"));
        positive(w.cmdBytes, Reader::at(p, "cmd_bytes"));
        positive(w.ackBytes, Reader::at(p, "ack_bytes"));
        window(j, p, w);
        if (ok)
          distinct(w.console, w.robot, p);
        s.workloads.push_back(std::move(w));
      } else if (*type == "ambulance") {
        r.keys(j, p, {"type", "name", "device", "speed_kmh", "cell_span_m", "edges", "telemetry_hz",
                      "payload_bytes", "dst", "handover_gap", "buffer_cap", "start", "duration"});
        AmbulanceRun w;
        w.name = *name;
        w.device = node("device", true, NodeKind::Device);
        w.dst = node("dst", true);
        if (auto v = r.number(j, "speed_kmh", p))
          w.speedKmh = *v;
        if (auto v = r.number(j, "cell_span_m", p))
          w.cellSpanM = *v;
        if (!(w.speedKmh > 0.0))
          r.error(Reader::at(p, "speed_kmh"), "must be positive");
        if (!(w.cellSpanM > 0.0))
          r.error(Reader::at(p, "cell_span_m"), "must be positive");
        if (auto v = r.integer(j, "telemetry_hz", p))
          w.telemetryRateHz = *v;
        positive(w.telemetryRateHz, Reader::at(p, "telemetry_hz"));
        if (auto v = r.integer(j, "payload_bytes", p))
          w.payloadBytes = *v;
        if (auto v = r.duration(j, "handover_gap", p))
          w.handoverGap = *v;
        if (auto v = r.integer(j, "buffer_cap", p))
          w.bufferCap = *v;
        if (const Json* e = r.find(j, "edges", p, true); e && r.array(*e, Reader::at(p, "edges"))) {
          for (std::size_t k = 0; k < e->size(); ++k) {
            const std::string ep = Reader::at(Reader::at(p, "edges"), k);
            auto id = nodeRef((*e)[k], ep);
            if (!expectKind(id, NodeKind::EdgeNode, ep)) {
              ok = false;
              continue;
            }
            w.edgeSequence.push_back(*id);
            if (w.device != kNoNode && !linked(w.device, *id))
              r.error(ep, "device '" + s.nodeName(w.device) + "' has no link to edge '" + s.nodeName(*id) + "'");
          }
          if (e->empty())
            r.error(Reader::at(p, "edges"), "must list at least one edge node");
        }
        window(j, p, w);
        if (ok && w.device != kNoNode) {
          distinct(w.device, w.dst, p);
          if (!m_mobile.insert(w.device).second)
            r.error(Reader::at(p, "device"), "device already moves in another ambulance workload");
        }
        s.workloads.push_back(std::move(w));
      } else if (*type == "wearables") {
        r.keys(j, p, {"type", "name", "devices", "device_groups", "period", "payload_bytes", "dst", "poisson",
                      "start", "duration"});
        WearableFleet w;
        w.name = *name;
        if (const Json* d = r.find(j, "devices", p, false); d && r.array(*d, Reader::at(p, "devices")))
          for (std::size_t k = 0; k < d->size(); ++k) {
            const std::string dp = Reader::at(Reader::at(p, "devices"), k);
            auto id = nodeRef((*d)[k], dp);
            if (expectKind(id, NodeKind::Device, dp))
              w.devices.push_back(*id);
          }
        if (const Json* g = r.find(j, "device_groups", p, false); g && r.array(*g, Reader::at(p, "device_groups")))
          for (std::size_t k = 0; k < g->size(); ++k) {
            const std::string gp = Reader::at(Reader::at(p, "device_groups"), k);
            const DeviceGroup* group = (*g)[k].is_string() ? findGroup((*g)[k].get<std::string>()) : nullptr;
            if (!group)
              r.error(gp, "unknown device group");
            else
              w.devices.insert(w.devices.end(), group->devices.begin(), group->devices.end());
          }
        if (w.devices.empty())
          r.error(p, "wearables need at least one device (devices or device_groups)");
        if (auto v = r.duration(j, "period", p))
          w.period = *v;
        positive(w.period.ticks, Reader::at(p, "period"));
        if (auto v = r.integer(j, "payload_bytes", p))
          w.payloadBytes = *v;
        if (j.contains("dst"))
          w.dst = node("dst", false);
        if (auto v = r.boolean(j, "poisson", p))
          w.poisson = *v;
        window(j, p, w);
        if (w.dst != kNoNode)
          for (NodeId d : w.devices)
            if (d == w.dst)
              r.error(Reader::at(p, "dst"), "destination is one of the wearables");
        s.workloads.push_back(std::move(w));
      } else if (*type == "implant") {
        r.keys(j, p, {"type", "name", "device", "period", "payload_bytes", "energy_per_tx", "battery", "dst",
                      "start", "duration"});
        ImplantBeacon w;
        w.name = *name;
        w.device = node("device", true, NodeKind::Device);
        w.dst = node("dst", true);
        if (auto v = r.duration(j, "period", p))
          w.period = *v;
        positive(w.period.ticks, Reader::at(p, "period"));
        if (auto v = r.integer(j, "payload_bytes", p))
          w.payloadBytes = *v;
        if (auto v = r.energy(j, "energy_per_tx", p))
          w.energyPerTx = *v;
        if (auto v = r.energy(j, "battery", p))
          w.battery = *v;
        positive(w.energyPerTx, Reader::at(p, "energy_per_tx"));
        window(j, p, w);
        if (ok)
          distinct(w.device, w.dst, p);
        s.workloads.push_back(std::move(w));
      } else {
        r.error(Reader::at(p, "type"), "unknown workload type '" + *type +
                                           "' (expected telemedicine, surgery, ambulance, wearables or implant)");
      }
    }
  }

  bool linked(NodeId a, NodeId b) const
  {
    if (a >= m_neighbors.size())
      return false;
    const auto& n = m_neighbors[a];
    return std::find(n.begin(), n.end(), b) != n.end();
  }

  NodeId accessEdge(NodeId device) const
  {
    if (device >= m_neighbors.size())
      return kNoNode;
    for (NodeId peer : m_neighbors[device])
      if (s.topology.nodes[peer].kind == NodeKind::EdgeNode)
        return peer;
    return kNoNode;
  }

  const DeviceGroup* findGroup(const std::string& prefix) const
  {
    for (const auto& g : m_groups)
      if (g.prefix == prefix)
        return &g;
    return nullptr;
  }

  void parseMetrics(const Json& j, const std::string& p, TwinDef& def)
  {
    const Json* ms = r.find(j, "metrics", p, true);
    if (!ms || !r.array(*ms, Reader::at(p, "metrics")))
      return;
    std::set<std::string> names;
    for (std::size_t k = 0; k < ms->size(); ++k) {
      const std::string mp = Reader::at(Reader::at(p, "metrics"), k);
      const auto& m = (*ms)[k];
      if (!r.object(m, mp))
        continue;
      r.keys(m, mp, {"name", "base", "jitter", "script"});
      MetricSource src;
      if (auto v = r.string(m, "name", mp, true))
        src.name = *v;
      if (src.name.empty() || !names.insert(src.name).second)
        r.error(Reader::at(mp, "name"), "metric names must be unique and non-empty");
      src.base = r.number(m, "base", mp).value_or(0.0);
      src.jitter = r.number(m, "jitter", mp).value_or(0.0);
      if (src.jitter < 0.0)
        r.error(Reader::at(mp, "jitter"), "must be non-negative");
      if (const Json* sc = r.find(m, "script", mp, false); sc && r.array(*sc, Reader::at(mp, "script"))) {
        for (std::size_t q = 0; q < sc->size(); ++q) {
          const std::string sp = Reader::at(Reader::at(mp, "script"), q);
          const auto& pt = (*sc)[q];
          if (!r.object(pt, sp))
            continue;
          r.keys(pt, sp, {"at", "value"});
          ScriptPoint point;
          if (auto at = r.duration(pt, "at", sp, true))
            point.at = *at;
          if (const Json* v = r.find(pt, "value", sp, true); v && !v->is_null())
            point.value = r.number(pt, "value", sp);
          if (!src.script.empty() && point.at < src.script.back().at)
            r.error(sp, "script points must be in time order");
          src.script.push_back(point);
        }
      }
      def.metrics.push_back(std::move(src));
    }
  }

  void parseAlerts(const Json& j, const std::string& p, TwinDef& def)
  {
    const Json* as = r.find(j, "alerts", p, false);
    if (!as || !r.array(*as, Reader::at(p, "alerts")))
      return;
    for (std::size_t k = 0; k < as->size(); ++k) {
      const std::string ap = Reader::at(Reader::at(p, "alerts"), k);
      const auto& a = (*as)[k];
      if (!r.object(a, ap))
        continue;
      r.keys(a, ap, {"metric", "threshold"});
      AlertRule rule;
      rule.metric = r.string(a, "metric", ap, true).value_or("");
      rule.threshold = r.number(a, "threshold", ap, true).value_or(0.0);
      def.alerts.push_back(std::move(rule));
    }
  }

  // Fields shared by explicit twins and twin groups.
  void parseTwinBody(const Json& j, const std::string& p, TwinDef& def)
  {
    if (auto v = r.string(j, "slice", p)) {
      if (auto sl = parseSliceClass(*v))
        def.slice = *sl;
      else
        r.error(Reader::at(p, "slice"), "unknown slice '" + *v + "'");
    }
    if (auto v = r.duration(j, "sync_period", p))
      def.syncPeriod = *v;
    if (auto v = r.duration(j, "aggregation_period", p))
      def.aggregationPeriod = *v;
    positive(def.syncPeriod.ticks, Reader::at(p, "sync_period"));
    positive(def.aggregationPeriod.ticks, Reader::at(p, "aggregation_period"));
    if (def.level == TwinLevel::IndividualEdge) {
      parseMetrics(j, p, def);
    } else if (const Json* pol = r.find(j, "policy", p, true); pol && r.object(*pol, Reader::at(p, "policy"))) {
      for (const auto& [metric, red] : pol->items()) {
        const std::string rp = Reader::at(Reader::at(p, "policy"), metric);
        std::optional<Reducer> reducer;
        if (red.is_string())
          reducer = parseReducer(red.get<std::string>());
        if (!reducer)
          r.error(rp, "expected mean, max, min, sum or count_over(<threshold>)");
        else
          def.policy[metric] = *reducer;
      }
      if (pol->empty())
        r.error(Reader::at(p, "policy"), "must name at least one metric");
    }
    parseAlerts(j, p, def);
    if (auto v = r.string(j, "alert_slice", p)) {
      if (auto sl = parseSliceClass(*v))
        def.alertSlice = *sl;
      else
        r.error(Reader::at(p, "alert_slice"), "unknown slice '" + *v + "'");
    }
  }

  void parseTwins()
  {
    std::vector<std::string> paths;
    std::vector<std::optional<std::string>> parentNames;
    std::set<std::string> names;

    if (const Json* ts = section("twins"); ts && r.array(*ts, "twins")) {
      for (std::size_t i = 0; i < ts->size(); ++i) {
        const std::string p = Reader::at("twins", i);
        const auto& j = (*ts)[i];
        if (!r.object(j, p))
          continue;
        r.keys(j, p, {"name", "level", "host", "entity", "slice", "sync_period", "aggregation_period", "metrics",
                      "policy", "alerts", "alert_slice", "parent"});
        TwinDef def;
        def.name = r.string(j, "name", p, true).value_or("");
        if (auto lv = r.string(j, "level", p, true)) {
          if (auto l = parseTwinLevel(*lv))
            def.level = *l;
          else
            r.error(Reader::at(p, "level"), "expected individual, global_edge or global_core");
        }
        if (def.level == TwinLevel::IndividualEdge) {
          auto entity = nodeField(j, "entity", p, true);
          if (expectKind(entity, NodeKind::Device, Reader::at(p, "entity")))
            def.entity = *entity;
        } else if (j.contains("entity")) {
          r.error(Reader::at(p, "entity"), "only individual twins mirror an entity");
        }
        const bool hostRequired = def.level != TwinLevel::IndividualEdge;
        if (auto host = nodeField(j, "host", p, hostRequired))
          def.host = *host;
        else if (def.level == TwinLevel::IndividualEdge && def.entity != kNoNode)
          def.host = accessEdge(def.entity);
        else
          def.host = kNoNode;
        parseTwinBody(j, p, def);
        if (def.name.empty() || !names.insert(def.name).second)
          r.error(Reader::at(p, "name"), "twin names must be unique and non-empty");
        parentNames.push_back(r.string(j, "parent", p));
        paths.push_back(p);
        s.twins.push_back(std::move(def));
      }
    }

    // One individual twin per listed device, named <prefix><device name>.
    if (const Json* gs = section("twin_groups"); gs && r.array(*gs, "twin_groups")) {
      for (std::size_t i = 0; i < gs->size(); ++i) {
        const std::string p = Reader::at("twin_groups", i);
        const auto& j = (*gs)[i];
        if (!r.object(j, p))
          continue;
        r.keys(j, p, {"prefix", "device_group", "devices", "slice", "sync_period", "metrics", "alerts", "alert_slice", "parent"});
        auto prefix = r.string(j, "prefix", p, true);
        std::vector<NodeId> devices;
        if (auto groupName = r.string(j, "device_group", p)) {
          if (const DeviceGroup* group = findGroup(*groupName))
            devices = group->devices;
          else
            r.error(Reader::at(p, "device_group"), "unknown device group '" + *groupName + "'");
        }
        if (const Json* d = r.find(j, "devices", p, false); d && r.array(*d, Reader::at(p, "devices")))
          for (std::size_t k = 0; k < d->size(); ++k) {
            const std::string dp = Reader::at(Reader::at(p, "devices"), k);
            auto id = nodeRef((*d)[k], dp);
            if (expectKind(id, NodeKind::Device, dp))
              devices.push_back(*id);
          }
        if (!j.contains("device_group") && !j.contains("devices"))
          r.error(p, "needs device_group or devices");
        TwinDef proto;
        proto.level = TwinLevel::IndividualEdge;
        parseTwinBody(j, p, proto);
        auto parent = r.string(j, "parent", p);
        if (!prefix)
          continue;
        for (NodeId dev : devices) {
          TwinDef def = proto;
          def.name = *prefix + s.nodeName(dev);
          def.entity = dev;
          def.host = accessEdge(dev);
          if (!names.insert(def.name).second)
            r.error(p, "twin name '" + def.name + "' already in use");
          parentNames.push_back(parent);
          paths.push_back(p);
          s.twins.push_back(std::move(def));
        }
      }
    }

    resolveHierarchy(paths, parentNames);
  }

  void resolveHierarchy(const std::vector<std::string>& paths,
                        const std::vector<std::optional<std::string>>& parentNames)
  {
    std::map<std::string, std::uint32_t, std::less<>> byName;
    for (std::uint32_t i = 0; i < s.twins.size(); ++i)
      byName.emplace(s.twins[i].name, i);

    std::vector<std::uint32_t> cores;
    std::map<NodeId, std::vector<std::uint32_t>> edgeTwins;
    for (std::uint32_t i = 0; i < s.twins.size(); ++i) {
      const auto& t = s.twins[i];
      if (t.host == kNoNode) {
        r.error(paths[i], "twin '" + t.name + "' has no host");
        continue;
      }
      if (!placementLegal(t.level, s.topology.nodes[t.host].kind))
        r.error(Reader::at(paths[i], "host"), std::string(toString(t.level)) + " twin '" + t.name +
                                                   "' cannot be hosted on " +
                                                   std::string(toString(s.topology.nodes[t.host].kind)) + " node '" +
                                                   s.nodeName(t.host) + "'");
      if (t.level == TwinLevel::GlobalCore)
        cores.push_back(i);
      if (t.level == TwinLevel::GlobalEdge)
        edgeTwins[t.host].push_back(i);
    }

    for (std::uint32_t i = 0; i < s.twins.size(); ++i) {
      auto& t = s.twins[i];
      const std::string pp = Reader::at(paths[i], "parent");
      std::optional<std::uint32_t> parent;
      if (parentNames[i]) {
        auto it = byName.find(*parentNames[i]);
        if (it == byName.end()) {
          r.error(pp, "unknown twin '" + *parentNames[i] + "'");
          continue;
        }
        parent = it->second;
      } else if (t.level == TwinLevel::IndividualEdge && t.host != kNoNode) {
        auto it = edgeTwins.find(t.host);
        if (it != edgeTwins.end() && it->second.size() == 1)
          parent = it->second.front();
        else if (it != edgeTwins.end())
          r.error(pp, "several global_edge twins on '" + s.nodeName(t.host) + "'; name the parent");
      } else if (t.level == TwinLevel::GlobalEdge) {
        if (cores.size() == 1)
          parent = cores.front();
        else if (cores.size() > 1)
          r.error(pp, "several global_core twins; name the parent");
      }
      if (!parent)
        continue;
      const auto& pt = s.twins[*parent];
      const bool legal = (t.level == TwinLevel::IndividualEdge && pt.level == TwinLevel::GlobalEdge &&
                          pt.host == t.host) ||
                         (t.level == TwinLevel::GlobalEdge && pt.level == TwinLevel::GlobalCore);
      if (!legal) {
        r.error(pp, "twin '" + t.name + "' cannot report to '" + pt.name +
                        "' (individual -> global_edge on the same host, global_edge -> global_core)");
        continue;
      }
      t.parent = *parent;
      s.twins[*parent].children.push_back(i);
    }

    // Every policy metric must be supplied by some child, and alert rules
    // must name a metric the twin carries.
    for (std::uint32_t i = 0; i < s.twins.size(); ++i) {
      const auto& t = s.twins[i];
      std::set<std::string, std::less<>> carried;
      if (t.level == TwinLevel::IndividualEdge) {
        for (const auto& m : t.metrics)
          carried.insert(m.name);
      } else {
        for (const auto& [metric, red] : t.policy) {
          carried.insert(metric);
          bool supplied = false;
          for (auto c : t.children) {
            const auto& ct = s.twins[c];
            supplied = supplied || ct.policy.contains(metric) ||
                       std::any_of(ct.metrics.begin(), ct.metrics.end(),
                                   [&](const MetricSource& m) { return m.name == metric; });
          }
          if (!supplied)
            r.error(Reader::at(Reader::at(paths[i], "policy"), metric), "no child twin provides this metric");
        }
      }
      for (std::size_t k = 0; k < t.alerts.size(); ++k)
        if (!carried.contains(t.alerts[k].metric))
          r.error(Reader::at(Reader::at(paths[i], "alerts"), k),
                  "twin '" + t.name + "' has no metric '" + t.alerts[k].metric + "'");
    }
  }

  void parseFaults()
  {
    const Json* fs = section("faults");
    if (!fs || !r.array(*fs, "faults"))
      return;
    for (std::size_t i = 0; i < fs->size(); ++i) {
      const std::string p = Reader::at("faults", i);
      const auto& j = (*fs)[i];
      if (!r.object(j, p))
        continue;
      r.keys(j, p, {"target", "kind", "t_fail", "t_recover"});
      FaultSpec f;
      auto target = r.string(j, "target", p, true);
      auto kind = r.string(j, "kind", p);
      auto fail = r.duration(j, "t_fail", p, true);
      auto recover = r.duration(j, "t_recover", p, true);
      if (fail && recover && *recover <= *fail)
        r.error(Reader::at(p, "t_recover"), "must be later than t_fail");
      if (kind && *kind != "node" && *kind != "link")
        r.error(Reader::at(p, "kind"), "expected \"node\" or \"link\"");
      if (!target || !fail || !recover)
        continue;
      std::optional<std::uint32_t> nodeId;
      std::optional<std::uint32_t> linkId;
      if (!kind || *kind == "node")
        if (auto it = m_nodeIndex.find(*target); it != m_nodeIndex.end())
          nodeId = it->second;
      if (!kind || *kind == "link")
        for (std::uint32_t l = 0; l < s.topology.links.size(); ++l)
          if (s.topology.links[l].name == *target)
            linkId = l;
      if (nodeId && linkId) {
        r.error(Reader::at(p, "target"), "'" + *target + "' names both a node and a link; set kind");
        continue;
      }
      if (!nodeId && !linkId) {
        r.error(Reader::at(p, "target"), "unknown node or link '" + *target + "'");
        continue;
      }
      f.kind = nodeId ? FaultSpec::Target::Node : FaultSpec::Target::Link;
      f.id = nodeId ? *nodeId : *linkId;
      f.targetName = *target;
      f.tFail = *fail;
      f.tRecover = *recover;
      for (const auto& other : s.faults)
        if (other.kind == f.kind && other.id == f.id && f.tFail < other.tRecover && other.tFail < f.tRecover)
          r.error(p, "overlaps an earlier fault on '" + *target + "'");
      s.faults.push_back(std::move(f));
    }
  }

  // Every flow the run will open must have a path in the fault-free graph.
  void checkReachability()
  {
    std::optional<Topology> built;
    try {
      built.emplace(Topology::build(s.topology));
    } catch (const Error& e) {
      r.error("topology", e.what());
      return;
    }
    const Topology& topo = *built;
    std::map<NodeId, std::vector<std::uint32_t>> dist;
    auto reachable = [&](NodeId src, NodeId dst) {
      auto it = dist.find(dst);
      if (it == dist.end())
        it = dist.emplace(dst, distancesTo(topo, dst)).first;
      return it->second[src] != kUnreachable;
    };
    auto need = [&](NodeId src, NodeId dst, const std::string& path, const std::string& what) {
      if (src != kNoNode && dst != kNoNode && !reachable(src, dst))
        r.error(path, what + ": no path from '" + s.nodeName(src) + "' to '" + s.nodeName(dst) + "'");
    };

    for (std::size_t i = 0; i < s.workloads.size(); ++i) {
      const std::string p = Reader::at("workloads", i);
      for (NodeId n : referencedNodes(s.workloads[i]))
        if (s.topology.nodes[n].kind == NodeKind::Device && accessEdge(n) == kNoNode)
          r.error(p, "device '" + s.nodeName(n) + "' is not linked to an edge");
      std::visit(
        [&](const auto& w) {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, TelemedicineStream>) {
            need(w.src, w.dst, p, "stream");
          } else if constexpr (std::is_same_v<W, SurgeryLoop>) {
            need(w.console, w.robot, p, "commands");
            need(w.robot, w.console, p, "acknowledgments");
          } else if constexpr (std::is_same_v<W, AmbulanceRun>) {
            need(w.device, w.dst, p, "telemetry");
          } else if constexpr (std::is_same_v<W, WearableFleet>) {
            for (NodeId d : w.devices)
              need(d, w.dst == kNoNode ? accessEdge(d) : w.dst, p, "wearable report");
          } else {
            need(w.device, w.dst, p, "beacon");
          }
        },
        s.workloads[i]);
    }

    std::optional<NodeId> root;
    for (const auto& t : s.twins)
      if (t.level == TwinLevel::GlobalCore) {
        root = t.host;
        break;
      }
    for (std::size_t i = 0; i < s.twins.size(); ++i) {
      const auto& t = s.twins[i];
      const std::string p = "twins." + t.name;
      if (t.level == TwinLevel::IndividualEdge)
        need(t.entity, t.host, p, "sync");
      if (t.level == TwinLevel::GlobalEdge && t.parent)
        need(t.host, s.twins[*t.parent].host, p, "sync");
      if (!t.alerts.empty() && root && *root != t.host)
        need(t.host, *root, p, "alerts");
    }
  }

  const Json& m_root;
  Reader r;
  Scenario s;
  std::map<std::string, NodeId, std::less<>> m_nodeIndex;
  std::vector<DeviceGroup> m_groups;
  std::set<NodeId> m_mobile;
  std::vector<std::vector<NodeId>> m_neighbors;
};

} // namespace

Scenario
parseScenario(std::string_view bytes)
{
  Json root;
  try {
    root = Json::parse(bytes.begin(), bytes.end(), nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
  Scenario s = ScenarioParser(root).parse();
  s.digest = sha256Hex(bytes);
  return s;
}

Scenario
loadScenario(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoFailure("cannot open scenario '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw IoFailure("cannot read scenario '" + path + "'");
  return parseScenario(buf.str());
}

} // namespace twinslice
