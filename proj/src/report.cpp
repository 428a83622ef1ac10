#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "qss/simlab.hpp"

// Serialization of SimReport.  Key order is fixed, floats are rendered at six
// significant digits, and absent optionals become JSON null / empty CSV cells,
// so identical reports serialize to identical bytes.

namespace qss::simlab {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Protocol p) {
  return p == Protocol::Hbb99 ? "hbb99" : "kki";
}

const char* to_string(adversary::AttackKind a) {
  switch (a) {
    case adversary::AttackKind::None: return "none";
    case adversary::AttackKind::InterceptResend: return "intercept-resend";
    case adversary::AttackKind::FakeSignalCheat: return "fake-signal";
  }
  throw std::logic_error("bad AttackKind tag");
}

const char* to_string(adversary::CheatMode m) {
  return m == adversary::CheatMode::Forge ? "forge" : "unitary";
}

const char* to_string(kki::StateReveal r) {
  return r == kki::StateReveal::Before ? "before" : "after";
}

const char* to_string(Defense d) { return d == Defense::None ? "none" : "decoy"; }

// Six significant digits, then back to double so JSON prints the short form.
double round6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ordered_json opt_num(const std::optional<double>& v) {
  if (!v) return nullptr;
  return round6(*v);
}

ordered_json config_json(const SimConfig& c) {
  ordered_json j;
  j["protocol"] = to_string(c.protocol);
  j["attack"] = to_string(c.attack);
  j["cheat_mode"] = c.cheat_mode ? ordered_json(to_string(*c.cheat_mode)) : nullptr;
  j["state_reveal"] =
      c.state_reveal ? ordered_json(to_string(*c.state_reveal)) : nullptr;
  j["defense"] = to_string(c.defense);
  j["decoy_p"] = opt_num(c.decoy_p);
  j["rounds"] = c.rounds;
  j["sample_frac"] = round6(c.sample_frac);
  j["seed"] = c.seed;
  return j;
}

ordered_json report_json(const SimReport& r) {
  ordered_json j;
  j["config"] = config_json(r.config);
  j["decoy_rounds"] = r.decoy_rounds;
  j["kept"] = r.kept;
  j["discarded"] = r.discarded;
  j["samples"] = r.samples;
  j["sample_errors"] = r.sample_errors;
  j["matched_decoys_b"] = r.matched_decoys_b;
  j["matched_decoys_c"] = r.matched_decoys_c;
  j["decoy_errors_b"] = r.decoy_errors_b;
  j["decoy_errors_c"] = r.decoy_errors_c;
  j["sift_rate"] = opt_num(r.sift_rate);
  j["sample_error_rate"] = opt_num(r.sample_error_rate);
  j["decoy_error_rate_b"] = opt_num(r.decoy_error_rate_b);
  j["decoy_error_rate_c"] = opt_num(r.decoy_error_rate_c);
  j["detected"] = r.detected;
  j["attacker_recovery_rate"] = opt_num(r.attacker_recovery_rate);
  j["alice_key_recovered"] =
      r.alice_key_recovered ? ordered_json(*r.alice_key_recovered) : nullptr;
  return j;
}

// Flattens the JSON object (config first) into CSV header/value rows in the
// exact key order of report_json.
void csv_cells(const ordered_json& j, std::string& header, std::string& row) {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      csv_cells(value, header, row);
      continue;
    }
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    if (value.is_null()) {
      // empty cell
    } else if (value.is_boolean()) {
      row += value.get<bool>() ? "true" : "false";
    } else if (value.is_number_float()) {
      row += format6(value.get<double>());
    } else if (value.is_number_unsigned()) {
      row += std::to_string(value.get<std::uint64_t>());
    } else if (value.is_number_integer()) {
      row += std::to_string(value.get<std::int64_t>());
    } else {
      row += value.get<std::string>();
    }
  }
}

template <class T>
T parse_enum(const ordered_json& v, std::initializer_list<std::pair<const char*, T>> table,
             const char* what) {
  const auto s = v.get<std::string>();
  for (const auto& [name, tag] : table) {
    if (s == name) return tag;
  }
  throw std::invalid_argument(std::string("unknown ") + what + ": " + s);
}

std::optional<double> parse_opt_num(const ordered_json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::string serialize_report(const SimReport& report, Format format) {
  const ordered_json j = report_json(report);
  if (format == Format::Json) {
    return j.dump(2) + "\n";
  }
  std::string header, row;
  csv_cells(j, header, row);
  return header + "\n" + row + "\n";
}

SimReport report_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  const ordered_json& c = j.at("config");

  SimReport r;
  r.config.protocol = parse_enum<Protocol>(
      c.at("protocol"), {{"hbb99", Protocol::Hbb99}, {"kki", Protocol::Kki}},
      "protocol");
  r.config.attack = parse_enum<adversary::AttackKind>(
      c.at("attack"),
      {{"none", adversary::AttackKind::None},
       {"intercept-resend", adversary::AttackKind::InterceptResend},
       {"fake-signal", adversary::AttackKind::FakeSignalCheat}},
      "attack");
  if (!c.at("cheat_mode").is_null()) {
    r.config.cheat_mode = parse_enum<adversary::CheatMode>(
        c.at("cheat_mode"),
        {{"forge", adversary::CheatMode::Forge},
         {"unitary", adversary::CheatMode::Unitary}},
        "cheat_mode");
  }
  if (!c.at("state_reveal").is_null()) {
    r.config.state_reveal = parse_enum<kki::StateReveal>(
        c.at("state_reveal"),
        {{"before", kki::StateReveal::Before}, {"after", kki::StateReveal::After}},
        "state_reveal");
  }
  r.config.defense = parse_enum<Defense>(
      c.at("defense"), {{"none", Defense::None}, {"decoy", Defense::Decoy}},
      "defense");
  r.config.decoy_p = parse_opt_num(c.at("decoy_p"));
  r.config.rounds = c.at("rounds").get<std::int64_t>();
  r.config.sample_frac = c.at("sample_frac").get<double>();
  r.config.seed = c.at("seed").get<std::uint64_t>();

  r.decoy_rounds = j.at("decoy_rounds").get<std::int64_t>();
  r.kept = j.at("kept").get<std::int64_t>();
  r.discarded = j.at("discarded").get<std::int64_t>();
  r.samples = j.at("samples").get<std::int64_t>();
  r.sample_errors = j.at("sample_errors").get<std::int64_t>();
  r.matched_decoys_b = j.at("matched_decoys_b").get<std::int64_t>();
  r.matched_decoys_c = j.at("matched_decoys_c").get<std::int64_t>();
  r.decoy_errors_b = j.at("decoy_errors_b").get<std::int64_t>();
  r.decoy_errors_c = j.at("decoy_errors_c").get<std::int64_t>();
  r.sift_rate = parse_opt_num(j.at("sift_rate"));
  r.sample_error_rate = parse_opt_num(j.at("sample_error_rate"));
  r.decoy_error_rate_b = parse_opt_num(j.at("decoy_error_rate_b"));
  r.decoy_error_rate_c = parse_opt_num(j.at("decoy_error_rate_c"));
  r.detected = j.at("detected").get<bool>();
  r.attacker_recovery_rate = parse_opt_num(j.at("attacker_recovery_rate"));
  if (!j.at("alice_key_recovered").is_null()) {
    r.alice_key_recovered = j.at("alice_key_recovered").get<bool>();
  }
  return r;
}

}  // namespace qss::simlab
