#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "swarmplay/error.hpp"
#include "swarmplay/rl.hpp"

namespace swarmplay::rl {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

json params_to_json(const Policy& p) {
  return json{
      {"learning_rate", p.params.learning_rate},
      {"discount", p.params.discount},
      {"epsilon", p.params.epsilon},
      {"episodes", p.params.episodes},
      {"seed", p.params.seed},
      {"opponent",
       {{"kind", to_string(p.params.opponent.kind)},
        {"p_random", p.params.opponent.p_random},
        {"snapshot_interval", p.params.opponent.snapshot_interval}}},
      {"rewards",
       {{"win", p.rewards.win},
        {"lose", p.rewards.lose},
        {"draw_first_mover", p.rewards.draw_first_mover},
        {"draw_second_mover", p.rewards.draw_second_mover}}},
  };
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptEntry, what); }

double finite_number(const json& j, const std::string& where) {
  if (!j.is_number()) corrupt(where + ": value is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) corrupt(where + ": value is not finite");
  return v;
}

Board state_or_corrupt(const std::string& key) {
  auto b = decode_key(key);
  if (!b) corrupt("malformed state key '" + key + "'");
  return *b;
}

template <typename T>
T field(const json& obj, const char* name, T fallback) {
  auto it = obj.find(name);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    corrupt(std::string("params field '") + name + "' has the wrong type");
  }
}

}  // namespace

std::string serialize_policy(const Policy& policy) {
  // std::map-backed json objects keep key order sorted, so output is stable.
  json entries = json::object();
  if (const auto* q = std::get_if<QTable>(&policy.table)) {
    for (const auto& [key, row] : q->rows()) {
      json cells = json::object();
      for (int c = 1; c <= kCells; ++c) {
        if (row.present & (1u << (c - 1))) cells[std::to_string(c)] = row.values[c - 1];
      }
      entries[key] = std::move(cells);
    }
  } else {
    for (const auto& [key, value] : std::get<VTable>(policy.table).values()) entries[key] = value;
  }
  json doc{
      {"format", kPolicyFormat},
      {"method", to_string(policy.method)},
      {"params", params_to_json(policy)},
      {"entries", std::move(entries)},
  };
  return doc.dump() + "\n";
}

Policy parse_policy(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    corrupt(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) corrupt("policy document must be a JSON object");
  auto fmt = doc.find("format");
  if (fmt == doc.end() || !fmt->is_string() || fmt->get<std::string>() != kPolicyFormat) {
    throw Error(ErrorCode::FormatVersionMismatch,
                "expected format '" + std::string(kPolicyFormat) + "', got " +
                    (fmt == doc.end() ? std::string("none") : fmt->dump()));
  }

  Policy policy;
  auto method = doc.contains("method") && doc["method"].is_string()
                    ? method_from_string(doc["method"].get<std::string>())
                    : std::nullopt;
  if (!method) corrupt("missing or unknown method");
  policy.method = *method;
  policy.params.method = *method;

  const json params = doc.value("params", json::object());
  if (!params.is_object()) corrupt("params must be an object");
  policy.params.learning_rate = field(params, "learning_rate", policy.params.learning_rate);
  policy.params.discount = field(params, "discount", policy.params.discount);
  policy.params.epsilon = field(params, "epsilon", policy.params.epsilon);
  policy.params.episodes = field(params, "episodes", policy.params.episodes);
  policy.params.seed = field(params, "seed", policy.params.seed);
  if (auto it = params.find("opponent"); it != params.end() && it->is_object()) {
    auto kind = opponent_kind_from_string(field<std::string>(*it, "kind", "mixture"));
    if (!kind) corrupt("unknown opponent kind");
    policy.params.opponent.kind = *kind;
    policy.params.opponent.p_random = field(*it, "p_random", policy.params.opponent.p_random);
    policy.params.opponent.snapshot_interval =
        field(*it, "snapshot_interval", policy.params.opponent.snapshot_interval);
  }
  if (auto it = params.find("rewards"); it != params.end() && it->is_object()) {
    policy.rewards.win = field(*it, "win", policy.rewards.win);
    policy.rewards.lose = field(*it, "lose", policy.rewards.lose);
    policy.rewards.draw_first_mover = field(*it, "draw_first_mover", policy.rewards.draw_first_mover);
    policy.rewards.draw_second_mover =
        field(*it, "draw_second_mover", policy.rewards.draw_second_mover);
  }

  auto entries = doc.find("entries");
  if (entries == doc.end() || !entries->is_object()) corrupt("missing entries object");
  if (policy.method == Method::SV) {
    VTable v;
    for (const auto& [key, value] : entries->items()) {
      state_or_corrupt(key);
      v.set(key, finite_number(value, key));
    }
    policy.table = std::move(v);
  } else {
    QTable q;
    for (const auto& [key, cells] : entries->items()) {
      const Board board = state_or_corrupt(key);
      if (!cells.is_object()) corrupt(key + ": action values must be an object");
      for (const auto& [cell_text, value] : cells.items()) {
        int cell = 0;
        auto [ptr, ec] = std::from_chars(cell_text.data(), cell_text.data() + cell_text.size(), cell);
        if (ec != std::errc{} || ptr != cell_text.data() + cell_text.size() || cell < 1 ||
            cell > kCells) {
          corrupt(key + ": bad cell '" + cell_text + "'");
        }
        if (board.at(cell) != Mark::Empty) corrupt(key + ": cell " + cell_text + " is occupied");
        q.set(key, cell, finite_number(value, key + "/" + cell_text));
      }
    }
    policy.table = std::move(q);
  }
  return policy;
}

void save_policy(const Policy& policy, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << serialize_policy(policy);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

Policy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_policy(buf.str());
}

void write_trace_csv(std::ostream& out, const RewardTrace& trace) {
  out << "episode,reward,cumulative_reward,outcome,agent_first\n";
  for (const TraceRow& row : trace) {
    out << row.episode << ',' << format_double(row.reward) << ','
        << format_double(row.cumulative_reward) << ',' << to_string(row.outcome) << ','
        << (row.agent_first ? 1 : 0) << '\n';
  }
}

void save_trace(const RewardTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace swarmplay::rl
