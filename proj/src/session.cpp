// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/session.hpp"

#include <chrono>
#include <ctime>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "pni/error.hpp"
#include "pni/io.hpp"
#include "pni/layout_text.hpp"

namespace pni {

namespace {

[[noreturn]] void bad(std::string_view what) {
  throw Error(ErrorCode::kSchema, fmt::format("session: {}", what), "session");
}

const Json& field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(fmt::format("missing '{}'", key));
  return *it;
}

std::string text_field(const Json& obj, const char* key) {
  const Json& v = field(obj, key);
  if (!v.is_string()) bad(fmt::format("'{}' must be a string", key));
  return v.get<std::string>();
}

Layout layout_field(const Json& obj, const char* key) { return parse_layout(text_field(obj, key)); }

Json records_to_json(const std::vector<EditRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records) out.push_back(edit_record_to_json(r));
  return out;
}

std::vector<EditRecord> records_from_json(const Json& obj, const char* key) {
  std::vector<EditRecord> out;
  auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) bad(fmt::format("'{}' must be an array", key));
  for (const auto& r : *it) out.push_back(edit_record_from_json(r));
  return out;
}

bool is_uuid(std::string_view s) {
  if (s.size() != 36) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool dash = i == 8 || i == 13 || i == 18 || i == 23;
    if (dash != (s[i] == '-')) return false;
    if (!dash && !std::isxdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

void check_session(const Session& session) {
  const Layout& expected = session.history.empty() ? session.initial : session.history.back().after;
  if (!(expected == session.current)) {
    throw Error(ErrorCode::kInvariant, "session current layout disagrees with its history",
                session.session_id);
  }
}

Json edit_record_to_json(const EditRecord& r) {
  Json j{{"instruction", instruction_to_json(r.instruction)},
         {"instruction_text", serialize_instruction(r.instruction)},
         {"engine", std::string(engine_kind_name(r.engine))},
         {"before", serialize_layout(r.before)},
         {"after", serialize_layout(r.after)},
         {"validation", report_to_json(r.validation)},
         {"duration_ms", r.duration_ms},
         {"attempts", r.attempts},
         {"applied", r.applied}};
  if (r.engine == EngineKind::kLlm) j["completion_text"] = r.completion_text;
  return j;
}

EditRecord edit_record_from_json(const Json& j) {
  if (!j.is_object()) bad("record must be an object");
  EditRecord r;
  r.instruction = instruction_from_json(field(j, "instruction"));
  auto engine = parse_engine_kind(text_field(j, "engine"));
  if (!engine) bad("unknown engine");
  r.engine = *engine;
  r.before = layout_field(j, "before");
  r.after = layout_field(j, "after");
  r.validation = report_from_json(field(j, "validation"));
  const Json& duration = field(j, "duration_ms");
  const Json& attempts = field(j, "attempts");
  const Json& applied = field(j, "applied");
  if (!duration.is_number_integer() || !attempts.is_number_integer() || !applied.is_boolean()) {
    bad("record counters have the wrong type");
  }
  r.duration_ms = duration.get<std::int64_t>();
  r.attempts = attempts.get<int>();
  r.applied = applied.get<bool>();
  if (auto c = j.find("completion_text"); c != j.end()) {
    if (!c->is_string()) bad("'completion_text' must be a string");
    r.completion_text = c->get<std::string>();
  }
  return r;
}

Json session_to_json(const Session& s) {
  return Json{{"session_id", s.session_id},
              {"created_at", s.created_at},
              {"updated_at", s.updated_at},
              {"initial", serialize_layout(s.initial)},
              {"current", serialize_layout(s.current)},
              {"history", records_to_json(s.history)},
              {"archived", records_to_json(s.archived)},
              {"rejected", records_to_json(s.rejected)}};
}

Session session_from_json(const Json& j) {
  if (!j.is_object()) bad("must be an object");
  Session s;
  s.session_id = text_field(j, "session_id");
  if (!is_uuid(s.session_id)) bad("'session_id' is not a UUID");
  s.created_at = text_field(j, "created_at");
  s.updated_at = text_field(j, "updated_at");
  s.initial = layout_field(j, "initial");
  s.current = layout_field(j, "current");
  s.history = records_from_json(j, "history");
  s.archived = records_from_json(j, "archived");
  s.rejected = records_from_json(j, "rejected");
  check_session(s);
  return s;
}

std::string make_uuid_v4() {
  thread_local std::mt19937_64 rng{std::random_device{}() ^
                                   static_cast<std::uint64_t>(
                                       std::chrono::steady_clock::now().time_since_epoch().count())};
  std::uint64_t hi = rng(), lo = rng();
  hi = (hi & 0xffffffffffff0fffULL) | 0x0000000000004000ULL;  // version 4
  lo = (lo & 0x3fffffffffffffffULL) | 0x8000000000000000ULL;  // RFC 4122 variant
  return fmt::format("{:08x}-{:04x}-{:04x}-{:04x}-{:012x}", hi >> 32, (hi >> 16) & 0xffff,
                     hi & 0xffff, lo >> 48, lo & 0xffffffffffffULL);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", tm.tm_year + 1900, tm.tm_mon + 1,
                     tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
}

SessionStore::SessionStore(std::filesystem::path data_dir) : dir_(std::move(data_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot create data directory {}: {}", dir_.string(), ec.message()),
                dir_.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    const auto& path = entry.path();
    const std::string name = path.filename().string();
    // Leftovers from a write interrupted before its rename.
    if (entry.is_regular_file() && name.starts_with(".") && path.extension() == ".tmp") {
      std::error_code rm;
      std::filesystem::remove(path, rm);
      spdlog::info("removed stale temp file {}", path.string());
      continue;
    }
    if (!entry.is_regular_file() || path.extension() != ".json" || name.starts_with(".")) continue;
    try {
      Session s = session_from_json(Json::parse(read_text_file(path)));
      if (s.session_id + ".json" != name) bad("file name does not match session id");
      auto e = std::make_shared<Entry>();
      e->session = std::move(s);
      sessions_.emplace(e->session.session_id, std::move(e));
    } catch (const std::exception& e) {
      spdlog::warn("skipping corrupt session file {}: {}", path.string(), e.what());
      skipped_.push_back(path);
    }
  }
  spdlog::info("loaded {} session(s) from {}", sessions_.size(), dir_.string());
}

std::filesystem::path SessionStore::file_for(const std::string& session_id) const {
  return dir_ / (session_id + ".json");
}

void SessionStore::persist(const Session& session) const {
  write_file_atomic(file_for(session.session_id), session_to_json(session).dump(2));
}

std::string SessionStore::create(const Layout& initial) {
  check_layout_invariants(initial);
  auto e = std::make_shared<Entry>();
  Session& s = e->session;
  s.session_id = make_uuid_v4();
  s.initial = initial;
  s.current = initial;
  s.created_at = s.updated_at = utc_timestamp();
  persist(s);
  std::unique_lock lock(mu_);
  const std::string id = s.session_id;
  sessions_.emplace(id, std::move(e));
  return id;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& session_id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kUnknownSession, "unknown session", session_id);
  }
  return it->second;
}

Session SessionStore::get(const std::string& session_id) const {
  auto e = find(session_id);
  std::lock_guard lock(e->mu);
  return e->session;
}

void SessionStore::update(const std::string& session_id, const std::function<void(Session&)>& fn) {
  auto e = find(session_id);
  std::lock_guard lock(e->mu);
  Session next = e->session;
  fn(next);
  next.updated_at = utc_timestamp();
  check_session(next);
  persist(next);
  e->session = std::move(next);
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, e] : sessions_) out.push_back(id);
  return out;
}

}  // namespace pni
