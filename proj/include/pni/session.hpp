// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "pni/engine.hpp"
#include "pni/layout.hpp"
#include "pni/wire.hpp"

namespace pni {

struct Session {
  std::string session_id;
  Layout initial;
  Layout current;
  /// Applied edits; `current` is the last one's `after`, or `initial`.
  std::vector<EditRecord> history;
  /// Edits removed by undo, most recent last.
  std::vector<EditRecord> archived;
  /// LLM edits whose validation failed; never applied.
  std::vector<EditRecord> rejected;
  std::string created_at;
  std::string updated_at;
};

/// Throws kInvariant when `current` disagrees with the history.
void check_session(const Session& session);

Json edit_record_to_json(const EditRecord& record);
EditRecord edit_record_from_json(const Json& json);

/// Layouts are embedded as canonical layout text.
Json session_to_json(const Session& session);
Session session_from_json(const Json& json);

/// Random version 4 UUID, lowercase.
std::string make_uuid_v4();

/// UTC, millisecond precision, e.g. 2026-01-02T03:04:05.678Z.
std::string utc_timestamp();

/// Sessions in memory, one JSON file each under a data directory. Every
/// mutation is written atomically before the call returns. Operations on
/// one session are serialized; different sessions proceed in parallel.
class SessionStore {
 public:
  /// Creates the directory if needed and loads every `*.json` in it.
  /// Unreadable or inconsistent files are skipped with a warning.
  explicit SessionStore(std::filesystem::path data_dir);

  std::string create(const Layout& initial);

  /// Copy of the session. Throws kUnknownSession.
  Session get(const std::string& session_id) const;

  /// Runs `fn` under the session's lock and persists the result. If `fn`
  /// throws, nothing is written and the in-memory session is unchanged.
  void update(const std::string& session_id, const std::function<void(Session&)>& fn);

  std::size_t size() const;
  std::vector<std::string> ids() const;
  const std::vector<std::filesystem::path>& skipped_files() const { return skipped_; }
  const std::filesystem::path& data_dir() const { return dir_; }

 private:
  struct Entry {
    std::mutex mu;
    Session session;
  };

  std::shared_ptr<Entry> find(const std::string& session_id) const;
  std::filesystem::path file_for(const std::string& session_id) const;
  void persist(const Session& session) const;

  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::vector<std::filesystem::path> skipped_;
};

}  // namespace pni
