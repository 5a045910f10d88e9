#pragma once

// File-backed persistence: one JSON document per agent profile and per
// session under a storage root. Mutations of one agent's profile (or one
// session) run under an exclusive per-key lock; reads share it.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "softethics/profile.hpp"
#include "softethics/session.hpp"

namespace softethics {

namespace fs = std::filesystem;

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Ids are opaque; anything outside [A-Za-z0-9_-] is %XX-escaped for file names.
inline std::string encode_file_stem(std::string_view id) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '_' || c == '-') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0x0F];
    }
  }
  return out;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw StoreError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Write-then-rename so readers never observe a partial document.
inline void write_file_atomic(const fs::path& p, std::string_view bytes) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw StoreError("short write to " + tmp.string());
  }
  fs::rename(tmp, p);
}

class LockTable {
 public:
  std::shared_mutex& get(const std::string& key) {
    std::lock_guard lock(mu_);
    auto& slot = locks_[key];
    if (!slot) slot = std::make_unique<std::shared_mutex>();
    return *slot;
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<std::shared_mutex>> locks_;
};

}  // namespace detail

class Store {
 public:
  explicit Store(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_ / "profiles", ec);
    fs::create_directories(root_ / "sessions", ec);
    if (!fs::is_directory(root_ / "profiles") || !fs::is_directory(root_ / "sessions")) {
      throw StoreError("storage directory " + root_.string() + " is not usable");
    }
    const auto probe = root_ / ".write-probe";
    try {
      detail::write_file_atomic(probe, "ok");
      fs::remove(probe);
    } catch (const std::exception&) {
      throw StoreError("storage directory " + root_.string() + " is not writable");
    }
    for (const auto& entry : fs::directory_iterator(root_ / "sessions")) {
      const auto stem = entry.path().stem().string();
      if (entry.path().extension() == ".json" && stem.size() > 1 && stem[0] == 's' &&
          stem.find_first_not_of("0123456789", 1) == std::string::npos) {
        next_session_ = std::max<std::uint64_t>(next_session_, std::stoull(stem.substr(1)) + 1);
      }
    }
  }

  const fs::path& root() const { return root_; }

  // -- profiles -------------------------------------------------------------

  bool has_profile(const AgentId& agent) const { return fs::exists(profile_path(agent)); }

  std::optional<Profile> load_profile(const AgentId& agent) {
    std::shared_lock lock(profile_locks_.get(agent));
    return read_profile(agent);
  }

  /// Runs `fn(Profile&)` under the agent's exclusive lock and persists the
  /// result. A missing profile starts empty. Returns whatever `fn` returns.
  template <typename F>
  auto update_profile(const AgentId& agent, F&& fn) {
    std::unique_lock lock(profile_locks_.get(agent));
    Profile p = read_profile(agent).value_or(Profile{agent, {}, {}});
    if constexpr (std::is_void_v<std::invoke_result_t<F, Profile&>>) {
      fn(p);
      write_profile(p);
    } else {
      auto result = fn(p);
      write_profile(p);
      return result;
    }
  }

  // -- sessions -------------------------------------------------------------

  std::string allocate_session_id() {
    std::lock_guard lock(counter_mu_);
    return "s" + std::to_string(next_session_++);
  }

  std::uint64_t session_number(const std::string& id) const {
    return id.size() > 1 ? std::strtoull(id.c_str() + 1, nullptr, 10) : 0;
  }

  std::optional<Session> load_session(const std::string& id) {
    std::shared_lock lock(session_locks_.get(id));
    return read_session(id);
  }

  void save_session(const Session& s) {
    std::unique_lock lock(session_locks_.get(s.id));
    detail::write_file_atomic(session_path(s.id), export_session(s));
  }

  /// Runs `fn(Session&)` under the session's exclusive lock; the session is
  /// persisted only if `fn` returns normally. Throws StoreError if unknown.
  template <typename F>
  auto update_session(const std::string& id, F&& fn) {
    std::unique_lock lock(session_locks_.get(id));
    auto s = read_session(id);
    if (!s) throw StoreError("unknown session '" + id + "'");
    if constexpr (std::is_void_v<std::invoke_result_t<F, Session&>>) {
      fn(*s);
      detail::write_file_atomic(session_path(id), export_session(*s));
    } else {
      auto result = fn(*s);
      detail::write_file_atomic(session_path(id), export_session(*s));
      return result;
    }
  }

 private:
  fs::path profile_path(const AgentId& agent) const {
    return root_ / "profiles" / (detail::encode_file_stem(agent) + ".json");
  }
  fs::path session_path(const std::string& id) const {
    return root_ / "sessions" / (detail::encode_file_stem(id) + ".json");
  }

  std::optional<Profile> read_profile(const AgentId& agent) const {
    const auto path = profile_path(agent);
    if (!fs::exists(path)) return std::nullopt;
    return deserialize_profile(detail::read_file(path));
  }

  void write_profile(const Profile& p) { detail::write_file_atomic(profile_path(p.agent), serialize_profile(p)); }

  std::optional<Session> read_session(const std::string& id) const {
    const auto path = session_path(id);
    if (!fs::exists(path)) return std::nullopt;
    return import_session(detail::read_file(path));
  }

  fs::path root_;
  detail::LockTable profile_locks_;
  detail::LockTable session_locks_;
  std::mutex counter_mu_;
  std::uint64_t next_session_ = 1;
};

}  // namespace softethics
