#include "harpioneer/llm_client.hpp"

#include <cstdlib>
#include <ctime>
#include <mutex>
#include <random>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"
#include "harpioneer/hash.hpp"
#include "harpioneer/paths.hpp"
#include "json.hpp"

namespace harpioneer {

using nlohmann::json;

std::string_view role_name(ChatRole role) noexcept {
  switch (role) {
    case ChatRole::System: return "system";
    case ChatRole::User: return "user";
    case ChatRole::Assistant: return "assistant";
  }
  return "user";
}

std::optional<LlmMode> parse_llm_mode(std::string_view text) noexcept {
  if (text == "live") return LlmMode::Live;
  if (text == "record") return LlmMode::Record;
  if (text == "replay") return LlmMode::Replay;
  return std::nullopt;
}

ChatSession::ChatSession(std::string id, std::string model, double temperature)
    : id_(std::move(id)), model_(std::move(model)), temperature_(temperature) {}

void ChatSession::append(ChatRole role, std::string content) {
  if (role == ChatRole::Assistant && !messages_.empty() && messages_.back().role == ChatRole::Assistant) {
    throw Error("a session cannot hold two consecutive assistant messages");
  }
  if (role == ChatRole::System && !messages_.empty()) {
    throw Error("a system message may only open a session");
  }
  messages_.push_back({role, std::move(content)});
}

std::string chat_request_body(std::string_view model, const std::vector<ChatMessage>& messages,
                              double temperature) {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  // json objects keep keys sorted, so dump() is canonical.
  return json{{"model", model}, {"messages", std::move(msgs)}, {"temperature", temperature}}.dump();
}

std::string request_fingerprint(std::string_view model, const std::vector<ChatMessage>& messages,
                                double temperature) {
  return fingerprint_hex(chat_request_body(model, messages, temperature));
}

// ---------------------------------------------------------------- cassette

Cassette::Cassette(const Cassette& other) {
  std::shared_lock lock(other.mutex_);
  entries_ = other.entries_;
}

Cassette& Cassette::operator=(const Cassette& other) {
  if (this == &other) return *this;
  std::map<std::string, CassetteEntry> copy;
  {
    std::shared_lock lock(other.mutex_);
    copy = other.entries_;
  }
  std::unique_lock lock(mutex_);
  entries_ = std::move(copy);
  return *this;
}

Cassette Cassette::load(const std::filesystem::path& path) {
  try {
    const json doc = json::parse(read_file(path));
    if (doc.at("format") != "harpioneer-cassette") {
      throw ConfigError(fmt::format("{} is not a cassette file", path.string()));
    }
    Cassette c;
    for (const auto& [fp, entry] : doc.at("entries").items()) {
      c.entries_[fp] = CassetteEntry{entry.at("reply").get<std::string>(),
                                     entry.value("recorded_at", std::string{}),
                                     entry.value("model_version", std::string{})};
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Cassette Cassette::load_or_empty(const std::filesystem::path& path) {
  return std::filesystem::exists(path) ? load(path) : Cassette{};
}

std::optional<CassetteEntry> Cassette::find(const std::string& fingerprint) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(fingerprint);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Cassette::put(const std::string& fingerprint, CassetteEntry entry) {
  std::unique_lock lock(mutex_);
  entries_[fingerprint] = std::move(entry);
}

std::size_t Cassette::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::string Cassette::to_json() const {
  json entries = json::object();
  {
    std::shared_lock lock(mutex_);
    for (const auto& [fp, e] : entries_) {
      entries[fp] = {{"reply", e.reply}, {"recorded_at", e.recorded_at}, {"model_version", e.model_version}};
    }
  }
  return json{{"format", "harpioneer-cassette"}, {"version", 1}, {"entries", std::move(entries)}}.dump(2) + "\n";
}

void Cassette::save(const std::filesystem::path& path) const { write_file_atomic(path, to_json()); }

// ---------------------------------------------------------------- client

namespace {

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 gen{std::random_device{}()};
  static std::uint64_t counter = 0;
  std::lock_guard lock(mu);
  return fmt::format("{:016x}{:04x}", gen(), ++counter & 0xffff);
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

LlmClient::LlmClient(LlmConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (config_.timeout_s <= 0) throw ConfigError("timeout_s must be positive");
  if (config_.retries < 0 || config_.retries > 1) throw ConfigError("retries must be 0 or 1");
  if (!config_.cassette_path.empty()) {
    cassette_ = config_.mode == LlmMode::Replay ? Cassette::load(config_.cassette_path)
                                                : Cassette::load_or_empty(config_.cassette_path);
  } else if (config_.mode == LlmMode::Replay) {
    throw ConfigError("replay mode needs a cassette path");
  }
}

ChatSession LlmClient::new_session(std::optional<std::string> system_text) const {
  ChatSession session(new_session_id(), config_.model, config_.temperature);
  if (system_text) session.append(ChatRole::System, std::move(*system_text));
  return session;
}

std::string LlmClient::complete(ChatSession& session, const std::string& prompt) {
  if (prompt.empty()) throw ConfigError("prompt is empty");
  std::vector<ChatMessage> messages = session.messages();
  messages.push_back({ChatRole::User, prompt});
  const std::string fp = request_fingerprint(session.model(), messages, session.temperature());

  std::string reply;
  if (config_.mode == LlmMode::Replay) {
    const auto entry = cassette_.find(fp);
    if (!entry) throw CassetteMissError(fp);
    reply = entry->reply;
  } else {
    std::string model_version;
    reply = send_live(messages, &model_version);
    if (config_.mode == LlmMode::Record) {
      cassette_.put(fp, CassetteEntry{reply, utc_now(), model_version});
      if (!config_.cassette_path.empty()) cassette_.save(config_.cassette_path);
    }
  }
  session.append(ChatRole::User, prompt);
  session.append(ChatRole::Assistant, reply);
  return reply;
}

std::string LlmClient::send_live(const std::vector<ChatMessage>& messages, std::string* model_version) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError(fmt::format("live mode needs an API key in ${}", config_.api_key_env));
  }
  if (!transport_) transport_ = make_http_transport();

  HttpRequest request;
  std::string base = config_.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  request.url = base + "/chat/completions";
  request.headers = {{"Authorization", std::string("Bearer ") + key}, {"Content-Type", "application/json"}};
  request.body = chat_request_body(config_.model, messages, config_.temperature);
  request.timeout = std::chrono::seconds(config_.timeout_s);

  HttpResponse response;
  for (int attempt = 0;; ++attempt) {
    try {
      response = transport_->post(request);
      break;
    } catch (const TimeoutError&) {
      if (attempt >= config_.retries) throw;
    } catch (const TransportError&) {
      if (attempt >= config_.retries) throw;
    }
  }
  if (response.status < 200 || response.status >= 300) {
    throw TransportError(response.status, response.body.substr(0, 300));
  }
  try {
    const json doc = json::parse(response.body);
    if (model_version != nullptr) *model_version = doc.value("model", std::string{});
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(response.status, fmt::format("unexpected response body: {}", e.what()));
  }
}

}  // namespace harpioneer
