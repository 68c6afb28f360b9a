#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace harpioneer {

enum class ChatRole { System, User, Assistant };

std::string_view role_name(ChatRole role) noexcept;

struct ChatMessage {
  ChatRole role;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

/// One conversation. Append-only; never two assistant messages in a row.
class ChatSession {
 public:
  ChatSession(std::string id, std::string model, double temperature);

  const std::string& id() const noexcept { return id_; }
  const std::string& model() const noexcept { return model_; }
  double temperature() const noexcept { return temperature_; }
  const std::vector<ChatMessage>& messages() const noexcept { return messages_; }

  void append(ChatRole role, std::string content);

 private:
  std::string id_;
  std::string model_;
  double temperature_;
  std::vector<ChatMessage> messages_;
};

/// Canonical JSON request body {model, messages, temperature}.
std::string chat_request_body(std::string_view model, const std::vector<ChatMessage>& messages,
                              double temperature);

/// Hash of the canonical request body; headers and credentials never enter it.
std::string request_fingerprint(std::string_view model, const std::vector<ChatMessage>& messages,
                                double temperature);

struct CassetteEntry {
  std::string reply;
  std::string recorded_at;
  std::string model_version;
};

/// Recorded fingerprint -> reply map stored as JSON. Reads are shared,
/// writes exclusive.
class Cassette {
 public:
  Cassette() = default;
  static Cassette load(const std::filesystem::path& path);
  /// Empty cassette when the file does not exist yet.
  static Cassette load_or_empty(const std::filesystem::path& path);

  std::optional<CassetteEntry> find(const std::string& fingerprint) const;
  void put(const std::string& fingerprint, CassetteEntry entry);
  std::size_t size() const;
  std::string to_json() const;
  void save(const std::filesystem::path& path) const;

  Cassette(const Cassette& other);
  Cassette& operator=(const Cassette& other);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, CassetteEntry> entries_;
};

struct HttpRequest {
  std::string url;
  std::map<std::string, std::string> headers;
  std::string body;
  std::chrono::seconds timeout{120};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  /// Throws TimeoutError on timeouts and TransportError on connection failures.
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

/// cpp-httplib backed transport (HTTP and HTTPS).
std::shared_ptr<Transport> make_http_transport();

enum class LlmMode { Live, Record, Replay };

std::optional<LlmMode> parse_llm_mode(std::string_view text) noexcept;

struct LlmConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4";
  double temperature = 0.0;
  int timeout_s = 120;
  LlmMode mode = LlmMode::Replay;
  std::filesystem::path cassette_path;
  std::string api_key_env = "OPENAI_API_KEY";
  /// Extra attempts after a transport error or timeout; 0 or 1.
  int retries = 0;
};

class LlmClient {
 public:
  explicit LlmClient(LlmConfig config, std::shared_ptr<Transport> transport = nullptr);

  ChatSession new_session(std::optional<std::string> system_text = std::nullopt) const;

  /// Sends the session plus `prompt` and appends the user and assistant
  /// messages. Replay mode only reads the cassette.
  std::string complete(ChatSession& session, const std::string& prompt);

  const Cassette& cassette() const noexcept { return cassette_; }
  const LlmConfig& config() const noexcept { return config_; }

 private:
  std::string send_live(const std::vector<ChatMessage>& messages, std::string* model_version);

  LlmConfig config_;
  std::shared_ptr<Transport> transport_;
  Cassette cassette_;
};

}  // namespace harpioneer
