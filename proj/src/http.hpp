#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace kgqa {

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string error;  // non-empty on transport failure (DNS, refused, timeout)

  bool transport_failed() const { return !error.empty(); }
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

/// Live transport backed by cpp-httplib. HTTPS is supported through OpenSSL.
class LiveTransport : public HttpTransport {
 public:
  explicit LiveTransport(std::chrono::seconds timeout = std::chrono::seconds(30),
                         std::string user_agent = "kgqa/1.0");
  HttpResponse get(const std::string& url) override;

 private:
  std::chrono::seconds timeout_;
  std::string user_agent_;
};

/// Serves canned responses keyed by exact URL. A URL may map to a sequence
/// of responses, served in order with the last one repeating. Unknown URLs
/// answer 404.
class RecordedTransport : public HttpTransport {
 public:
  RecordedTransport() = default;

  // Fixture file: {"<url>": {"status": 200, "body": <string or JSON>}
  //                         | {"error": "timeout"} | [ ...sequence... ]}
  static std::unique_ptr<RecordedTransport> from_file(const std::filesystem::path& path);
  static std::unique_ptr<RecordedTransport> from_json_text(std::string_view text);

  void add(const std::string& url, HttpResponse response);
  HttpResponse get(const std::string& url) override;

  std::size_t calls() const { return calls_.load(); }
  std::size_t calls_for(const std::string& url) const;

 private:
  std::map<std::string, std::vector<HttpResponse>> responses_;
  mutable std::mutex mutex_;
  std::map<std::string, std::size_t> served_;
  std::atomic<std::size_t> calls_{0};
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{8000};

  std::chrono::milliseconds delay_for(int attempt) const;
};

/// Token bucket shared by concurrent callers. rate <= 0 disables limiting.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);
  void acquire();

 private:
  using Clock = std::chrono::steady_clock;
  double rate_;
  double capacity_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mutex_;
};

std::string url_encode(std::string_view s);

/// Appends a path segment or query to a base URL without doubling slashes.
std::string url_join(std::string_view base, std::string_view path);

}  // namespace kgqa
