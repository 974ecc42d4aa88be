#include "http.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <thread>

#include "digest.hpp"
#include "error.hpp"

namespace kgqa {

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::invalid_argument, "not an absolute URL: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

HttpResponse response_from_json(const nlohmann::json& j) {
  HttpResponse r;
  if (j.contains("error")) {
    r.error = j.at("error").get<std::string>();
    return r;
  }
  r.status = j.value("status", 200);
  if (j.contains("body")) {
    const auto& body = j.at("body");
    r.body = body.is_string() ? body.get<std::string>() : body.dump();
  }
  return r;
}

}  // namespace

LiveTransport::LiveTransport(std::chrono::seconds timeout, std::string user_agent)
    : timeout_(timeout), user_agent_(std::move(user_agent)) {}

HttpResponse LiveTransport::get(const std::string& url) {
  const auto [base, path] = split_url(url);
  httplib::Client client(base);
  client.set_follow_location(true);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  httplib::Headers headers{{"User-Agent", user_agent_}, {"Accept", "application/json"}};

  HttpResponse out;
  auto res = client.Get(path, headers);
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = std::move(res->body);
  return out;
}

std::unique_ptr<RecordedTransport> RecordedTransport::from_file(const std::filesystem::path& path) {
  return from_json_text(read_file(path));
}

std::unique_ptr<RecordedTransport> RecordedTransport::from_json_text(std::string_view text) {
  auto t = std::make_unique<RecordedTransport>();
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("fixture file: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::schema, "fixture file must be a JSON object");
  for (const auto& [url, value] : root.items()) {
    if (value.is_array()) {
      for (const auto& item : value) t->add(url, response_from_json(item));
    } else {
      t->add(url, response_from_json(value));
    }
  }
  return t;
}

void RecordedTransport::add(const std::string& url, HttpResponse response) {
  responses_[url].push_back(std::move(response));
}

HttpResponse RecordedTransport::get(const std::string& url) {
  ++calls_;
  std::lock_guard lock(mutex_);
  const std::size_t n = served_[url]++;
  auto it = responses_.find(url);
  if (it == responses_.end()) return HttpResponse{404, "", ""};
  return it->second[std::min(n, it->second.size() - 1)];
}

std::size_t RecordedTransport::calls_for(const std::string& url) const {
  std::lock_guard lock(mutex_);
  auto it = served_.find(url);
  return it == served_.end() ? 0 : it->second;
}

std::chrono::milliseconds RetryPolicy::delay_for(int attempt) const {
  auto d = base_delay;
  for (int i = 0; i < attempt && d < max_delay; ++i) d *= 2;
  return std::min(d, max_delay);
}

RateLimiter::RateLimiter(double requests_per_second)
    : rate_(requests_per_second),
      capacity_(std::max(1.0, requests_per_second)),
      tokens_(capacity_),
      last_(Clock::now()) {}

void RateLimiter::acquire() {
  if (rate_ <= 0) return;
  while (true) {
    std::chrono::duration<double> wait{};
    {
      std::lock_guard lock(mutex_);
      const auto now = Clock::now();
      tokens_ = std::min(capacity_, tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
      last_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    }
    std::this_thread::sleep_for(wait);
  }
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string url_join(std::string_view base, std::string_view path) {
  std::string out(base);
  while (!out.empty() && out.back() == '/') out.pop_back();
  if (!path.empty() && path.front() != '/') out.push_back('/');
  out += path;
  return out;
}

}  // namespace kgqa
