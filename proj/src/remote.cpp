#include "depforge/remote.hpp"

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <istream>
#include <ostream>

#include "depforge/error.hpp"

namespace depforge {

namespace {

constexpr std::string_view kUnknownValue = "__UNKNOWN__";

int remaining_ms(std::chrono::steady_clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - std::chrono::steady_clock::now());
  return static_cast<int>(std::max<long long>(0, left.count()));
}

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

}  // namespace

std::string escape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case ',': out += "\\,"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (++i == text.size()) throw Error(Errc::BadEscape, "dangling backslash");
    switch (text[i]) {
      case '\\': out += '\\'; break;
      case ',': out += ','; break;
      case 'n': out += '\n'; break;
      default: throw Error(Errc::BadEscape, std::string("unknown escape \\") + text[i]);
    }
  }
  return out;
}

std::string join_fields(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape_field(fields[i]);
  }
  return out;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\') {
      ++i;
    } else if (line[i] == ',') {
      fields.push_back(unescape_field(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  fields.push_back(unescape_field(line.substr(start)));
  return fields;
}

std::vector<std::string> symbolic_values(std::span<const SymbolId> values, const FeatureModel& model) {
  if (values.size() != model.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(values.size()) + " values for " +
                                          std::to_string(model.size()) + " templates");
  }
  std::vector<std::string> out;
  out.reserve(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (values[t] == kNullSymbol) {
      out.emplace_back(kNullValue);
    } else if (values[t] == kUnknownSymbol) {
      out.emplace_back(kUnknownValue);
    } else {
      out.push_back(model.table_for(t).name(values[t]));
    }
  }
  return out;
}

void export_training_file(std::ostream& out, std::span<const Instance> instances,
                          const FeatureModel& model, const LabelSet& labels) {
  for (const auto& inst : instances) {
    auto fields = symbolic_values(inst.values, model);
    fields.push_back(labels.name(inst.label));
    out << join_fields(fields) << '\n';
  }
}

void RemoteConfig::validate() const {
  if (port < 1 || port > 65535) {
    throw Error(Errc::InvalidArgument, "port " + std::to_string(port) + " outside [1, 65535]");
  }
  if (timeout.count() <= 0) throw Error(Errc::InvalidArgument, "timeout must be positive");
  if (retries < 0) throw Error(Errc::InvalidArgument, "retries must be non-negative");
}

LineChannel::LineChannel(const std::string& host, int port, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
    throw Error(Errc::ConnectionLost, "resolve " + host + ": " + gai_strerror(rc));
  }
  std::unique_ptr<addrinfo, decltype(&freeaddrinfo)> guard(found, freeaddrinfo);
  const auto deadline = std::chrono::steady_clock::now() + timeout_;

  std::string last_error = "no addresses";
  for (addrinfo* ai = found; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    const int flags = fcntl(fd, F_GETFL, 0);
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc < 0 && errno == EINPROGRESS) {
      pollfd p{fd, POLLOUT, 0};
      rc = ::poll(&p, 1, remaining_ms(deadline));
      if (rc == 0) {
        ::close(fd);
        throw Error(Errc::Timeout, "connect to " + host + ":" + service);
      }
      int err = 0;
      socklen_t len = sizeof err;
      getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
      rc = err == 0 ? 0 : -1;
      errno = err;
    }
    if (rc == 0) {
      fcntl(fd, F_SETFL, flags);
      fd_ = fd;
      return;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  throw Error(Errc::ConnectionLost, "connect to " + host + ":" + service + ": " + last_error);
}

LineChannel::~LineChannel() {
  if (fd_ >= 0) ::close(fd_);
}

void LineChannel::send_line(std::string_view line) {
  std::string data(line);
  data += '\n';
  std::size_t sent = 0;
  while (sent < data.size()) {
    const auto n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::ConnectionLost, std::string("send: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string LineChannel::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    if (const auto nl = pending_.find('\n'); nl != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    pollfd p{fd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, remaining_ms(deadline));
    if (rc == 0) throw Error(Errc::Timeout, "no reply from server");
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::ConnectionLost, std::string("poll: ") + std::strerror(errno));
    }
    char buf[4096];
    const auto n = ::recv(fd_, buf, sizeof buf, 0);
    if (n == 0) throw Error(Errc::ConnectionLost, "server closed the connection");
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::ConnectionLost, std::string("recv: ") + std::strerror(errno));
    }
    pending_.append(buf, static_cast<std::size_t>(n));
  }
}

namespace {

std::vector<std::string> parse_reply_body(std::string_view reply) {
  if (starts_with(reply, "CATEGORY ")) {
    auto label = unescape_field(reply.substr(9));
    if (label.empty()) throw Error(Errc::ProtocolError, "empty CATEGORY");
    return {std::move(label)};
  }
  if (starts_with(reply, "RANKED ")) {
    auto labels = split_fields(reply.substr(7));
    for (const auto& l : labels) {
      if (l.empty()) throw Error(Errc::ProtocolError, "empty label in RANKED");
    }
    return labels;
  }
  if (starts_with(reply, "ERROR")) {
    const auto message = reply.size() > 6 ? reply.substr(6) : std::string_view{};
    throw Error(Errc::ProtocolError, "server error: " + std::string(message));
  }
  throw Error(Errc::ProtocolError, "malformed reply '" + std::string(reply) + "'");
}

}  // namespace

std::vector<std::string> parse_classify_reply(std::string_view reply) {
  try {
    return parse_reply_body(reply);
  } catch (const Error& e) {
    if (e.code() != Errc::BadEscape) throw;
    throw Error(Errc::ProtocolError, std::string("bad escape in reply: ") + e.what());
  }
}

RemoteClassifier::RemoteClassifier(RemoteConfig config, FeatureModel features, LabelSet labels,
                                   std::string export_path)
    : config_(std::move(config)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      export_path_(std::move(export_path)) {
  config_.validate();
}

RemoteClassifier::~RemoteClassifier() {
  if (!channel_) return;
  try {
    channel_->send_line("QUIT");
  } catch (const Error&) {
  }
}

void RemoteClassifier::train(std::span<const Instance> instances, const Schema& schema) {
  check_training_set(instances, schema);
  schema_ = schema;
  if (!export_path_.empty()) {
    std::ofstream out(export_path_, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + export_path_);
    export_training_file(out, instances, features_, labels_);
  }
}

std::vector<ScoredClass> RemoteClassifier::exchange(const std::string& request) const {
  if (!channel_) {
    auto channel = std::make_unique<LineChannel>(config_.host, config_.port, config_.timeout);
    channel->send_line("HELLO " + std::to_string(kProtocolVersion));
    const auto greeting = channel->read_line();
    if (greeting != "OK " + std::to_string(kProtocolVersion)) {
      throw Error(Errc::ProtocolError, "handshake rejected: '" + greeting + "'");
    }
    channel_ = std::move(channel);
  }
  channel_->send_line(request);
  const auto labels = parse_classify_reply(channel_->read_line());

  std::vector<ScoredClass> ranked;
  ranked.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto cls = labels_.find(labels[i]);
    if (!cls) throw Error(Errc::UnknownLabel, "server returned '" + labels[i] + "'");
    ranked.push_back({*cls, -static_cast<double>(i)});
  }
  return ranked;
}

std::vector<ScoredClass> RemoteClassifier::predict(std::span<const SymbolId> values) const {
  const std::string request = "CLASSIFY " + join_fields(symbolic_values(values, features_));
  for (int attempt = 0;; ++attempt) {
    try {
      return exchange(request);
    } catch (const Error& e) {
      // after any failure the stream position is unknown
      channel_.reset();
      if (e.code() != Errc::ConnectionLost || attempt >= config_.retries) throw;
    }
  }
}

void RemoteClassifier::save(std::ostream& out) const {
  out << "remote " << config_.host << ' ' << config_.port << '\n';
}

void RemoteClassifier::load(std::istream& in, const Schema& schema) {
  schema_ = schema;
  std::string tag;
  if (!(in >> tag) || tag != "remote") throw Error(Errc::BadModel, "remote: bad classifier file");
}

Params RemoteClassifier::params() const {
  return {{"host", config_.host},
          {"port", std::to_string(config_.port)},
          {"timeout_ms", std::to_string(config_.timeout.count())},
          {"retries", std::to_string(config_.retries)}};
}

}  // namespace depforge
