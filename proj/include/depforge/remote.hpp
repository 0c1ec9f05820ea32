#pragma once

#include <chrono>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depforge/classifier.hpp"

namespace depforge {

// Wire protocol (UTF-8, LF-terminated lines)
//   client: HELLO 1 | CLASSIFY <escaped values joined by ','> | QUIT
//   server: OK 1 | CATEGORY <label> | RANKED <labels joined by ','> | ERROR <message>
// Values and labels use the escaping of the training file: "\\" for a
// backslash, "\," for a comma, "\n" for a newline.

inline constexpr std::string_view kNullValue = "__NULL__";
inline constexpr int kProtocolVersion = 1;

std::string escape_field(std::string_view text);
/// Throws Errc::BadEscape on a dangling or unknown escape.
std::string unescape_field(std::string_view text);
std::string join_fields(const std::vector<std::string>& fields);
/// Splits on unescaped commas and unescapes each field.
std::vector<std::string> split_fields(std::string_view line);

/// Symbolic rendering of a value vector: NULL as __NULL__, UNKNOWN as
/// __UNKNOWN__, anything else as its interned string.
std::vector<std::string> symbolic_values(std::span<const SymbolId> values, const FeatureModel& model);

/// One line per instance: escaped symbolic values, then the class label.
/// Throws Errc::LengthMismatch when an instance does not match the model.
void export_training_file(std::ostream& out, std::span<const Instance> instances,
                          const FeatureModel& model, const LabelSet& labels);

struct RemoteConfig {
  std::string host = "127.0.0.1";
  int port = 0;
  std::chrono::milliseconds timeout{30'000};
  int retries = 3;

  /// Throws Errc::InvalidArgument unless port is in [1, 65535] and timeout > 0.
  void validate() const;
};

/// Blocking TCP connection exchanging LF-terminated lines.
class LineChannel {
 public:
  /// Throws Errc::ConnectionLost when the connection cannot be made and
  /// Errc::Timeout when it does not complete in time.
  LineChannel(const std::string& host, int port, std::chrono::milliseconds timeout);
  ~LineChannel();
  LineChannel(const LineChannel&) = delete;
  LineChannel& operator=(const LineChannel&) = delete;

  void send_line(std::string_view line);
  /// Line without its terminator. Throws Errc::Timeout or Errc::ConnectionLost.
  std::string read_line();

 private:
  int fd_ = -1;
  std::chrono::milliseconds timeout_;
  std::string pending_;
};

/// Parses one server reply to a CLASSIFY request into labels, best first.
/// ERROR replies and malformed lines throw Errc::ProtocolError.
std::vector<std::string> parse_classify_reply(std::string_view reply);

/// Classifier backed by an out-of-process server. train() only records the
/// observed classes (and exports the training file when a path is set); the
/// server is started and loaded out of band. One instance owns one
/// connection, so concurrent parsers need one RemoteClassifier each.
class RemoteClassifier final : public Classifier {
 public:
  RemoteClassifier(RemoteConfig config, FeatureModel features, LabelSet labels,
                   std::string export_path = {});
  ~RemoteClassifier() override;

  std::string_view kind() const override { return "remote"; }
  void train(std::span<const Instance> instances, const Schema& schema) override;
  /// Retries ConnectionLost up to `retries` times with a fresh connection.
  std::vector<ScoredClass> predict(std::span<const SymbolId> values) const override;
  void save(std::ostream& out) const override;
  void load(std::istream& in, const Schema& schema) override;
  Params params() const override;

  const RemoteConfig& config() const { return config_; }

 private:
  std::vector<ScoredClass> exchange(const std::string& request) const;

  RemoteConfig config_;
  FeatureModel features_;
  LabelSet labels_;
  std::string export_path_;
  mutable std::unique_ptr<LineChannel> channel_;
};

}  // namespace depforge
