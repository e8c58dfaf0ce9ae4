#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "cfex/model.hpp"

namespace cfex::wire {

using nlohmann::json;

// Message codecs. Field names match the external model-server protocol:
//   {"op":"predict","tokens":[...]}                         -> {"label":bool,"score":num}
//   {"op":"fill_mask","tokens":[...],"mask_positions":[...],"k":n}
//                                                           -> {"candidates":[{"replacements":[...],"likelihood":num}]}
//   {"op":"ping"}                                           -> {"ok":true}
// Unknown fields are ignored. A missing or mistyped required field raises
// MalformedResponse, as does an {"error": ...} reply.

json encode_ping();
json encode_predict(std::span<const std::string> tokens);
/// Adds "mask_groups" (tied positions) only when the request has ties.
json encode_fill_mask(const FillRequest& request);

struct PingInfo {
  bool serial = false;
  int protocol = 1;
};
PingInfo decode_ping(const json& response);
/// Server score, with the label derived from `threshold`.
Prediction decode_predict(const json& response, double threshold);
std::vector<FillCandidate> decode_fill_mask(const json& response, const FillRequest& request);

/// Parses one response line; MalformedResponse on invalid JSON.
json parse_line(const std::string& line);

/// A bidirectional newline-delimited byte stream.
class LineTransport {
 public:
  virtual ~LineTransport() = default;
  /// Sends one line (newline appended) and returns the next line received.
  /// AdapterUnavailable on transport failure or timeout.
  virtual std::string exchange(const std::string& line) = 0;
  virtual std::string describe() const = 0;
};

/// Child process spoken to over its stdin/stdout (`/bin/sh -c command`).
class ProcessTransport final : public LineTransport {
 public:
  explicit ProcessTransport(std::string command,
                            std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~ProcessTransport() override;
  ProcessTransport(const ProcessTransport&) = delete;
  ProcessTransport& operator=(const ProcessTransport&) = delete;

  std::string exchange(const std::string& line) override;
  std::string describe() const override { return "proc:" + command_; }

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

class TcpTransport final : public LineTransport {
 public:
  TcpTransport(std::string host, int port, std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  std::string exchange(const std::string& line) override;
  std::string describe() const override { return "tcp:" + host_ + ":" + std::to_string(port_); }

 private:
  std::string host_;
  int port_;
  std::chrono::milliseconds timeout_;
  int fd_ = -1;
  std::string buffer_;
};

/// Serialized access to one model server. Shared by a remote classifier and
/// filler when both point at the same server.
class RemoteEndpoint {
 public:
  explicit RemoteEndpoint(std::unique_ptr<LineTransport> transport);

  json call(const json& request);
  PingInfo ping();
  std::string describe() const { return transport_->describe(); }

 private:
  std::unique_ptr<LineTransport> transport_;
  std::mutex mutex_;
};

class RemoteClassifier final : public Classifier {
 public:
  RemoteClassifier(std::shared_ptr<RemoteEndpoint> endpoint, double threshold = 0.5);
  Prediction predict(std::span<const std::string> tokens) const override;
  std::string identity() const override { return endpoint_->describe(); }
  bool concurrent_safe() const override { return false; }

 private:
  std::shared_ptr<RemoteEndpoint> endpoint_;
  double threshold_;
};

class RemoteFiller final : public MaskFiller {
 public:
  explicit RemoteFiller(std::shared_ptr<RemoteEndpoint> endpoint);
  std::vector<FillCandidate> fill_mask(const FillRequest& request) const override;
  std::string identity() const override { return endpoint_->describe(); }
  bool concurrent_safe() const override { return false; }

 private:
  std::shared_ptr<RemoteEndpoint> endpoint_;
};

/// Server side of the protocol: answers one request line. Never throws;
/// bad requests get {"error": "...", "op": ...}.
std::string serve_line(const std::string& line, const Classifier& classifier, const MaskFiller& filler);

}  // namespace cfex::wire
