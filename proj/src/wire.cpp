#include "cfex/wire.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <thread>

#include "cfex/error.hpp"

namespace cfex::wire {

json encode_ping() { return json{{"op", "ping"}}; }

json encode_predict(std::span<const std::string> tokens) {
  return json{{"op", "predict"}, {"tokens", std::vector<std::string>(tokens.begin(), tokens.end())}};
}

json encode_fill_mask(const FillRequest& request) {
  json j{{"op", "fill_mask"},
         {"tokens", request.tokens},
         {"mask_positions", request.mask_positions},
         {"k", request.k}};
  if (!request.tied_positions.empty()) j["mask_groups"] = request.tied_positions;
  return j;
}

namespace {

void reject_error(const json& response) {
  if (!response.is_object()) throw MalformedResponse("response is not a JSON object");
  if (response.contains("error")) {
    throw MalformedResponse("server error: " + response["error"].dump());
  }
}

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw MalformedResponse(std::string("response missing field '") + field + "'");
  return *it;
}

}  // namespace

json parse_line(const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw MalformedResponse(std::string("invalid JSON from server: ") + e.what());
  }
}

PingInfo decode_ping(const json& response) {
  reject_error(response);
  const json& ok = require(response, "ok");
  if (!ok.is_boolean() || !ok.get<bool>()) throw MalformedResponse("ping did not return ok:true");
  PingInfo info;
  if (auto it = response.find("serial"); it != response.end() && it->is_boolean()) info.serial = it->get<bool>();
  if (auto it = response.find("protocol"); it != response.end() && it->is_number_integer())
    info.protocol = it->get<int>();
  return info;
}

Prediction decode_predict(const json& response, double threshold) {
  reject_error(response);
  const json& label = require(response, "label");
  const json& score = require(response, "score");
  if (!label.is_boolean()) throw MalformedResponse("'label' must be a boolean");
  if (!score.is_number()) throw MalformedResponse("'score' must be a number");
  double s = score.get<double>();
  if (!(s >= 0.0 && s <= 1.0)) throw MalformedResponse("'score' outside [0,1]");
  return Prediction::from_score(s, threshold);
}

std::vector<FillCandidate> decode_fill_mask(const json& response, const FillRequest& request) {
  reject_error(response);
  const json& cands = require(response, "candidates");
  if (!cands.is_array()) throw MalformedResponse("'candidates' must be an array");
  std::vector<FillCandidate> out;
  for (const json& c : cands) {
    if (!c.is_object()) throw MalformedResponse("candidate is not an object");
    const json& reps = require(c, "replacements");
    const json& lik = require(c, "likelihood");
    if (!reps.is_array() || reps.size() != request.mask_positions.size())
      throw MalformedResponse("'replacements' must list one token per mask position");
    if (!lik.is_number()) throw MalformedResponse("'likelihood' must be a number");
    FillCandidate fc;
    for (const json& r : reps) {
      if (!r.is_string()) throw MalformedResponse("replacement must be a string");
      fc.replacements.push_back(r.get<std::string>());
      if (fc.replacements.back() == kMaskToken) throw MalformedResponse("replacement echoes the mask token");
    }
    fc.likelihood = lik.get<double>();
    if (!(fc.likelihood >= 0.0 && fc.likelihood <= 1.0)) throw MalformedResponse("'likelihood' outside [0,1]");
    out.push_back(std::move(fc));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FillCandidate& a, const FillCandidate& b) { return a.likelihood > b.likelihood; });
  if (out.size() > static_cast<std::size_t>(request.k)) out.resize(static_cast<std::size_t>(request.k));
  return out;
}

namespace {

// Reads until a full line sits in `buffer`; returns it without the newline.
std::string read_line(int fd, std::string& buffer, std::chrono::milliseconds timeout, const std::string& who) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto nl = buffer.find('\n'); nl != std::string::npos) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw AdapterUnavailable(who + ": timed out waiting for a response");
    pollfd pfd{fd, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw AdapterUnavailable(who + ": poll failed: " + std::strerror(errno));
    }
    if (rc == 0) continue;
    char chunk[4096];
    ssize_t n = ::read(fd, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw AdapterUnavailable(who + ": read failed: " + std::strerror(errno));
    }
    if (n == 0) throw AdapterUnavailable(who + ": connection closed");
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

void write_all(int fd, const std::string& data, bool socket, const std::string& who) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = socket ? ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL)
                       : ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw AdapterUnavailable(who + ": write failed: " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

}  // namespace

ProcessTransport::ProcessTransport(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  // A dead child must surface as an error on write, not kill us.
  ::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) throw AdapterUnavailable("pipe() failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw AdapterUnavailable("pipe() failed");
  }
  pid_t pid = ::fork();
  if (pid < 0) throw AdapterUnavailable("fork() failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  pid_ = pid;
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
}

ProcessTransport::~ProcessTransport() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) != 0) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }
}

std::string ProcessTransport::exchange(const std::string& line) {
  write_all(to_child_, line + "\n", false, describe());
  return read_line(from_child_, buffer_, timeout_, describe());
}

TcpTransport::TcpTransport(std::string host, int port, std::chrono::milliseconds timeout)
    : host_(std::move(host)), port_(port), timeout_(timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string service = std::to_string(port_);
  if (int rc = ::getaddrinfo(host_.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw AdapterUnavailable(describe() + ": cannot resolve host: " + ::gai_strerror(rc));
  }
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw AdapterUnavailable(describe() + ": connection refused");
}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) ::close(fd_);
}

std::string TcpTransport::exchange(const std::string& line) {
  write_all(fd_, line + "\n", true, describe());
  return read_line(fd_, buffer_, timeout_, describe());
}

RemoteEndpoint::RemoteEndpoint(std::unique_ptr<LineTransport> transport) : transport_(std::move(transport)) {}

json RemoteEndpoint::call(const json& request) {
  std::lock_guard lock(mutex_);
  return parse_line(transport_->exchange(request.dump()));
}

PingInfo RemoteEndpoint::ping() { return decode_ping(call(encode_ping())); }

RemoteClassifier::RemoteClassifier(std::shared_ptr<RemoteEndpoint> endpoint, double threshold)
    : endpoint_(std::move(endpoint)), threshold_(threshold) {}

Prediction RemoteClassifier::predict(std::span<const std::string> tokens) const {
  return decode_predict(endpoint_->call(encode_predict(tokens)), threshold_);
}

RemoteFiller::RemoteFiller(std::shared_ptr<RemoteEndpoint> endpoint) : endpoint_(std::move(endpoint)) {}

std::vector<FillCandidate> RemoteFiller::fill_mask(const FillRequest& request) const {
  request.validate();
  return decode_fill_mask(endpoint_->call(encode_fill_mask(request)), request);
}

std::string serve_line(const std::string& line, const Classifier& classifier, const MaskFiller& filler) {
  json op = nullptr;
  try {
    json req = json::parse(line);
    if (!req.is_object() || !req.contains("op") || !req["op"].is_string())
      return json{{"error", "request needs a string 'op'"}, {"op", nullptr}}.dump();
    op = req["op"];
    const std::string name = op.get<std::string>();
    if (name == "ping") return json{{"ok", true}, {"serial", false}, {"protocol", 1}}.dump();
    if (name == "predict") {
      auto tokens = req.at("tokens").get<std::vector<std::string>>();
      Prediction p = classifier.predict(tokens);
      return json{{"label", p.label}, {"score", p.score}}.dump();
    }
    if (name == "fill_mask") {
      FillRequest fr;
      fr.tokens = req.at("tokens").get<std::vector<std::string>>();
      fr.mask_positions = req.at("mask_positions").get<std::vector<int>>();
      fr.k = req.at("k").get<int>();
      if (req.contains("mask_groups")) fr.tied_positions = req["mask_groups"].get<std::vector<std::vector<int>>>();
      json cands = json::array();
      for (const FillCandidate& c : filler.fill_mask(fr)) {
        cands.push_back({{"replacements", c.replacements}, {"likelihood", c.likelihood}});
      }
      return json{{"candidates", cands}}.dump();
    }
    return json{{"error", "unknown op"}, {"op", op}}.dump();
  } catch (const std::exception& e) {
    return json{{"error", e.what()}, {"op", op}}.dump();
  }
}

}  // namespace cfex::wire
