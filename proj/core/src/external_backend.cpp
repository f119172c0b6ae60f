#include "mtgender/external_backend.hpp"

#include <csignal>
#include <cstring>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "mtgender/errors.hpp"

namespace mtg {
namespace {

using nlohmann::json;

json parse_response(const std::string& line, const std::string& who) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw BackendFailure(who + ": malformed response: " + e.what());
  }
  if (!obj.is_object()) throw BackendFailure(who + ": response is not a JSON object");
  if (obj.contains("error")) throw BackendFailure(who + ": " + obj["error"].dump());
  return obj;
}

template <typename T>
T field(const json& obj, const char* key, const std::string& who) {
  if (!obj.contains(key)) throw BackendFailure(who + ": response lacks '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw BackendFailure(who + ": bad '" + key + "': " + e.what());
  }
}

}  // namespace

ExternalProcessBackend::ExternalProcessBackend(std::vector<std::string> command)
    : command_(std::move(command)) {
  if (command_.empty()) throw BackendFailure("external backend: empty command");
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) throw BackendFailure(std::string("pipe: ") + std::strerror(errno));
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw BackendFailure(std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<char*> argv;
  for (auto& arg : command_) argv.push_back(arg.data());
  argv.push_back(nullptr);

  pid_ = ::fork();
  if (pid_ < 0) throw BackendFailure(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execvp(argv[0], argv.data());
    std::_Exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = ::fdopen(in_pipe[1], "w");
  from_child_ = ::fdopen(out_pipe[0], "r");
  if (to_child_ == nullptr || from_child_ == nullptr) {
    shutdown();
    throw BackendFailure("external backend: fdopen failed");
  }

  try {
    const auto info = parse_response(round_trip(json{{"op", "info"}}.dump()), command_.front());
    name_ = field<std::string>(info, "name", command_.front());
    version_ = field<std::string>(info, "version", command_.front());
  } catch (...) {
    shutdown();
    throw;
  }
}

ExternalProcessBackend::~ExternalProcessBackend() { shutdown(); }

void ExternalProcessBackend::shutdown() noexcept {
  if (to_child_ != nullptr) {
    std::fclose(to_child_);
    to_child_ = nullptr;
  }
  if (from_child_ != nullptr) {
    std::fclose(from_child_);
    from_child_ = nullptr;
  }
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

std::string ExternalProcessBackend::round_trip(const std::string& request_line) {
  const std::string who = name_.empty() ? command_.front() : name_;
  if (to_child_ == nullptr || from_child_ == nullptr) throw BackendFailure(who + ": process not running");
  // A dead child must surface as BackendFailure, not SIGPIPE.
  struct sigaction ignore {};
  struct sigaction previous {};
  ignore.sa_handler = SIG_IGN;
  ::sigaction(SIGPIPE, &ignore, &previous);
  const bool written = std::fputs(request_line.c_str(), to_child_) >= 0 && std::fputc('\n', to_child_) != EOF &&
                       std::fflush(to_child_) == 0;
  ::sigaction(SIGPIPE, &previous, nullptr);
  if (!written) throw BackendFailure(who + ": write to backend process failed");

  std::string line;
  int c;
  while ((c = std::fgetc(from_child_)) != EOF && c != '\n') line.push_back(static_cast<char>(c));
  if (c == EOF && line.empty()) throw BackendFailure(who + ": backend process closed its output");
  return line;
}

std::string ExternalProcessBackend::translate(std::string_view source) {
  const auto resp = parse_response(round_trip(json{{"op", "translate"}, {"text", source}}.dump()), name_);
  return field<std::string>(resp, "text", name_);
}

std::vector<std::string> ExternalProcessBackend::tokenize(std::string_view text, TokenSide side) {
  const json req{{"op", "tokenize"}, {"text", text}, {"side", side == TokenSide::kSource ? "source" : "target"}};
  const auto resp = parse_response(round_trip(req.dump()), name_);
  return field<std::vector<std::string>>(resp, "tokens", name_);
}

GradientResult ExternalProcessBackend::contrastive_gradient(const GradientRequest& request) {
  const json req{{"op", "contrastive_gradient"},
                 {"source", request.source},
                 {"prefix", std::vector<std::string>(request.target_prefix.begin(), request.target_prefix.end())},
                 {"original", request.original_token},
                 {"contrastive", request.contrastive_token}};
  const auto resp = parse_response(round_trip(req.dump()), name_);
  GradientResult result;
  result.source_tokens = field<std::vector<std::string>>(resp, "source_tokens", name_);
  result.source_gradients = field<std::vector<std::vector<double>>>(resp, "source_gradients", name_);
  if (resp.contains("prefix_tokens")) {
    result.prefix_tokens = field<std::vector<std::string>>(resp, "prefix_tokens", name_);
  }
  if (resp.contains("prefix_gradients")) {
    result.prefix_gradients = field<std::vector<std::vector<double>>>(resp, "prefix_gradients", name_);
  }
  if (resp.contains("source_embeddings")) {
    result.source_embeddings = field<std::vector<std::vector<double>>>(resp, "source_embeddings", name_);
  }
  return result;
}

}  // namespace mtg
