#include "rtqa/service/http_api.hpp"

#include "httplib.h"
#include "rtqa/facts/plan_io.hpp"

namespace rtqa::service {

namespace {

json error_body(std::string_view kind, const std::string& message) { return {{"error", kind}, {"message", message}}; }

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    const HttpError err = http_error_for(e);
    send_json(res, err.status, err.body);
  }
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw facts::SchemaError("", std::string("request body is not valid JSON: ") + e.what());
  }
}

}  // namespace

HttpError http_error_for(const std::exception& ex) {
  if (const auto* e = dynamic_cast<const UnknownSession*>(&ex)) return {404, error_body("UnknownSession", e->what())};
  if (const auto* e = dynamic_cast<const facts::NotFound*>(&ex)) return {404, error_body("NotFound", e->what())};
  if (const auto* e = dynamic_cast<const evaluation::UnknownCriterion*>(&ex)) {
    return {404, error_body("UnknownCriterion", e->what())};
  }
  if (const auto* e = dynamic_cast<const evaluation::ConflictingAnswer*>(&ex)) {
    return {409, error_body("ConflictingAnswer", e->what())};
  }
  if (const auto* e = dynamic_cast<const evaluation::NotPending*>(&ex)) return {409, error_body("NotPending", e->what())};
  if (const auto* e = dynamic_cast<const evaluation::PendingManualAnswers*>(&ex)) {
    json body = error_body("PendingManualAnswers", e->what());
    body["criteria"] = e->criteria;
    return {409, body};
  }
  if (const auto* e = dynamic_cast<const evaluation::InvalidSessionState*>(&ex)) {
    return {409, error_body("InvalidSessionState", e->what())};
  }
  if (const auto* e = dynamic_cast<const facts::SchemaError*>(&ex)) {
    json body = error_body("SchemaError", e->detail);
    body["pointer"] = e->pointer;
    return {422, body};
  }
  if (const auto* e = dynamic_cast<const facts::GridShapeMismatch*>(&ex)) {
    json body = error_body("GridShapeMismatch", e->what());
    body["pointer"] = "/plan/grid/values";
    return {422, body};
  }
  if (const auto* e = dynamic_cast<const evaluation::NoApplicableClass*>(&ex)) {
    return {422, error_body("NoApplicableClass", e->what())};
  }
  if (const auto* e = dynamic_cast<const evaluation::AmbiguousClass*>(&ex)) {
    return {422, error_body("AmbiguousClass", e->what())};
  }
  return {500, error_body("InternalError", ex.what())};
}

HttpApi::HttpApi(std::shared_ptr<SessionStore> store)
    : store_(std::move(store)), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 201, store_->create(parse_body(req))); });
  });
  s.Get(R"(/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, store_->state(req.matches[1])); });
  });
  s.Post(R"(/sessions/([0-9a-f]+)/answers)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, store_->answer(req.matches[1], parse_body(req))); });
  });
  s.Post(R"(/sessions/([0-9a-f]+)/finalize)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      res.status = 200;
      res.set_content(store_->finalize(req.matches[1]), "application/json");
    });
  });
  s.Get(R"(/sessions/([0-9a-f]+)/trace)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, store_->trace(req.matches[1])); });
  });
  s.Get("/rulepacks", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, store_->rulepacks()); });
  });
  // Anything else, including malformed session ids.
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) send_json(res, 404, error_body("NotFound", "no such resource"));
  });
}

HttpApi::~HttpApi() { stop(); }

bool HttpApi::listen(const std::string& host, int port) { return server_->listen(host, port); }

int HttpApi::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpApi::listen_after_bind() { return server_->listen_after_bind(); }

void HttpApi::stop() {
  if (server_) server_->stop();
}

bool HttpApi::is_running() const { return server_->is_running(); }

void HttpApi::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace rtqa::service
