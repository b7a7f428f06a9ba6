#include <gtest/gtest.h>

#include <future>
#include <thread>

#include "httplib.h"
#include "rtqa/facts/plan_io.hpp"
#include "rtqa/service/http_api.hpp"
#include "rtqa/service/session_store.hpp"
#include "support/fixtures.hpp"

namespace rtqa::service {
namespace {

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    repo_ = std::make_shared<facts::MlmRepository>(tmp_.path() / "repo");
    repo_->store(rulelang::load_rulepack_dir(test::sample_pack_dir()));
    store_ = std::make_shared<SessionStore>(repo_, tmp_.path() / "snapshots");
  }

  static json body(const std::string& plan = "pass", const std::string& facts = "pass") {
    return {{"facts", test::load_json(test::fixture_path("facts/facts_" + facts + ".json"))},
            {"plan", test::load_json(test::fixture_path("plans/plan_" + plan + ".json"))},
            {"rulepack", "prostate_3dcrt"}};
  }

  static json answer(const std::string& a = "Pass") {
    return {{"criterion", "nodal_ctv_superior_margin"}, {"answer", a}, {"answered_by", "reviewer"}};
  }

  test::TempDir tmp_;
  std::shared_ptr<facts::MlmRepository> repo_;
  std::shared_ptr<SessionStore> store_;
};

TEST_F(ServiceTest, StoreLifecycle) {
  const json state = store_->create(body());
  const std::string id = state.at("session_id");
  EXPECT_EQ(state.at("risk_class"), "low_risk_prostate");
  EXPECT_EQ(state.at("status"), "AwaitingManual");
  EXPECT_THROW(store_->finalize(id), evaluation::PendingManualAnswers);
  store_->answer(id, answer());
  EXPECT_THROW(store_->answer(id, answer("Fail")), evaluation::ConflictingAnswer);
  const json report = json::parse(store_->finalize(id));
  EXPECT_EQ(report.at("overall"), "Accredited");
  EXPECT_EQ(store_->finalize(id), report.dump(2) + "\n");
  EXPECT_EQ(store_->trace(id).size(), 2u);
  EXPECT_THROW(store_->state("0000"), UnknownSession);
}

TEST_F(ServiceTest, CreateErrors) {
  json b = body();
  b["rulepack"] = "unknown_pack";
  EXPECT_THROW(store_->create(b), facts::NotFound);
  b = body();
  b["plan"]["grid"]["values"].push_back(1.0);
  EXPECT_THROW(store_->create(b), facts::GridShapeMismatch);
  b = body();
  b.erase("facts");
  EXPECT_THROW(store_->create(b), facts::SchemaError);
  EXPECT_THROW(store_->create(body("pass", "n1")), evaluation::NoApplicableClass);
}

TEST_F(ServiceTest, SnapshotsRestore) {
  const std::string open_id = store_->create(body()).at("session_id");
  const std::string done_id = store_->create(body("fail")).at("session_id");
  store_->answer(done_id, answer());
  const std::string report = store_->finalize(done_id);

  SessionStore restored(repo_, tmp_.path() / "snapshots");
  EXPECT_EQ(restored.restore_snapshots(), 2u);
  EXPECT_EQ(restored.finalize(done_id), report);
  EXPECT_EQ(restored.state(open_id).at("status"), "AwaitingManual");
  restored.answer(open_id, answer());
  EXPECT_EQ(json::parse(restored.finalize(open_id)).at("overall"), "Accredited");
}

class HttpTest : public ServiceTest {
 protected:
  void SetUp() override {
    ServiceTest::SetUp();
    api_ = std::make_unique<HttpApi>(store_);
    port_ = api_->bind_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    server_ = std::thread([this] { api_->listen_after_bind(); });
    api_->wait_until_ready();
  }

  void TearDown() override {
    api_->stop();
    if (server_.joinable()) server_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }

  std::unique_ptr<HttpApi> api_;
  int port_ = -1;
  std::thread server_;
};

TEST_F(HttpTest, StatusCodes) {
  auto c = client();
  auto created = c.Post("/sessions", body().dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const json state = json::parse(created->body);
  EXPECT_EQ(state.at("risk_class"), "low_risk_prostate");
  const std::string id = state.at("session_id");

  auto pending = c.Post("/sessions/" + id + "/finalize", "", "application/json");
  EXPECT_EQ(pending->status, 409);
  EXPECT_EQ(json::parse(pending->body).at("error"), "PendingManualAnswers");

  auto not_pending = c.Post("/sessions/" + id + "/answers",
                            json{{"criterion", "ptv_coverage"}, {"answer", "Pass"}, {"answered_by", "r"}}.dump(),
                            "application/json");
  EXPECT_EQ(not_pending->status, 409);

  EXPECT_EQ(c.Post("/sessions/" + id + "/answers", answer().dump(), "application/json")->status, 200);
  auto conflict = c.Post("/sessions/" + id + "/answers", answer("Fail").dump(), "application/json");
  EXPECT_EQ(conflict->status, 409);
  EXPECT_EQ(json::parse(conflict->body).at("error"), "ConflictingAnswer");

  EXPECT_EQ(c.Get("/sessions/" + id)->status, 200);
  EXPECT_EQ(c.Get("/sessions/" + id + "/trace")->status, 200);
  auto fin = c.Post("/sessions/" + id + "/finalize", "", "application/json");
  EXPECT_EQ(fin->status, 200);
  EXPECT_EQ(fin->body, store_->finalize(id));

  EXPECT_EQ(c.Get("/sessions/deadbeef")->status, 404);
  EXPECT_EQ(c.Get("/nowhere")->status, 404);
  const auto listing = json::parse(c.Get("/rulepacks")->body).at("rulepacks");
  ASSERT_EQ(listing.size(), 1u);
  EXPECT_EQ(listing[0].at("id"), "prostate_3dcrt");
}

TEST_F(HttpTest, SchemaErrorsAre422WithPointer) {
  auto c = client();
  json b = body();
  b["plan"]["structures"][0]["voxels"][0][0] = 99;
  auto r = c.Post("/sessions", b.dump(), "application/json");
  EXPECT_EQ(r->status, 422);
  EXPECT_EQ(json::parse(r->body).at("pointer"), "/plan/structures/0/voxels/0/0");
  EXPECT_EQ(c.Post("/sessions", "{not json", "application/json")->status, 422);
  b = body();
  b["rulepack"] = "missing";
  EXPECT_EQ(c.Post("/sessions", b.dump(), "application/json")->status, 404);
}

TEST_F(HttpTest, ConcurrentSessionsStayIndependent) {
  constexpr int kSessions = 32;
  const std::string pass_body = body("pass").dump();
  const std::string fail_body = body("fail").dump();
  std::vector<std::future<std::pair<bool, std::string>>> futures;
  for (int i = 0; i < kSessions; ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      auto c = client();
      auto created = c.Post("/sessions", i % 2 ? fail_body : pass_body, "application/json");
      if (!created || created->status != 201) return std::pair{i % 2 == 1, std::string("create failed")};
      const std::string id = json::parse(created->body).at("session_id");
      c.Post("/sessions/" + id + "/answers", answer().dump(), "application/json");
      auto fin = c.Post("/sessions/" + id + "/finalize", "", "application/json");
      return std::pair{i % 2 == 1, fin ? fin->body : std::string()};
    }));
  }
  std::set<std::string> pass_reports, fail_reports;
  for (auto& f : futures) {
    auto [failing, report] = f.get();
    ASSERT_FALSE(report.empty());
    (failing ? fail_reports : pass_reports).insert(report);
  }
  ASSERT_EQ(pass_reports.size(), 1u);
  ASSERT_EQ(fail_reports.size(), 1u);
  EXPECT_EQ(json::parse(*pass_reports.begin()).at("overall"), "Accredited");
  EXPECT_EQ(json::parse(*fail_reports.begin()).at("overall"), "Rejected");
  EXPECT_EQ(store_->size(), static_cast<std::size_t>(kSessions));
}

}  // namespace
}  // namespace rtqa::service
