#include <gtest/gtest.h>

#include <openssl/evp.h>

#include <atomic>
#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "geosynth/dsl.hpp"
#include "geosynth/endpoint.hpp"
#include "geosynth/eval.hpp"
#include "geosynth/layout.hpp"
#include "geosynth/qa.hpp"

using namespace geosynth;
using namespace geosynth::eval;
namespace fs = std::filesystem;

namespace {

AnswerSet set_of(std::initializer_list<const char*> xs) {
  AnswerSet s;
  for (const char* x : xs) s.insert(x);
  return s;
}

AnswerSet from_mask(unsigned mask) {
  AnswerSet s;
  for (int i = 0; i < 6; ++i) {
    if (mask & (1u << i)) s.insert(std::string(1, static_cast<char>('A' + i)));
  }
  return s;
}

QAItem make(const std::string& id, Task task, const std::string& question, const std::string& gt,
            const std::string& image = "") {
  QAItem it;
  it.id = id;
  it.task = task;
  it.question = question;
  it.gt = gt;
  it.image = image;
  return it;
}

double item_score(Task task, const std::string& gt, const std::string& response) {
  return evaluate_item(make("x", task, "", gt), response).score.value();
}

}  // namespace

TEST(Score, Examples) {
  EXPECT_EQ(score(set_of({"A", "B", "C"}), set_of({"A", "B"})), Rational(2, 3));
  EXPECT_EQ(score(set_of({"A", "B", "C"}), set_of({"A", "B", "C"})), Rational(1, 1));
  EXPECT_EQ(score(set_of({"A", "B", "C"}), set_of({"A", "D"})), Rational(0, 1));
  EXPECT_EQ(score(set_of({"A"}), {}), Rational(0, 1));
  try {
    score({}, set_of({"A"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyGroundTruth);
  }
}

TEST(Score, ExhaustiveOracle) {
  int cases = 0;
  for (unsigned g = 1; g < 64; ++g) {
    if (std::popcount(g) > 4) continue;
    for (unsigned p = 0; p < 64; ++p) {
      const auto got = score(from_mask(g), from_mask(p));
      const bool subset = p != 0 && (p & ~g) == 0;
      const long num = subset ? std::popcount(p) : 0;
      const long den = subset ? std::popcount(g) : 1;
      // cross-multiplied equality of num/den and got
      ASSERT_EQ(got.num * den, num * got.den) << g << " " << p;
      ++cases;
    }
  }
  EXPECT_EQ(cases, 56 * 64);
}

TEST(Parse, Examples) {
  auto r = parse_response(Task::POL, "The other points are: A, B, C");
  EXPECT_TRUE(r.parse_ok);
  EXPECT_EQ(r.answers, set_of({"A", "B", "C"}));
  r = parse_response(Task::LHC, "The longer line is: BC");
  EXPECT_EQ(r.answers, set_of({"BC"}));
  EXPECT_EQ(item_score(Task::LHC, "CB", "The longer line is: BC"), 1.0);
  r = parse_response(Task::POL, "I think the answer might be A");
  EXPECT_FALSE(r.parse_ok);
  EXPECT_TRUE(r.answers.empty());
}

TEST(Parse, OrderAndCaseInsensitive) {
  EXPECT_EQ(parse_response(Task::POC, "the points are: A, B").answers,
            parse_response(Task::POC, "THE POINTS ARE: B, A").answers);
  EXPECT_EQ(parse_response(Task::PRA, "The lines are: BC, DE").answers,
            parse_response(Task::PRA, "The lines are: ED, CB").answers);
  EXPECT_EQ(parse_response(Task::ALC, "The angle is: Acute.").answers, set_of({"acute"}));
  EXPECT_EQ(parse_response(Task::POL, "The other point is: \"D\".").answers, set_of({"D"}));
  EXPECT_EQ(parse_response(Task::POL, "The other points are: A, B and C").answers, set_of({"A", "B", "C"}));
}

TEST(Parse, LastMarkerWins) {
  const std::string raw = "The other point is: A\nOn reflection,\nThe other points are: B, C\nThanks.";
  EXPECT_EQ(parse_response(Task::POL, raw).answers, set_of({"B", "C"}));
}

TEST(Parse, MalformedPayloadFails) {
  EXPECT_FALSE(parse_response(Task::POL, "The other points are: AB, C").parse_ok);
  EXPECT_FALSE(parse_response(Task::ALC, "The angle is: right").parse_ok);
  EXPECT_FALSE(parse_response(Task::LHC, "The longer line is: BC, DE").parse_ok);
  EXPECT_FALSE(parse_response(Task::PRA, "The line is: B").parse_ok);
  EXPECT_FALSE(parse_response(Task::EQL, "The annotation is:").parse_ok);
}

TEST(Parse, EqualsIsVerbatim) {
  EXPECT_EQ(item_score(Task::EQL, "2x+4", "The annotation is: 2x+4"), 1.0);
  EXPECT_EQ(item_score(Task::EQL, "2x+4", "The annotation is: 4+2x"), 0.0);
  EXPECT_EQ(item_score(Task::EQL, "90", "The annotations is: 90."), 1.0);
  // equal-element answers name a segment or angle in either direction
  EXPECT_EQ(item_score(Task::EQL, "ABC", "Angle DEF is equal to angle CBA"), 1.0);
  EXPECT_EQ(item_score(Task::EQL, "AB", "The annotation is: BA"), 1.0);
  EXPECT_EQ(item_score(Task::EQL, "ABC", "The annotation is: ACB"), 0.0);
}

TEST(Parse, LinesResolveToFullGroundTruthLines) {
  // gt lines list every point on the line
  EXPECT_EQ(item_score(Task::PRA, "ABE, CD", "The lines are: EB, DC"), 1.0);
  EXPECT_EQ(item_score(Task::PRA, "ABE, CD", "The line is: AE"), 0.5);
  EXPECT_EQ(item_score(Task::PEP, "ABE, CD", "The lines are: AB, AE"), 0.5);
  EXPECT_EQ(item_score(Task::PEP, "ABE, CD", "The lines are: AB, AC"), 0.0);
}

TEST(Prompts, MatchTemplateFixtures) {
  for (Task t : kAllTasks) {
    const auto want = fixtures::read_fixture("prompts/" + std::string(task_name(t)) + ".txt");
    EXPECT_EQ(std::string(prompt_template(t)), want) << task_name(t);
  }
}

TEST(Prompts, DatasetAnswersAndTemplatesScoreFull) {
  int checked = 0;
  for (const auto& shape : fixtures::corpus_shapes()) {
    const Task task = qa::parse_task(shape.task);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto fig = layout::solve_program(dsl::parse_program(shape.source), layout::LayoutConfig{}, seed);
      Rng rng(seed);
      fig = layout::assign_letters(fig, 26, rng);
      std::vector<QAItem> items;
      try {
        items = qa::synthesize_all(task, fig, rng);
      } catch (const Error&) {
        continue;
      }
      for (const auto& it : items) {
        ASSERT_EQ(item_score(task, it.gt, it.answer), 1.0) << it.answer << " / " << it.gt;
        ASSERT_EQ(item_score(task, it.gt, template_response(task, it.gt)), 1.0) << it.gt;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(Predictions, ExactAnswersScoreFull) {
  std::vector<QAItem> ds{make("a", Task::POL, "q", "CD"), make("b", Task::ALC, "q", "acute"),
                         make("c", Task::LHC, "q", "AB"), make("d", Task::POL, "q", "E")};
  std::stringstream in;
  in << R"({"id":"a","response":"The other points are: C, D"})" << "\n"
     << R"({"id":"b","response":"The angle is: acute"})" << "\n\n"
     << R"({"id":"c","response":"The longer line is: BA"})" << "\n"
     << R"({"id":"d","response":"The other point is: E"})" << "\n";
  const auto run = score_predictions(ds, in);
  EXPECT_DOUBLE_EQ(run.report.overall, 100.0);
  EXPECT_DOUBLE_EQ(run.report.per_task.at("POL"), 100.0);
  EXPECT_EQ(run.report.n_items, 4u);
  EXPECT_TRUE(run.report.missing_ids.empty());
  EXPECT_DOUBLE_EQ(run.report.parse_failure_rate, 0.0);
}

TEST(Predictions, MissingIdsScoreZero) {
  std::vector<QAItem> ds{make("a", Task::POL, "q", "C"), make("b", Task::POL, "q", "D"),
                         make("c", Task::POL, "q", "E"), make("d", Task::POL, "q", "F")};
  std::stringstream in;
  in << R"({"id":"a","response":"The other point is: C"})" << "\n"
     << R"({"id":"c","response":"The other point is: E"})" << "\n";
  const auto run = score_predictions(ds, in);
  EXPECT_DOUBLE_EQ(run.report.per_task.at("POL"), 50.0);
  EXPECT_EQ(run.report.missing_ids, (std::vector<std::string>{"b", "d"}));
  EXPECT_DOUBLE_EQ(run.report.parse_failure_rate, 0.0);
}

TEST(Predictions, Malformed) {
  std::vector<QAItem> ds{make("a", Task::POL, "q", "C")};
  auto code = [&](const std::string& text) {
    std::stringstream in(text);
    try {
      score_predictions(ds, in);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  EXPECT_EQ(code("{\"id\":\"a\",\"response\":\"x\"}\n{\"id\":\"a\",\"response\":\"y\"}\n"), Errc::MalformedPredictions);
  EXPECT_EQ(code("{not json}\n"), Errc::MalformedPredictions);
  EXPECT_EQ(code("{\"id\":\"a\"}\n"), Errc::MalformedPredictions);
}

TEST(Predictions, OverallIsMeanOfTaskAverages) {
  std::vector<QAItem> ds{make("a", Task::POL, "q", "C"), make("b", Task::POL, "q", "D"),
                         make("c", Task::POL, "q", "E"), make("d", Task::ALC, "q", "acute")};
  std::map<std::string, std::string> resp{{"a", "The other point is: C"},
                                          {"b", "nonsense"},
                                          {"c", "The other point is: Z"},
                                          {"d", "The angle is: acute"}};
  const auto run = score_responses(ds, resp);
  EXPECT_NEAR(run.report.per_task.at("POL"), 100.0 / 3.0, 1e-12);
  EXPECT_NEAR(run.report.overall, (100.0 / 3.0 + 100.0) / 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(run.report.parse_failure_rate, 0.25);
}

// ---- endpoint ------------------------------------------------------------

namespace {

std::vector<std::uint8_t> unbase64(const std::string& s) {
  std::vector<std::uint8_t> out(s.size());
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(s.data()), static_cast<int>(s.size()));
  const auto pad = s.size() - s.find_last_not_of('=') - 1;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

class FakeModel {
 public:
  using Reply = std::function<std::pair<int, std::string>(const std::string& prompt)>;

  explicit FakeModel(Reply reply) : reply_(std::move(reply)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests;
      const auto j = nlohmann::json::parse(req.body);
      const std::string prompt = j["messages"][0]["content"][0]["text"];
      const std::string url = j["messages"][0]["content"][1]["image_url"]["url"];
      const std::string prefix = "data:image/png;base64,";
      if (url.rfind(prefix, 0) == 0) {
        auto bytes = unbase64(url.substr(prefix.size()));
        try {
          const auto img = decode_png(bytes);
          if (img.width != img.height) non_square = true;
        } catch (const Error&) {
          bad_image = true;
        }
      } else {
        bad_image = true;
      }
      auth = req.get_header_value("Authorization");
      auto [status, text] = reply_(prompt);
      res.status = status;
      res.set_content(nlohmann::json{{"choices", {{{"message", {{"content", text}}}}}}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeModel() {
    server_.stop();
    thread_.join();
  }

  EndpointConfig config() const {
    EndpointConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    c.backoff_ms = 1;
    c.timeout_s = 5;
    c.concurrency = 3;
    return c;
  }

  std::atomic<int> requests{0};
  std::atomic<bool> non_square{false};
  std::atomic<bool> bad_image{false};
  std::string auth;

 private:
  Reply reply_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

struct EvalDir {
  fs::path root;
  std::vector<QAItem> items;

  EvalDir() : root(fs::temp_directory_path() / ("geosynth_eval_" + std::to_string(::getpid()))) {
    fs::remove_all(root);
    fs::create_directories(root / "images");
    Image img(200, 120);
    img.set(10, 10, {0, 0, 0});
    write_bytes(root / "images" / "x.png", encode_png(img));
    const char* pts[] = {"CD", "EF", "GH", "IJ", "KL", "MN"};
    for (int i = 0; i < 6; ++i) {
      items.push_back(make("pol-" + std::to_string(i), Task::POL,
                           "What is the point lying on line A" + std::string(1, static_cast<char>('P' + i)) + "?",
                           pts[i], "images/x.png"));
    }
  }
  ~EvalDir() { fs::remove_all(root); }
};

std::string question_of(const std::string& prompt) { return prompt.substr(prompt.rfind("Question: ") + 10); }

}  // namespace

TEST(Endpoint, EchoScoresFull) {
  EvalDir dir;
  std::map<std::string, std::string> gt_by_question;
  for (const auto& it : dir.items) gt_by_question[it.question] = it.gt;
  FakeModel model([&](const std::string& prompt) {
    return std::pair{200, template_response(Task::POL, gt_by_question.at(question_of(prompt)))};
  });
  const auto run = evaluate_model(dir.items, dir.root, model.config(), dir.root / "raw.jsonl");
  EXPECT_DOUBLE_EQ(run.report.per_task.at("POL"), 100.0);
  EXPECT_FALSE(model.non_square);
  EXPECT_FALSE(model.bad_image);
  std::ifstream raw(dir.root / "raw.jsonl");
  const auto responses = read_predictions(raw);
  EXPECT_EQ(responses.size(), dir.items.size());
}

TEST(Endpoint, EmptyRepliesScoreZero) {
  EvalDir dir;
  FakeModel model([](const std::string&) { return std::pair{200, std::string()}; });
  const auto run = evaluate_model(dir.items, dir.root, model.config(), dir.root / "raw.jsonl");
  EXPECT_DOUBLE_EQ(run.report.per_task.at("POL"), 0.0);
  EXPECT_DOUBLE_EQ(run.report.parse_failure_rate, 1.0);
}

TEST(Endpoint, HalfSubsetScoresFifty) {
  EvalDir dir;
  std::map<std::string, std::string> gt_by_question;
  for (const auto& it : dir.items) gt_by_question[it.question] = it.gt;
  FakeModel model([&](const std::string& prompt) {
    const auto gt = gt_by_question.at(question_of(prompt));
    return std::pair{200, "The other point is: " + gt.substr(0, 1)};
  });
  const auto run = evaluate_model(dir.items, dir.root, model.config(), dir.root / "raw.jsonl");
  EXPECT_DOUBLE_EQ(run.report.per_task.at("POL"), 50.0);
}

TEST(Endpoint, RetriesTransientFailures) {
  EvalDir dir;
  dir.items.resize(1);
  std::atomic<int> calls{0};
  FakeModel model([&](const std::string&) {
    return ++calls < 3 ? std::pair{503, std::string("busy")} : std::pair{200, std::string("The other points are: C, D")};
  });
  const auto run = evaluate_model(dir.items, dir.root, model.config(), dir.root / "raw.jsonl");
  EXPECT_EQ(model.requests, 3);
  EXPECT_DOUBLE_EQ(run.report.overall, 100.0);
}

TEST(Endpoint, GivesUpAfterRetries) {
  EvalDir dir;
  dir.items.resize(1);
  FakeModel model([](const std::string&) { return std::pair{500, std::string("down")}; });
  try {
    evaluate_model(dir.items, dir.root, model.config(), dir.root / "raw.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EndpointError);
  }
  EXPECT_EQ(model.requests, 4);
}

TEST(Endpoint, ClientErrorIsNotRetried) {
  EvalDir dir;
  dir.items.resize(1);
  FakeModel model([](const std::string&) { return std::pair{400, std::string("bad")}; });
  EXPECT_THROW(evaluate_model(dir.items, dir.root, model.config(), dir.root / "raw.jsonl"), Error);
  EXPECT_EQ(model.requests, 1);
}

TEST(Endpoint, AuthTokenFromEnvironment) {
  EvalDir dir;
  dir.items.resize(1);
  FakeModel model([](const std::string&) { return std::pair{200, std::string("The other points are: C, D")}; });
  auto cfg = model.config();
  cfg.api_key_env = "GEOSYNTH_TEST_TOKEN";
  ::setenv("GEOSYNTH_TEST_TOKEN", "s3cret", 1);
  evaluate_model(dir.items, dir.root, cfg, dir.root / "raw.jsonl");
  ::unsetenv("GEOSYNTH_TEST_TOKEN");
  EXPECT_EQ(model.auth, "Bearer s3cret");
}

TEST(Endpoint, MissingImage) {
  EvalDir dir;
  dir.items[2].image = "images/none.png";
  FakeModel model([](const std::string&) { return std::pair{200, std::string()}; });
  try {
    evaluate_model(dir.items, dir.root, model.config(), dir.root / "raw.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ImageMissing);
  }
  EXPECT_EQ(model.requests, 0);
}
