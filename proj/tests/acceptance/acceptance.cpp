// Acceptance suite: one line per criterion, non-zero exit when any fails.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "cobra/assist/demo.hpp"
#include "cobra/config/settings.hpp"
#include "cobra/server/documents.hpp"
#include "cobra/server/hub.hpp"
#include "cobra/server/wire.hpp"
#include "cobra/slides/deck.hpp"
#include "cobra/snippets/fragments.hpp"
#include "cobra/snippets/markers.hpp"
#include "cobra/snippets/projection.hpp"
#include "projection_oracle.hpp"
#include "random_messages.hpp"
#include "random_ops.hpp"
#include "sim.hpp"

namespace fs = std::filesystem;
using namespace cobra;

namespace {

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

std::string ot_properties() {
  using testing::random_splices;
  using testing::splice_oracle;
  using testing::to_operation;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  constexpr int kPairs = 100000;
  for (int i = 0; i < kPairs; ++i) {
    const Text s = testing::random_text(rng, 12);
    const auto sa = random_splices(rng, s.size(), U"xy");
    const auto sb = random_splices(rng, s.size(), U"yz");
    const auto a = to_operation(sa, s.size());
    const auto b = to_operation(sb, s.size());
    const Text after_a = sync::apply(s, a);
    const Text after_b = sync::apply(s, b);
    require(after_a == splice_oracle(s, sa) && after_b == splice_oracle(s, sb), "apply disagrees with splice oracle");

    const auto [a2, b2] = sync::transform(a, b);
    require(sync::apply(after_a, b2) == sync::apply(after_b, a2), "TP1 violated at pair " + std::to_string(i));

    const auto sc = random_splices(rng, after_a.size(), U"w");
    const auto c = to_operation(sc, after_a.size());
    const Text expected = splice_oracle(splice_oracle(s, sa), sc);
    require(sync::apply(s, sync::compose(a, c)) == expected, "compose disagrees with splice oracle");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  require(secs < 60.0, "took " + std::to_string(secs) + " s");
  std::ostringstream msg;
  msg << kPairs << " pairs in " << secs << " s";
  return msg.str();
}

// ---------------------------------------------------------------------------

// Snippet bodies by line: text strictly between `(** begin #x *)` and
// `(** end #x *)` lines.
std::map<std::string, std::string> oracle_snippets(const std::string& raw) {
  static const std::regex begin_re(R"(^\s*\(\*\*\s*begin #([A-Za-z0-9_.:-]+)\s*\*\)\s*$)");
  static const std::regex end_re(R"(^\s*\(\*\*\s*end #([A-Za-z0-9_.:-]+)\s*\*\)\s*$)");
  std::map<std::string, std::string> out;
  std::map<std::string, std::vector<std::string>> open;
  for (const auto& line : testing::split_lines(raw)) {
    std::smatch m;
    if (std::regex_match(line, m, begin_re)) {
      open[m[1]];
    } else if (std::regex_match(line, m, end_re)) {
      std::string body;
      const auto& lines = open.at(m[1]);
      for (std::size_t i = 0; i < lines.size(); ++i) body += (i ? "\n" : "") + lines[i];
      out[m[1]] = body;
      open.erase(m[1]);
    } else {
      for (auto& [name, lines] : open) lines.push_back(line);
    }
  }
  return out;
}

std::string five_slide_fixture() {
  const fs::path dir = fs::path(COBRA_FIXTURES_DIR) / "five-slides";
  const auto deck = slides::parse_slides(read_file(dir / "slides.html"));
  require(deck.slides.size() == 5, "slides: " + std::to_string(deck.slides.size()));
  require(deck.hidden_code.size() == 1, "hidden blocks: " + std::to_string(deck.hidden_code.size()));
  const auto& hidden = deck.code_blocks[deck.hidden_code[0]];
  const std::string raw8 = read_file(dir / hidden.src);
  const Text raw = from_utf8(raw8);
  const auto defs = snippets::extract_snippets(raw, *snippets::find_language("isabelle"));
  std::set<std::string> names;
  for (const auto& d : defs) names.insert(d.name);
  require(names == std::set<std::string>{"def-seq-conc", "reverse-conc", "reverse-reverse"}, "snippet names differ");
  const auto expected = oracle_snippets(raw8);
  for (const auto& d : defs) {
    const Text body = raw.substr(d.begin_offset, d.end_offset - d.begin_offset);
    require(to_utf8(body) == expected.at(d.name), "range of " + d.name + " differs from line oracle");
    require(body.find(U"(**") == Text::npos, "range of " + d.name + " includes a marker");
  }
  return "5 slides, 1 hidden block, 3 snippets";
}

// ---------------------------------------------------------------------------

std::vector<std::string> variant_texts(const std::string& src, const char* language) {
  const auto fragments = snippets::parse_fragments(from_utf8(src), *snippets::find_language(language));
  require(fragments.size() == 1, src + ": " + std::to_string(fragments.size()) + " fragments");
  std::vector<std::string> out;
  for (const auto& v : fragments[0].variants) out.push_back(to_utf8(v.text));
  return out;
}

std::string fragment_forms() {
  const std::vector<std::string> sum{"???", "3 * 7"};
  require(variant_texts("/*(*/???/*|3 * 7)*/", "scala") == sum, "first variant live");
  require(variant_texts("/*(???|*/3 * 7/*)*/", "scala") == sum, "second variant live");
  const std::vector<std::string> fibs{"undefined", "0 : 1 : zipWith (+) fibs (tail fibs)"};
  require(variant_texts("{-(-}undefined{-|0 : 1 : zipWith (+) fibs (tail fibs))-}", "haskell") == fibs,
          "haskell form");
  return "3 forms";
}

// ---------------------------------------------------------------------------

std::string projection_scripts() {
  const auto& scala = *snippets::find_language("scala");
  const std::vector<std::string> ids{"whole", "a", "b", "c"};
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
  std::size_t accepted = 0, rejected = 0;
  constexpr int kScripts = 1000;
  for (int script = 0; script < kScripts; ++script) {
    server::DocumentStore store;
    store.add_source("src", from_utf8(testing::random_marked_document(rng)), "scala");
    store.add_view({"whole", "src", std::nullopt, false});
    for (const char* n : {"a", "b", "c"}) store.add_view({n, "src", std::string(n), true});
    for (int step = 0; step < 10; ++step) {
      const std::string& id = ids[pick(rng)];
      const auto& v = store.view(id);
      const auto op = testing::random_operation(rng, v.log.text().size(), U"pq \n");
      try {
        store.edit(id, 1, v.log.head_seq(), op);
        ++accepted;
      } catch (const snippets::EditRejected&) {
        ++rejected;
      }
      const auto& src = store.source("src");
      const Text raw = src.log.text();
      const auto structure = snippets::scan_structure(raw, scala);
      require(structure == src.structure, "stored structure differs from rescan");
      for (const auto& vid : ids) {
        const auto& view = store.view(vid);
        const auto fresh = snippets::project(raw, structure, view.spec.snippet, src.fragment_state,
                                             view.spec.strip_markers);
        require(view.log.text() == fresh.view_text, "view " + vid + " differs from re-projection");
        const auto oracle = testing::oracle_view(to_utf8(raw), vid == "whole" ? "" : vid);
        require(oracle && *oracle == to_utf8(view.log.text()), "view " + vid + " differs from line oracle\n--raw--\n" + to_utf8(raw) + "\n--view--\n" + to_utf8(view.log.text()) + "\n--oracle--\n" + oracle.value_or("<none>"));
      }
    }
  }
  require(accepted > rejected, "too few accepted edits");
  return std::to_string(kScripts) + " scripts, " + std::to_string(accepted) + " edits applied, " +
         std::to_string(rejected) + " rejected";
}

// ---------------------------------------------------------------------------

std::string wire_round_trips() {
  using namespace server::wire;
  const Bytes ack = encode(Ack{"d", 1});
  require(ack == Bytes{0x05, 0x01, 0x64, 0x01}, "Ack layout");
  std::mt19937_64 rng(5);
  constexpr int kTrips = 20000;
  for (int i = 0; i < kTrips; ++i) {
    const Message m = testing::random_message(rng);
    require(decode(encode(m)) == m, std::string("round trip of ") + message_name(m));
  }
  return std::to_string(kTrips) + " round trips, Ack = 05 01 64 01";
}

// ---------------------------------------------------------------------------

std::string five_session_simulation() {
  auto settings = config::resolve({}, config::reference_config());
  settings.assistant_debounce_ms = 0;
  server::DocumentStore store;
  store.add_source("doc", U"val x = (1 + 2)\n", "demo");
  store.add_view({"doc", "doc", std::nullopt, true});
  server::Hub hub(std::move(store), settings, {});

  std::vector<std::unique_ptr<testing::SimClient>> clients;
  for (int i = 0; i < 5; ++i) {
    clients.push_back(std::make_unique<testing::SimClient>(hub, i == 0));
    clients.back()->hello();
    clients.back()->open("doc");
    clients.back()->pump();
  }
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> who(0, clients.size() - 1);
  std::uniform_int_distribution<std::size_t> frames(0, 4);
  constexpr int kEdits = 500;
  for (int n = 0; n < kEdits; ++n) {
    auto& c = *clients[who(rng)];
    c.edit("doc", testing::random_operation(rng, c.doc("doc").text().size(), U"ab1( )\n"));
    clients[who(rng)]->pump(frames(rng));
  }
  testing::quiesce(hub, clients);

  const Text head = hub.with_store([](const server::DocumentStore& s) { return s.view("doc").log.text(); });
  const auto expected = assist::demo_analyze(head, *snippets::find_language("demo"));
  for (std::size_t i = 0; i < clients.size(); ++i) {
    const auto& c = *clients[i];
    const std::string who_s = "session " + std::to_string(i);
    require(c.synchronized(), who_s + " has unacknowledged edits");
    require(c.doc("doc").text() == head, who_s + " diverged");
    require(c.violations().empty(), who_s + ": " + (c.violations().empty() ? "" : c.violations()[0]));
    require(c.errors().empty(), who_s + " got an error");
    require(c.annotations().contains("doc") && c.annotations().at("doc").batch == expected,
            who_s + " annotations differ from demo analysis");
  }
  return std::to_string(kEdits) + " edits, 5 sessions, " + std::to_string(head.size()) + " chars, " +
         std::to_string(expected.size()) + " annotations";
}

// ---------------------------------------------------------------------------

class Process {
 public:
  Process(const std::vector<std::string>& args, const fs::path& cwd) {
    pid_ = ::fork();
    if (pid_ == 0) {
      if (::chdir(cwd.c_str()) != 0) ::_exit(127);
      std::vector<char*> argv;
      for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
      argv.push_back(nullptr);
      ::execv(argv[0], argv.data());
      ::_exit(127);
    }
    require(pid_ > 0, "fork failed");
  }
  ~Process() {
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
  }
  /// Exit status, or -1 when killed by a signal.
  int wait() {
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  void terminate() const { ::kill(pid_, SIGTERM); }
  [[nodiscard]] bool running() const { return pid_ > 0 && ::waitpid(pid_, nullptr, WNOHANG) == 0; }

 private:
  pid_t pid_ = -1;
};

std::string fetch_title(const Process& server) {
  httplib::Client client("localhost", 8080);
  client.set_connection_timeout(1);
  for (int attempt = 0; attempt < 200; ++attempt) {
    if (auto res = client.Get("/"); res && res->status == 200) {
      std::smatch m;
      static const std::regex title_re("<title>([^<]*)</title>");
      require(std::regex_search(res->body, m, title_re), "page has no title");
      return m[1];
    }
    require(server.running(), "server exited early");
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  throw Failure{"nothing answered on localhost:8080"};
}

std::string defaults_end_to_end() {
  const auto conf = config::resolve({}, config::reference_config());
  require(conf.binding_interface == "localhost" && conf.binding_port == 8080, "reference defaults");

  const fs::path work = fs::temp_directory_path() / ("cobra-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string cobra = COBRA_BINARY;

  require(Process({cobra, "new", "talk"}, work).wait() == 0, "cobra new failed");
  require(fs::exists(work / "talk" / "slides.html"), "cobra new wrote no slides");
  {
    Process server({cobra, "run", "talk"}, work);
    const std::string title = fetch_title(server);
    require(title == "Cobra Presentation", "title is '" + title + "'");
    server.terminate();
    require(server.wait() == 0, "run did not exit cleanly");
  }

  fs::remove(work / "talk" / "cobra.conf");
  {
    Process server({cobra, "run", "talk"}, work);
    const std::string title = fetch_title(server);
    require(title == "Cobra Presentation", "title without cobra.conf is '" + title + "'");
    server.terminate();
    require(server.wait() == 0, "run without cobra.conf did not exit cleanly");
  }
  fs::remove_all(work);
  return "localhost:8080, title \"Cobra Presentation\"";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
      {"ot-tp1-compose-apply", ot_properties},
      {"five-slide-fixture", five_slide_fixture},
      {"fragment-forms", fragment_forms},
      {"snippet-projection", projection_scripts},
      {"wire-round-trip", wire_round_trips},
      {"five-session-convergence", five_session_simulation},
      {"defaults-new-run", defaults_end_to_end},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    try {
      const std::string detail = check();
      std::cout << "PASS " << name << ": " << detail << std::endl;
    } catch (const Failure& f) {
      ++failed;
      std::cout << "FAIL " << name << ": " << f.what << std::endl;
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "FAIL " << name << ": exception: " << e.what() << std::endl;
    }
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
