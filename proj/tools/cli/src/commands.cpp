#include "cobra/cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cobra/assist/assistant.hpp"
#include "cobra/assist/demo.hpp"
#include "cobra/config/watcher.hpp"
#include "cobra/server/http.hpp"
#include "cobra/server/hub.hpp"
#include "cobra/server/presentation.hpp"
#include "cobra/slides/html.hpp"
#include "cobra/snippets/markers.hpp"

namespace cobra::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kConfigName = "cobra.conf";

std::string starter_conf() {
  return R"(# Presentation settings. Everything left out here uses the built-in
# defaults, so most presentations never need to change this file.

# title = "Cobra Presentation"

# Language of code blocks that do not name one: isabelle, scala, haskell
# or demo. Empty means plain text.
# language = ""

# binding {
#   interface = "localhost"   # use "0.0.0.0" to let the audience connect
#   port = 8080
# }

# reveal.transition = "slide"
# show.infos = true
# show.warnings = true

# Environment for language assistants; keys are uppercased.
# env.isabelle_home = "/opt/Isabelle"
)";
}

std::string starter_slides(const std::string& name) {
  return "<section>\n  <h1>" + slides::escape_html(name) +
         "</h1>\n  <p>Press the right arrow key to continue.</p>\n</section>\n"
         "<section>\n  <h2>Live Code</h2>\n  <code class=\"demo\">\n"
         "    // Edit me: the analysis updates as you type.\n"
         "    val answer = /*(*/???/*|6 * 7)*/\n"
         "    fun twice(x) = [x, x]\n"
         "  </code>\n</section>\n";
}

bool valid_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  for (char c : name) {
    if (c == '/' || c == '\\' || c == '\0') return false;
  }
  return true;
}

config::Settings apply_overrides(config::Settings s, const RunOptions& o) {
  if (o.port) s.binding_port = *o.port;
  if (o.interface) s.binding_interface = *o.interface;
  return s;
}

std::string url(const std::string& interface, std::uint16_t port) {
  const std::string host = interface == "0.0.0.0" || interface == "::" ? "localhost" : interface;
  return "http://" + host + ":" + std::to_string(port) + "/";
}

}  // namespace

int cmd_new(const std::string& name, const fs::path& parent, std::ostream& out, std::ostream& err) {
  if (!valid_name(name)) {
    err << "error: '" << name << "' is not a valid directory name\n";
    return kUsageError;
  }
  const fs::path dir = parent / name;
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    err << "error: " << dir.string() << " already exists\n";
    return kRuntimeError;
  }
  if (!fs::create_directories(dir, ec) || ec) {
    err << "error: cannot create " << dir.string() << ": " << ec.message() << "\n";
    return kRuntimeError;
  }
  std::ofstream conf(dir / kConfigName);
  conf << starter_conf();
  std::ofstream deck(dir / "slides.html");
  deck << starter_slides(name);
  if (!conf || !deck) {
    err << "error: cannot write files in " << dir.string() << "\n";
    return kRuntimeError;
  }
  out << "created " << (dir / kConfigName).string() << "\n"
      << "created " << (dir / "slides.html").string() << "\n"
      << "run it with: cobra " << dir.string() << "\n";
  return kOk;
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  const fs::path conf_path = options.dir / kConfigName;
  config::Settings settings;
  std::vector<std::string> warnings;
  try {
    settings = apply_overrides(config::load_settings(conf_path.string(), &warnings), options);
  } catch (const std::exception& e) {
    err << "error: " << conf_path.string() << ": " << e.what() << "\n";
    return kUsageError;
  }

  server::Presentation presentation;
  try {
    presentation = server::load_presentation(options.dir, settings);
  } catch (const server::MissingSlides& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const slides::ParseError& e) {
    err << "error: slides.html:" << e.what() << "\n";
    return kRuntimeError;
  } catch (const slides::StructureError& e) {
    err << "error: slides.html:" << e.line() << ":" << e.col() << ": " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }

  server::Hub::Options hub_options;
  for (const char* name : {"PATH"}) {
    if (const char* v = std::getenv(name)) hub_options.env[name] = v;
  }
  for (const auto& [k, v] : settings.env) {
    std::string key = k;
    for (char& c : key) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    hub_options.env[key] = v;
  }
  const fs::path dir = presentation.dir;
  slides::Deck deck = presentation.deck;
  std::vector<slides::CodeRef> refs = presentation.refs;
  auto hub = std::make_unique<server::Hub>(std::move(presentation.store), settings, hub_options, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  // The page is rendered per request so setting changes show on reload.
  server::Hub* hub_ptr = hub.get();
  auto page = [hub_ptr, deck, refs] {
    const auto current = hub_ptr->settings();
    return hub_ptr->with_store([&](const server::DocumentStore& store) {
      return slides::render_boilerplate(deck, current, refs, server::boot_documents(store));
    });
  };

  server::HttpServer http(*hub, dir, page);
  try {
    http.listen(settings.binding_interface, settings.binding_port);
  } catch (const server::BindError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  out << "serving " << dir.string() << " at " << url(settings.binding_interface, http.port()) << "\n";
  out.flush();
  if (options.on_ready) options.on_ready(http.port());

  std::unique_ptr<config::ConfigWatcher> watcher;
  if (options.watch) {
    watcher = std::make_unique<config::ConfigWatcher>(
        conf_path, config::load_settings(conf_path.string()),
        [&](const config::Settings& next, const std::vector<config::SettingChange>&) {
          const auto before = hub->settings();
          const auto effective = apply_overrides(next, options);
          for (const auto& c : hub->update_settings(effective)) {
            out << "setting " << c.path << " = " << c.new_value << (c.hot ? "" : " (restart to apply)") << "\n";
          }
          if (effective.binding_port != before.binding_port) {
            try {
              http.rebind(before.binding_interface, effective.binding_port);
              out << "now serving at " << url(before.binding_interface, http.port()) << "\n";
            } catch (const server::BindError& e) {
              err << "error: " << e.what() << "; still serving on port " << http.port() << "\n";
            }
          }
          out.flush();
        },
        [&](const std::string& message) { err << "warning: " << message << "\n"; });
    watcher->start();
  }

  while (options.stop == nullptr || !options.stop->load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  if (watcher) watcher->stop();
  http.stop();
  return kOk;
}

int cmd_configure(const std::string& language, const fs::path& config_dir, std::ostream& out,
                  std::ostream& err) {
  config::Settings settings;
  try {
    settings = config::load_settings((config_dir / kConfigName).string());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  assist::AssistantSpec spec;
  try {
    spec = assist::assistant_spec(language, settings);
  } catch (const assist::UnknownLanguage& e) {
    err << "error: " << e.what() << "; known languages:";
    for (const auto& id : snippets::language_ids()) err << " " << id;
    err << "\n";
    return kUsageError;
  }
  const auto report = assist::check_prereqs(spec, spec.env);
  out << language << ": ";
  if (spec.mode == assist::AssistantSpec::Mode::builtin_demo) {
    out << "built-in demo analysis, nothing to install\n";
  } else {
    out << "external assistant `" << spec.command.front() << "`\n";
  }
  for (const auto& item : report.items) {
    out << "  " << (item.ok ? "ok      " : "missing ") << item.name << "\n";
    if (!item.ok) out << "          " << item.advice << "\n";
  }
  if (!report.ok) out << "without these the demo analysis is used instead\n";
  return report.ok ? kOk : kRuntimeError;
}

int cmd_assist(const std::string& language, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto* syntax = snippets::find_language(language);
  if (syntax == nullptr) {
    err << "error: unknown language '" << language << "'\n";
    return kUsageError;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json reply;
    try {
      const auto req = nlohmann::json::parse(line);
      const Text text = from_utf8(req.at("text").get<std::string>());
      nlohmann::json anns = nlohmann::json::array();
      for (const auto& a : assist::demo_analyze(text, *syntax)) {
        anns.push_back({{"start", a.range.begin}, {"end", a.range.end},
                        {"kind", std::string(sync::to_string(a.kind))}, {"class", a.class_name},
                        {"message", a.message}});
      }
      reply = {{"id", req.at("id")}, {"annotations", anns}};
    } catch (const std::exception& e) {
      err << "error: bad request: " << e.what() << "\n";
      return kRuntimeError;
    }
    out << reply.dump() << "\n";
    out.flush();
  }
  return kOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
         const std::atomic<bool>* stop) {
  std::vector<std::string> args(argv + 1, argv + argc);
  static const std::vector<std::string> kCommands = {"new", "run", "configure", "assist"};
  if (!args.empty() && args[0].rfind('-', 0) != 0 &&
      std::find(kCommands.begin(), kCommands.end(), args[0]) == kCommands.end()) {
    args.insert(args.begin(), "run");
  }

  CLI::App app{"Live code presentations", "cobra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cobra 0.1.0");

  std::string new_name;
  auto* new_cmd = app.add_subcommand("new", "Create a presentation directory");
  new_cmd->add_option("name", new_name, "Directory to create")->required();

  RunOptions run;
  std::string run_dir;
  std::uint16_t port = 0;
  std::string interface;
  bool no_watch = false;
  auto* run_cmd = app.add_subcommand("run", "Serve a presentation (also: cobra <dir>)");
  run_cmd->add_option("dir", run_dir, "Presentation directory")->required();
  auto* port_opt = run_cmd->add_option("--port", port, "Port, overriding binding.port");
  auto* iface_opt = run_cmd->add_option("--interface", interface, "Interface, overriding binding.interface");
  run_cmd->add_flag("--no-watch", no_watch, "Do not reload cobra.conf on changes");

  std::string language;
  auto* conf_cmd = app.add_subcommand("configure", "Check what a language's assistant needs");
  conf_cmd->add_option("language", language, "isabelle, scala, haskell or demo")->required();

  std::string assist_language;
  auto* assist_cmd = app.add_subcommand("assist", "Run the demo analysis as an external assistant");
  assist_cmd->add_option("language", assist_language, "Comment syntax to use")->required();

  std::vector<const char*> cargs{argv[0]};
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  if (new_cmd->parsed()) return cmd_new(new_name, fs::current_path(), out, err);
  if (conf_cmd->parsed()) return cmd_configure(language, fs::current_path(), out, err);
  if (assist_cmd->parsed()) return cmd_assist(assist_language, std::cin, out, err);
  run.dir = run_dir;
  if (port_opt->count() > 0) run.port = port;
  if (iface_opt->count() > 0) run.interface = interface;
  run.watch = !no_watch;
  run.stop = stop;
  return cmd_run(run, out, err);
}

}  // namespace cobra::cli
