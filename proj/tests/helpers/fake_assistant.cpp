// Test double for an external assistant. Modes: `demo <language>` answers
// with demo_analyze, `crash` exits on the first request, `hang` never
// answers, `garbage` answers with a line that is not JSON.
#include <iostream>
#include <string>

#include <json.hpp>

#include "cobra/assist/demo.hpp"

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "demo";
  const std::string language = argc > 2 ? argv[2] : "demo";
  const auto* syntax = cobra::snippets::find_language(language);
  if (syntax == nullptr) return 2;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (mode == "crash") return 3;
    if (mode == "hang") continue;
    if (mode == "garbage") {
      std::cout << "not json" << std::endl;
      continue;
    }
    const auto req = nlohmann::json::parse(line);
    nlohmann::json anns = nlohmann::json::array();
    const auto text = cobra::from_utf8(req.at("text").get<std::string>());
    for (const auto& a : cobra::assist::demo_analyze(text, *syntax)) {
      anns.push_back({{"start", a.range.begin},
                      {"end", a.range.end},
                      {"kind", std::string(cobra::sync::to_string(a.kind))},
                      {"class", a.class_name},
                      {"message", a.message}});
    }
    std::cout << nlohmann::json{{"id", req.at("id")}, {"annotations", anns}}.dump() << std::endl;
  }
  return 0;
}
