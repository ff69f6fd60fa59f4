#include <atomic>
#include <csignal>
#include <iostream>

#include "cobra/cli/commands.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::signal(SIGPIPE, SIG_IGN);
  return cobra::cli::main(argc, argv, std::cout, std::cerr, &g_stop);
}
