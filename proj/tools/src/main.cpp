#include <CLI11.hpp>

#include <cstdio>

int main(int argc, char** argv) {
  CLI::App app{"entire functions with prescribed wandering domains, desk scale"};
  app.require_subcommand(0, 1);
  CLI11_PARSE(app, argc, argv);
  std::puts("no subcommand given; try --help");
  return 0;
}
