// Command-line front end; subcommands wire the library into reproducible
// experiments with machine-readable reports.
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::cerr << "cli stub\n";
  return 0;
}
