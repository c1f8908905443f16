// Regenerates the bundled models: make-models <dir>
#include <fstream>
#include <iostream>
#include <string>

#include "arctl/bundled.hpp"
#include "arctl/epistemic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make-models <dir>\n";
    return 2;
  }
  const std::string dir = argv[1];
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir + "/" + name, std::ios::binary) << text;
  };
  write("dining_cryptographers.mas.json", arctl::save_mas(arctl::build_crypto_model(3)));
  write("alice_bob.mas.json", arctl::save_mas(arctl::build_alice_bob_model()));
  write("printer.mts.json", arctl::save_model(arctl::build_printer_model()));
  return 0;
}
