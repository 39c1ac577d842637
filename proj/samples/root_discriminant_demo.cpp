// Compares a few root-discriminant bounds against the shipped GRH table.
//
//   root_discriminant_demo ["5^5/4 * 6^4/5" ...]

#include <iostream>
#include <string>
#include <vector>

#include <semistable/factored_real.hpp>
#include <semistable/odlyzko.hpp>

using namespace semistable;

int main(int argc, char** argv) {
  std::vector<std::string> inputs(argv + 1, argv + argc);
  if (inputs.empty()) inputs = {"5^5/4 * 6^4/5", "3^3/2 * 10^2/3", "3^4/3 * 10^2/3"};
  try {
    const auto table = OdlyzkoTable::load_file(std::string(SEMISTABLE_DATA_DIR) + "/odlyzko_grh.csv");
    for (const auto& s : inputs) {
      const FactoredReal delta = parse_factored(s);
      const auto iv = decimal_interval(delta, Rational(1, 1000000));
      std::cout << to_grouped_string(delta) << " in " << iv.to_string() << ": degree "
                << table.max_degree_below(delta).to_string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
