// Writes the synthetic 51-municipality table of the bundled case study.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mcda/dataio.hpp"

namespace {

struct Column {
  const char* name;
  double lo;
  double hi;
  bool log_scale;
  int digits;
};

constexpr Column kColumns[] = {
    {"OH", 0.55, 0.92, false, 4},   {"AA", 0.02, 0.25, false, 4},   {"BS", 0.0, 4.5, false, 3},
    {"PSI", 0.0, 0.45, false, 4},   {"CP", 15.0, 2600.0, true, 1},  {"R", 900.0, 72000.0, true, 0},
    {"TPR", 0.03, 0.40, false, 4},  {"IWU", 150.0, 3200.0, true, 1}, {"LS", 0.0, 1.8, false, 3},
    {"OU", 0.0, 0.38, false, 4},
};

const char* const kNames[] = {
    "Aci Bonaccorsi", "Aci Catena", "Aci Sant'Antonio", "Acireale", "Adrano", "Belpasso", "Biancavilla", "Bronte",
    "Calatabiano", "Caltagirone", "Camporotondo Etneo", "Castel di Iudica", "Castiglione di Sicilia",
    "Fiumefreddo di Sicilia", "Giarre", "Grammichele", "Licodia Eubea", "Linguaglossa", "Maletto", "Maniace",
    "Mascali", "Mascalucia", "Mazzarrone", "Militello in Val di Catania", "Milo", "Mineo", "Mirabella Imbaccari",
    "Nicolosi", "Palagonia", "Paterno", "Pedara", "Piedimonte Etneo", "Raddusa", "Ragalna", "Ramacca", "Randazzo",
    "Riposto", "San Cono", "San Giovanni la Punta", "San Michele di Ganzaria", "San Pietro Clarenza",
    "Santa Maria di Licodia", "Santa Venerina", "Sant'Alfio", "Scordia", "Trecastagni", "Tremestieri Etneo",
    "Valverde", "Viagrande", "Vizzini", "Zafferana Etnea",
};

double rounded(double v, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::round(v * scale) / scale;
}

}  // namespace

int main(int argc, char** argv) {
  const unsigned long long seed = argc > 1 ? std::stoull(argv[1]) : 20150101ULL;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::printf("# synthetic data: generated by gen_synthetic_table with seed %llu, not the municipal dataset\n", seed);
  std::printf("id,name");
  for (const auto& c : kColumns) std::printf(",%s", c.name);
  std::printf("\n");
  int k = 0;
  for (const char* name : kNames) {
    std::printf("a%d,%s", ++k, name);
    for (const auto& c : kColumns) {
      const double u = unit(rng);
      const double v = c.log_scale ? std::exp(std::log(c.lo) + u * (std::log(c.hi) - std::log(c.lo)))
                                   : c.lo + u * (c.hi - c.lo);
      std::printf(",%s", mcda::format_number(rounded(v, c.digits)).c_str());
    }
    std::printf("\n");
  }
  return 0;
}
