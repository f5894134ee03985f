#ifndef BINRATIO_PRESETS_HPP
#define BINRATIO_PRESETS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "binratio/runner.hpp"

namespace binratio {

/// Names of the built-in sweeps, fig1a .. fig4e.
///
/// figN selects the regime and fixed sizes:
///   fig1  Collapse  n = 2e5,   m = 2e9
///   fig2  CaseI     n = 3.8e6, m = 1.1e9
///   fig3  CaseII    n = 1e6,   m = 1e6 (alpha = m/n at every point)
///   fig4  CaseIII   n = 1.1e9, m = 3.8e6, fixed s = 16
/// and the letter the varied parameter: a = p, b = s, c = r, d = m, e = n.
/// Fixed exponents are 15 and fixed p is 0.5 unless stated.
inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (char fig : {'1', '2', '3', '4'})
    for (char panel : {'a', 'b', 'c', 'd', 'e'}) names.push_back(std::string("fig") + fig + panel);
  return names;
}

inline SweepSpec preset(std::string_view name) {
  if (name.size() != 5 || name.substr(0, 3) != "fig" || name[3] < '1' || name[3] > '4' || name[4] < 'a' ||
      name[4] > 'e')
    throw ParameterError("unknown preset '" + std::string(name) + "'");

  SweepSpec spec;
  spec.name = std::string(name);
  spec.direction = Direction::Auto;

  GridRange m_range, n_range;
  switch (name[3]) {
    case '1':
      spec.base = {200'000, 2'000'000'000, 0.5, 15.0, 15.0};
      spec.regime = Regime::collapse();
      m_range = {2.0e9, 2.001e9, 11};
      n_range = {2.0e5, 1.2e6, 11};
      break;
    case '2':
      spec.base = {3'800'000, 1'100'000'000, 0.5, 15.0, 15.0};
      spec.regime = Regime::case_i();
      m_range = {1.1e9, 1.101e9, 11};
      n_range = {3.8e6, 4.8e6, 11};
      break;
    case '3':
      spec.base = {1'000'000, 1'000'000, 0.5, 15.0, 15.0};
      spec.regime = Regime::case_ii(1.0);
      spec.alpha_tracks_ratio = true;
      m_range = {1.0e6, 2.0e6, 11};
      n_range = {1.0e6, 2.0e6, 11};
      break;
    case '4':
      spec.base = {1'100'000'000, 3'800'000, 0.5, 16.0, 15.0};
      spec.regime = Regime::case_iii();
      // Recorded as printed: descending and not bracketing the fixed m = 3.8e6.
      m_range = {2.8e6, 1.2e6, 11};
      n_range = {1.1e9, 1.101e9, 11};
      break;
  }

  switch (name[4]) {
    case 'a':
      spec.vary = VariedParam::P;
      // Endpoints 0 and 1 are outside the model; clip to [0.01, 0.99].
      spec.grid = GridRange{0.01, 0.99, 50};
      break;
    case 'b':
      spec.vary = VariedParam::S;
      spec.grid = GridRange{1.0, 30.0, 30};
      break;
    case 'c':
      spec.vary = VariedParam::R;
      spec.grid = GridRange{1.0, 30.0, 30};
      break;
    case 'd':
      spec.vary = VariedParam::M;
      spec.grid = m_range;
      if (name[3] == '4')
        spec.warnings.emplace_back(
            "fig4d: m range 2.8e6 -> 1.2e6 is kept as printed (descending, excludes the fixed m = 3.8e6)");
      break;
    case 'e':
      spec.vary = VariedParam::N;
      spec.grid = n_range;
      break;
  }
  return spec;
}

}  // namespace binratio

#endif  // BINRATIO_PRESETS_HPP
