#include "qpv/presets.hpp"

#include "qpv/constants.hpp"
#include "qpv/errors.hpp"

namespace qpv {
namespace {

constexpr const char* kPumpSignAssumption =
    "pump drives population ground->excited: dP_lower += W(P_upper - P_lower), dP_upper += W(P_lower - P_upper)";

LevelSystem donor_acceptor_skeleton(const DonorAcceptorParams& p) {
  LevelSystem s;
  const double e1 = p.donor_gap_ev;
  s.levels = {
      {"0", 0.0},
      {"1", e1},
      {"alpha", e1 - p.donor_to_alpha_ev},
      {"beta", p.beta_above_ground_ev},
  };
  s.baths = {{"cold", p.cold_temperature_k}};
  s.transitions = {
      {"0", "1", rate_from_hbar_gamma(p.hbar_gamma_radiative_ev), "cold"},
      {"alpha", "1", rate_from_hbar_gamma(p.hbar_gamma_transfer_ev), "cold"},
      {"0", "beta", rate_from_hbar_gamma(p.hbar_gamma_relax_ev), "cold"},
  };
  s.extraction = {"alpha", "beta", p.gamma_load_per_s, p.chi, "0"};
  s.voltage_temperature_k = p.cold_temperature_k;
  s.assumptions.emplace_back("voltage temperature = cold bath temperature");
  return s;
}

}  // namespace

LevelSystem preset_model_a(const DonorAcceptorParams& p) {
  LevelSystem s = donor_acceptor_skeleton(p);
  s.baths.push_back({"hot", p.hot_temperature_k});
  s.transitions[0].bath = "hot";
  require_valid(s);
  return s;
}

LevelSystem preset_model_b(double pump_rate, const DonorAcceptorParams& p) {
  LevelSystem s = donor_acceptor_skeleton(p);
  s.pumps.push_back({"0", "1", pump_rate});
  s.assumptions.emplace_back(kPumpSignAssumption);
  require_valid(s);
  return s;
}

LevelSystem preset_model_c(double pump_rate, bool coupled, const CoupledDonorParams& p) {
  LevelSystem s;
  const double e2 = p.bright_gap_ev;
  s.levels = {
      {"0", 0.0},
      {"1", e2 - p.splitting_ev},
      {"2", e2},
      {"alpha", e2 - p.bright_to_alpha_ev},
      {"beta", p.beta_above_ground_ev},
  };
  s.baths = {{"cold", p.cold_temperature_k}};

  const double radiative = rate_from_hbar_gamma(p.hbar_gamma_radiative_ev);
  s.transitions.push_back({"0", "2", radiative, "cold"});
  if (coupled) {
    s.transitions.push_back({"1", "2", rate_from_hbar_gamma(p.hbar_gamma_phonon_ev), "cold"});
  } else {
    s.transitions.push_back({"0", "1", radiative, "cold"});
  }
  s.transitions.push_back({"alpha", "2", rate_from_hbar_gamma(p.hbar_gamma_transfer_bright_ev), "cold"});
  if (p.hbar_gamma_transfer_dark_ev > 0.0) {
    s.transitions.push_back({"alpha", "1", rate_from_hbar_gamma(p.hbar_gamma_transfer_dark_ev), "cold"});
  }
  s.transitions.push_back({"0", "beta", rate_from_hbar_gamma(p.hbar_gamma_relax_ev), "cold"});

  if (coupled) {
    s.pumps.push_back({"0", "2", pump_rate});
  } else {
    s.pumps.push_back({"0", "1", pump_rate / 2.0});
    s.pumps.push_back({"0", "2", pump_rate / 2.0});
  }
  s.extraction = {"alpha", "beta", p.gamma_load_per_s, p.chi, "0"};
  s.voltage_temperature_k = p.cold_temperature_k;

  s.assumptions.emplace_back("voltage temperature = cold bath temperature");
  s.assumptions.emplace_back(kPumpSignAssumption);
  if (coupled) {
    s.assumptions.emplace_back("coupled donors: bright state 2 carries pump and radiative decay; dark state 1 is optically inactive");
  } else {
    s.assumptions.emplace_back("uncoupled donors: pump split W/2 + W/2 over 0->1 and 0->2, no 1<->2 relaxation");
  }
  s.assumptions.emplace_back(
      "coupled-donor rates and splitting are assumed defaults (splitting 0.05 eV, phonon 24 meV, "
      "transfer 6 meV, relaxation 24 meV, radiative 1.24 ueV)");
  require_valid(s);
  return s;
}

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"model-a", "4-level donor/acceptor, donor in contact with hot (6000 K) and cold (300 K) baths"},
      {"model-b", "4-level donor/acceptor in the cold bath, hot bath replaced by a pump 0->1"},
      {"model-c-coupled", "5-level coupled donors (dark 1, bright 2) + acceptor, pump on the bright state"},
      {"model-c-uncoupled", "5-level independent donors + acceptor, pump split over both donor states"},
  };
  return catalog;
}

bool is_preset_name(const std::string& name) {
  for (const auto& p : preset_catalog()) {
    if (p.name == name) return true;
  }
  return false;
}

LevelSystem make_preset(const std::string& name, double pump_rate, double gamma_load) {
  DonorAcceptorParams da;
  da.gamma_load_per_s = gamma_load;
  CoupledDonorParams cd;
  cd.gamma_load_per_s = gamma_load;
  if (name == "model-a") return preset_model_a(da);
  if (name == "model-b") return preset_model_b(pump_rate, da);
  if (name == "model-c-coupled") return preset_model_c(pump_rate, true, cd);
  if (name == "model-c-uncoupled") return preset_model_c(pump_rate, false, cd);
  throw DomainError("unknown preset '" + name + "'");
}

}  // namespace qpv
