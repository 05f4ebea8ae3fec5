#pragma once

#include <string>
#include <vector>

#include "qpv/rate_network.hpp"

namespace qpv {

/// Four-level donor/acceptor photocell: ground 0, donor excited 1, acceptor
/// levels alpha (upper) and beta (lower). Rates given as hbar*gamma in eV.
struct DonorAcceptorParams {
  double donor_gap_ev = 1.8;            ///< E_1 - E_0
  double donor_to_alpha_ev = 0.2;       ///< E_1 - E_alpha
  double beta_above_ground_ev = 0.2;    ///< E_beta - E_0
  double hbar_gamma_radiative_ev = 1.24e-6;  ///< 0 <-> 1
  double hbar_gamma_transfer_ev = 12e-3;     ///< alpha <-> 1
  double hbar_gamma_relax_ev = 24e-3;        ///< 0 <-> beta
  double gamma_load_per_s = 1e12;
  double chi = 0.0;
  double hot_temperature_k = 6000.0;
  double cold_temperature_k = 300.0;
};

/// Coupled-donor photocell: ground 0, dark state 1, bright state 2, acceptor
/// alpha/beta. The splitting and every rate here are modelling assumptions
/// (flagged in the returned system's `assumptions`).
struct CoupledDonorParams {
  double bright_gap_ev = 1.8;             ///< E_2 - E_0
  double splitting_ev = 0.05;             ///< E_2 - E_1
  double bright_to_alpha_ev = 0.2;        ///< E_2 - E_alpha
  double beta_above_ground_ev = 0.2;      ///< E_beta - E_0
  double hbar_gamma_radiative_ev = 1.24e-6;      ///< optical channel(s) to 0
  double hbar_gamma_phonon_ev = 24e-3;           ///< 1 <-> 2
  double hbar_gamma_transfer_bright_ev = 6e-3;   ///< alpha <-> 2
  double hbar_gamma_transfer_dark_ev = 6e-3;     ///< alpha <-> 1, 0 removes the channel
  double hbar_gamma_relax_ev = 24e-3;            ///< 0 <-> beta
  double gamma_load_per_s = 1e12;
  double chi = 0.0;
  double cold_temperature_k = 300.0;
};

/// Both donor transitions in contact with hot and cold baths simultaneously;
/// 0 <-> 1 sees the hot bath occupation directly.
LevelSystem preset_model_a(const DonorAcceptorParams& params = {});

/// Cell sits in the cold bath only; the hot bath enters as a pump 0 -> 1.
LevelSystem preset_model_b(double pump_rate, const DonorAcceptorParams& params = {});

/// coupled: only the bright state 2 is optically active (pump and radiative
/// decay on 0 <-> 2), phonon relaxation 2 <-> 1, transfer to alpha from both.
/// uncoupled: two independent donors, each pumped at pump_rate/2 with its own
/// radiative decay and transfer, no 1 <-> 2 link.
LevelSystem preset_model_c(double pump_rate, bool coupled, const CoupledDonorParams& params = {});

struct PresetInfo {
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& preset_catalog();

/// Preset by catalog name at its default parameters. Throws DomainError for
/// unknown names.
LevelSystem make_preset(const std::string& name, double pump_rate, double gamma_load);

bool is_preset_name(const std::string& name);

}  // namespace qpv
