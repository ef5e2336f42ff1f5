#pragma once

#include "leobf/rates.hpp"

namespace leobf {

/// Maximum-ratio transmission: w parallel to the conjugate statistical
/// direction, per-satellite power split equally across served users.
BeamformerSet mrt_beamformers(const StatisticalCsi& csi, const SchedulingMask& mask, const VecD& p);

/// Zero forcing against co-scheduled users at the same satellite: the MRT
/// direction projected onto the null space of the other served responses.
/// Users whose projection vanishes get zero power (a warning is printed).
BeamformerSet zf_beamformers(const StatisticalCsi& csi, const SchedulingMask& mask, const VecD& p);

}  // namespace leobf
