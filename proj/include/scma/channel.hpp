#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "scma/codebook.hpp"

namespace scma {

using Rng = std::mt19937_64;

enum class ChannelMode { awgn, downlink, uplink_rayleigh };

enum class SnrConvention { per_layer, total };

std::string to_string(ChannelMode mode);
ChannelMode channel_mode_from_string(const std::string& name);
std::string to_string(SnrConvention convention);
SnrConvention snr_convention_from_string(const std::string& name);

/// Per-layer, per-resource complex gains h_{j,k}.
struct ChannelRealization {
    ChannelMode mode = ChannelMode::awgn;
    int num_layers = 0;
    int num_resources = 0;
    std::vector<Complex> gains;  // layer-major, J x K

    Complex gain(int layer, int resource) const {
        return gains[static_cast<std::size_t>(layer * num_resources + resource)];
    }
    bool all_real() const;
};

struct NoiseModel {
    double variance = 1.0;  // total complex variance per resource
    SnrConvention convention = SnrConvention::per_layer;
};

ChannelRealization unit_channel(int num_layers, int num_resources);

/// awgn: unit gains; downlink: one CN(0,1) draw per resource shared by all
/// layers; uplink_rayleigh: independent CN(0,1) per layer and resource.
ChannelRealization draw_channel(ChannelMode mode, int num_layers, int num_resources, Rng& rng);

/// Circularly symmetric Gaussian samples with total variance `variance`.
std::vector<Complex> draw_noise(int num_resources, double variance, Rng& rng);

/// y = sum_j diag(h_j) x_j + n.
std::vector<Complex> superpose(std::span<const ComplexPoint> codewords, const ChannelRealization& channel,
                               std::span<const Complex> noise);

/// per_layer: sigma^2 = 10^(-snr/10) / K; total: sigma^2 = J 10^(-snr/10) / K.
NoiseModel snr_to_noise_variance(double snr_db, const ScmaSystem& system, SnrConvention convention);

}  // namespace scma
