#include "scma/channel.hpp"

#include <cmath>

#include "scma/errors.hpp"

namespace scma {

std::string to_string(ChannelMode mode) {
    switch (mode) {
        case ChannelMode::awgn: return "awgn";
        case ChannelMode::downlink: return "downlink";
        case ChannelMode::uplink_rayleigh: return "uplink";
    }
    return "unknown";
}

ChannelMode channel_mode_from_string(const std::string& name) {
    if (name == "awgn") return ChannelMode::awgn;
    if (name == "downlink") return ChannelMode::downlink;
    if (name == "uplink" || name == "uplink_rayleigh") return ChannelMode::uplink_rayleigh;
    throw ParameterError("unknown channel mode '" + name + "'");
}

std::string to_string(SnrConvention convention) {
    return convention == SnrConvention::per_layer ? "per_layer" : "total";
}

SnrConvention snr_convention_from_string(const std::string& name) {
    if (name == "per_layer") return SnrConvention::per_layer;
    if (name == "total") return SnrConvention::total;
    throw ParameterError("unknown SNR convention '" + name + "'");
}

bool ChannelRealization::all_real() const {
    for (const auto& g : gains)
        if (g.imag() != 0.0) return false;
    return true;
}

ChannelRealization unit_channel(int num_layers, int num_resources) {
    return {ChannelMode::awgn, num_layers, num_resources,
            std::vector<Complex>(static_cast<std::size_t>(num_layers * num_resources), Complex(1.0, 0.0))};
}

ChannelRealization draw_channel(ChannelMode mode, int num_layers, int num_resources, Rng& rng) {
    auto ch = unit_channel(num_layers, num_resources);
    ch.mode = mode;
    if (mode == ChannelMode::awgn) return ch;
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    if (mode == ChannelMode::downlink) {
        std::vector<Complex> shared(static_cast<std::size_t>(num_resources));
        for (auto& g : shared) {
            const double re = gauss(rng);
            g = Complex(re, gauss(rng));
        }
        for (int j = 0; j < num_layers; ++j)
            for (int k = 0; k < num_resources; ++k)
                ch.gains[static_cast<std::size_t>(j * num_resources + k)] = shared[static_cast<std::size_t>(k)];
        return ch;
    }
    for (auto& g : ch.gains) {
        const double re = gauss(rng);
        g = Complex(re, gauss(rng));
    }
    return ch;
}

std::vector<Complex> draw_noise(int num_resources, double variance, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
    std::vector<Complex> n(static_cast<std::size_t>(num_resources));
    for (auto& v : n) {
        const double re = gauss(rng);
        v = Complex(re, gauss(rng));
    }
    return n;
}

std::vector<Complex> superpose(std::span<const ComplexPoint> codewords, const ChannelRealization& channel,
                               std::span<const Complex> noise) {
    const auto k = static_cast<std::size_t>(channel.num_resources);
    if (noise.size() != k) throw ParameterError("noise length must equal K");
    if (static_cast<int>(codewords.size()) != channel.num_layers)
        throw ParameterError("one codeword per channel layer required");
    std::vector<Complex> y(noise.begin(), noise.end());
    for (std::size_t j = 0; j < codewords.size(); ++j) {
        if (codewords[j].size() != k) throw ParameterError("codeword length must equal K");
        for (std::size_t r = 0; r < k; ++r)
            y[r] += channel.gain(static_cast<int>(j), static_cast<int>(r)) * codewords[j][r];
    }
    return y;
}

NoiseModel snr_to_noise_variance(double snr_db, const ScmaSystem& system, SnrConvention convention) {
    const double inv_snr = std::pow(10.0, -snr_db / 10.0);
    const double k = system.num_resources();
    const double layers = convention == SnrConvention::total ? system.num_layers() : 1.0;
    return {layers * inv_snr / k, convention};
}

}  // namespace scma
