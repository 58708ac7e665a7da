#include "scma/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "scma/errors.hpp"

namespace scma {

namespace {

constexpr std::int64_t kMaxJointHypotheses = std::int64_t{1} << 20;
constexpr double kSplitTolerance = 1e-12;

void normalize(Distribution& d) {
    const double s = std::accumulate(d.begin(), d.end(), 0.0);
    if (!(s > 0.0) || !std::isfinite(s)) {
        std::fill(d.begin(), d.end(), 1.0 / static_cast<double>(d.size()));
        return;
    }
    for (auto& v : d) v /= s;
}

void check_noise(double noise_var) {
    if (!(noise_var > 0.0)) throw ParameterError("noise variance must be positive");
}

void check_shapes(std::span<const Complex> y, const ScmaSystem& system, const ChannelRealization& channel) {
    if (static_cast<int>(y.size()) != system.num_resources())
        throw ParameterError("observation length must equal K");
    if (channel.num_layers != system.num_layers() || channel.num_resources != system.num_resources())
        throw ParameterError("channel shape does not match the system");
}

int argmax_lowest(const Distribution& d) {
    int best = 0;
    for (int m = 1; m < static_cast<int>(d.size()); ++m)
        if (d[static_cast<std::size_t>(m)] > d[static_cast<std::size_t>(best)]) best = m;
    return best;
}

// Distinct values of one codebook at one resource, merged within the
// projection tolerance; the first symbol seen represents each class.
ProjectionTable project(const Codebook& cb, int layer, int resource) {
    ProjectionTable t;
    t.layer = layer;
    t.value_of_symbol.resize(static_cast<std::size_t>(cb.size()));
    for (int m = 0; m < cb.size(); ++m) {
        const Complex v = cb.codeword(m)[static_cast<std::size_t>(resource)];
        auto it = std::find_if(t.values.begin(), t.values.end(),
                               [&](const Complex& r) { return std::abs(r - v) <= kProjectionTolerance; });
        if (it == t.values.end()) {
            t.values.push_back(v);
            t.value_of_symbol[static_cast<std::size_t>(m)] = static_cast<int>(t.values.size()) - 1;
        } else {
            t.value_of_symbol[static_cast<std::size_t>(m)] = static_cast<int>(it - t.values.begin());
        }
    }
    return t;
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

void FactorTables::index_edges() {
    edges_at_resource.assign(static_cast<std::size_t>(num_resources), {});
    edges_of_layer.assign(static_cast<std::size_t>(num_layers), {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
        edges_at_resource[static_cast<std::size_t>(edges[e].resource)].push_back(static_cast<int>(e));
        edges_of_layer[static_cast<std::size_t>(edges[e].layer)].push_back(static_cast<int>(e));
    }
}

DetectionResult decide(std::vector<Distribution> marginals, const ScmaSystem& system, int iterations) {
    DetectionResult r;
    r.iterations_run = iterations;
    for (std::size_t j = 0; j < marginals.size(); ++j) {
        const int m = argmax_lowest(marginals[j]);
        r.hard_symbols.push_back(m);
        r.bit_labels.push_back(system.codebook(static_cast<int>(j)).label(m));
    }
    r.marginals = std::move(marginals);
    return r;
}

MessagePassing::MessagePassing(FactorTables tables, std::vector<Complex> observation, double likelihood_scale,
                               double damping)
    : tables_(std::move(tables)), scale_(likelihood_scale), damping_(damping) {
    check_noise(scale_);
    if (!(damping_ >= 0.0 && damping_ < 1.0)) throw ParameterError("damping must lie in [0, 1)");
    if (static_cast<int>(observation.size()) != tables_.num_resources)
        throw ParameterError("observation length must equal the number of resources");
    if (tables_.edges_at_resource.empty()) tables_.index_edges();
    for (const auto& e : tables_.edges) {
        const auto m = static_cast<std::size_t>(tables_.alphabet[static_cast<std::size_t>(e.layer)]);
        const Distribution uniform(m, 1.0 / static_cast<double>(m));
        state_.resource_to_layer.push_back(uniform);
        state_.layer_to_resource.push_back(uniform);
    }

    std::size_t widest = 0;
    for (int k = 0; k < tables_.num_resources; ++k) {
        const auto& ids = tables_.edges_at_resource[static_cast<std::size_t>(k)];
        std::vector<int> radix;
        std::size_t total = 1;
        for (int e : ids) {
            radix.push_back(static_cast<int>(tables_.edges[static_cast<std::size_t>(e)].values.size()));
            total *= static_cast<std::size_t>(radix.back());
        }
        widest = std::max(widest, ids.size());

        std::vector<double> like;
        if (!ids.empty()) {
            like.resize(total);
            std::vector<int> digit(ids.size(), 0);
            const Complex y = observation[static_cast<std::size_t>(k)];
            double min_dist = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < total; ++c) {
                Complex s(0.0, 0.0);
                for (std::size_t i = 0; i < ids.size(); ++i)
                    s += tables_.edges[static_cast<std::size_t>(ids[i])].values[static_cast<std::size_t>(digit[i])];
                like[c] = std::norm(y - s);
                min_dist = std::min(min_dist, like[c]);
                for (std::size_t i = ids.size(); i-- > 0;) {
                    if (++digit[i] < radix[i]) break;
                    digit[i] = 0;
                }
            }
            // Shift by the best distance so the largest factor is exactly 1.
            for (auto& v : like) v = std::exp(-(v - min_dist) / scale_);
        }
        radix_.push_back(std::move(radix));
        likelihood_.push_back(std::move(like));
    }
    mass_.resize(widest);
    out_.resize(widest);
}

void MessagePassing::update_resource(int resource) {
    const auto& edge_ids = tables_.edges_at_resource[static_cast<std::size_t>(resource)];
    const std::size_t d = edge_ids.size();
    if (d == 0) return;
    const auto& radix = radix_[static_cast<std::size_t>(resource)];
    const auto& like = likelihood_[static_cast<std::size_t>(resource)];

    // Incoming mass aggregated per distinct value.
    for (std::size_t i = 0; i < d; ++i) {
        const auto& e = tables_.edges[static_cast<std::size_t>(edge_ids[i])];
        const auto& in = state_.layer_to_resource[static_cast<std::size_t>(edge_ids[i])];
        mass_[i].assign(static_cast<std::size_t>(radix[i]), 0.0);
        for (std::size_t m = 0; m < in.size(); ++m) mass_[i][static_cast<std::size_t>(e.value_of_symbol[m])] += in[m];
        out_[i].assign(static_cast<std::size_t>(radix[i]), 0.0);
    }

    auto& digit = digit_;
    digit.assign(d, 0);
    for (std::size_t c = 0; c < like.size(); ++c) {
        for (std::size_t i = 0; i < d; ++i) {
            double w = like[c];
            for (std::size_t o = 0; o < d; ++o)
                if (o != i) w *= mass_[o][static_cast<std::size_t>(digit[o])];
            out_[i][static_cast<std::size_t>(digit[i])] += w;
        }
        for (std::size_t i = d; i-- > 0;) {
            if (++digit[i] < radix[i]) break;
            digit[i] = 0;
        }
    }

    for (std::size_t i = 0; i < d; ++i) {
        const auto& e = tables_.edges[static_cast<std::size_t>(edge_ids[i])];
        auto& msg = state_.resource_to_layer[static_cast<std::size_t>(edge_ids[i])];
        auto& fresh = fresh_;
        fresh.resize(msg.size());
        for (std::size_t m = 0; m < fresh.size(); ++m) fresh[m] = out_[i][static_cast<std::size_t>(e.value_of_symbol[m])];
        normalize(fresh);
        if (damping_ > 0.0)
            for (std::size_t m = 0; m < fresh.size(); ++m) fresh[m] = (1.0 - damping_) * fresh[m] + damping_ * msg[m];
        msg.swap(fresh);
    }
}

void MessagePassing::update_layer(int layer) {
    const auto& edge_ids = tables_.edges_of_layer[static_cast<std::size_t>(layer)];
    for (int target : edge_ids) {
        auto& msg = state_.layer_to_resource[static_cast<std::size_t>(target)];
        std::fill(msg.begin(), msg.end(), 1.0);
        for (int source : edge_ids) {
            if (source == target) continue;
            const auto& in = state_.resource_to_layer[static_cast<std::size_t>(source)];
            for (std::size_t m = 0; m < msg.size(); ++m) msg[m] *= in[m];
        }
        normalize(msg);
    }
}

void MessagePassing::iterate() {
    for (int k = 0; k < tables_.num_resources; ++k) update_resource(k);
    for (int j = 0; j < tables_.num_layers; ++j) update_layer(j);
    ++state_.iteration;
}

void MessagePassing::run(int iterations) {
    if (iterations < 1) throw ParameterError("at least one iteration required");
    for (int i = 0; i < iterations; ++i) iterate();
}

std::vector<Distribution> MessagePassing::marginals() const {
    std::vector<Distribution> out;
    for (int j = 0; j < tables_.num_layers; ++j) {
        Distribution p(static_cast<std::size_t>(tables_.alphabet[static_cast<std::size_t>(j)]), 1.0);
        for (int e : tables_.edges_of_layer[static_cast<std::size_t>(j)]) {
            const auto& in = state_.resource_to_layer[static_cast<std::size_t>(e)];
            for (std::size_t m = 0; m < p.size(); ++m) p[m] *= in[m];
        }
        normalize(p);
        out.push_back(std::move(p));
    }
    return out;
}

std::int64_t MessagePassing::combinations_per_iteration() const {
    std::int64_t total = 0;
    for (const auto& like : likelihood_) total += static_cast<std::int64_t>(like.size());
    return total;
}

FactorTables build_tables(const ScmaSystem& system, const ChannelRealization& channel, bool collapse) {
    FactorTables t;
    t.num_layers = system.num_layers();
    t.num_resources = system.num_resources();
    t.alphabet.assign(static_cast<std::size_t>(t.num_layers), system.alphabet_size());
    for (int k = 0; k < t.num_resources; ++k) {
        for (int j : system.graph().layers_at(k)) {
            const Complex h = channel.gain(j, k);
            EdgeTable e;
            e.layer = j;
            e.resource = k;
            if (collapse) {
                auto proj = project(system.codebook(j), j, k);
                for (auto& v : proj.values) v *= h;
                e.values = std::move(proj.values);
                e.value_of_symbol = std::move(proj.value_of_symbol);
            } else {
                const auto& cb = system.codebook(j);
                for (int m = 0; m < cb.size(); ++m) {
                    e.values.push_back(h * cb.codeword(m)[static_cast<std::size_t>(k)]);
                    e.value_of_symbol.push_back(m);
                }
            }
            t.edges.push_back(std::move(e));
        }
    }
    t.index_edges();
    return t;
}

namespace {

DetectionResult run_mpa(std::span<const Complex> y, const ScmaSystem& system, const ChannelRealization& channel,
                        double noise_var, const MpaOptions& options, bool collapse) {
    check_noise(noise_var);
    check_shapes(y, system, channel);
    if (options.max_iter < 1) throw ParameterError("max_iter must be >= 1");
    MessagePassing mp(build_tables(system, channel, collapse), std::vector<Complex>(y.begin(), y.end()), noise_var,
                      options.damping);
    mp.run(options.max_iter);
    return decide(mp.marginals(), system, options.max_iter);
}

}  // namespace

DetectionResult mpa_detect(std::span<const Complex> y, const ScmaSystem& system, const ChannelRealization& channel,
                           double noise_var, const MpaOptions& options) {
    return run_mpa(y, system, channel, noise_var, options, false);
}

DetectionResult mpa_detect_collapsed(std::span<const Complex> y, const ScmaSystem& system,
                                     const ChannelRealization& channel, double noise_var,
                                     const MpaOptions& options) {
    return run_mpa(y, system, channel, noise_var, options, true);
}

DetectionResult map_joint_oracle(std::span<const Complex> y, const ScmaSystem& system,
                                 const ChannelRealization& channel, double noise_var) {
    check_noise(noise_var);
    check_shapes(y, system, channel);
    const int m = system.alphabet_size();
    const int layers = system.num_layers();
    const int k_res = system.num_resources();
    std::int64_t total = 1;
    for (int j = 0; j < layers; ++j) {
        total *= m;
        if (total > kMaxJointHypotheses)
            throw CapacityError("joint enumeration of M^J hypotheses exceeds 2^20");
    }

    // contribution[j][s][k] = h_{j,k} x_{j,k}(s)
    std::vector<std::vector<ComplexPoint>> contribution(static_cast<std::size_t>(layers));
    for (int j = 0; j < layers; ++j) {
        for (int s = 0; s < m; ++s) {
            ComplexPoint c(static_cast<std::size_t>(k_res));
            for (int k = 0; k < k_res; ++k)
                c[static_cast<std::size_t>(k)] = channel.gain(j, k) * system.codebook(j).codeword(s)[static_cast<std::size_t>(k)];
            contribution[static_cast<std::size_t>(j)].push_back(std::move(c));
        }
    }

    std::vector<double> dist(static_cast<std::size_t>(total));
    std::vector<int> digit(static_cast<std::size_t>(layers), 0);
    ComplexPoint sum(static_cast<std::size_t>(k_res));
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::int64_t c = 0; c < total; ++c) {
        std::fill(sum.begin(), sum.end(), Complex(0.0, 0.0));
        for (int j = 0; j < layers; ++j) {
            const auto& x = contribution[static_cast<std::size_t>(j)][static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])];
            for (int k = 0; k < k_res; ++k) sum[static_cast<std::size_t>(k)] += x[static_cast<std::size_t>(k)];
        }
        double d2 = 0.0;
        for (int k = 0; k < k_res; ++k) d2 += std::norm(y[static_cast<std::size_t>(k)] - sum[static_cast<std::size_t>(k)]);
        dist[static_cast<std::size_t>(c)] = d2;
        min_dist = std::min(min_dist, d2);
        for (int j = layers; j-- > 0;) {
            if (++digit[static_cast<std::size_t>(j)] < m) break;
            digit[static_cast<std::size_t>(j)] = 0;
        }
    }

    std::vector<Distribution> marg(static_cast<std::size_t>(layers), Distribution(static_cast<std::size_t>(m), 0.0));
    std::fill(digit.begin(), digit.end(), 0);
    for (std::int64_t c = 0; c < total; ++c) {
        const double w = std::exp(-(dist[static_cast<std::size_t>(c)] - min_dist) / noise_var);
        for (int j = 0; j < layers; ++j) marg[static_cast<std::size_t>(j)][static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])] += w;
        for (int j = layers; j-- > 0;) {
            if (++digit[static_cast<std::size_t>(j)] < m) break;
            digit[static_cast<std::size_t>(j)] = 0;
        }
    }
    for (auto& p : marg) normalize(p);
    return decide(std::move(marg), system, 1);
}

bool split_applicable(const ScmaSystem& system) {
    const auto& shuffle = system.mother().shuffle();
    if (!shuffle) return false;
    for (const auto& op : system.operators())
        for (const auto& ph : op.phases)
            if (std::abs(ph.imag()) > kSplitTolerance || std::abs(std::abs(ph.real()) - 1.0) > kSplitTolerance)
                return false;
    const int mv = shuffle->imag_size;
    for (int j = 0; j < system.num_layers(); ++j) {
        const auto& cb = system.codebook(j);
        for (int k : cb.support().support()) {
            const auto kk = static_cast<std::size_t>(k);
            for (int s = 0; s < cb.size(); ++s) {
                const int p = s / mv;
                const int q = s % mv;
                if (std::abs(cb.codeword(s)[kk].real() - cb.codeword(p * mv)[kk].real()) > kSplitTolerance ||
                    std::abs(cb.codeword(s)[kk].imag() - cb.codeword(q)[kk].imag()) > kSplitTolerance)
                    return false;
            }
        }
    }
    return true;
}

DetectionResult split_detect(std::span<const Complex> y, const ScmaSystem& system, const ChannelRealization& channel,
                             double noise_var, int max_iter) {
    check_noise(noise_var);
    check_shapes(y, system, channel);
    if (!channel.all_real()) throw ModeError("split detection requires real-valued channel gains");
    if (!split_applicable(system))
        throw ModeError("split detection requires a real/imaginary separable system with +-1 phases");
    if (max_iter < 1) throw ParameterError("max_iter must be >= 1");

    const int mu = system.mother().shuffle()->real_size;
    const int mv = system.mother().shuffle()->imag_size;

    // Real axis: symbol p contributes h * Re(x(p, 0)); imaginary axis: h * Im(x(0, q)).
    FactorTables re;
    FactorTables im;
    for (FactorTables* t : {&re, &im}) {
        t->num_layers = system.num_layers();
        t->num_resources = system.num_resources();
    }
    re.alphabet.assign(static_cast<std::size_t>(re.num_layers), mu);
    im.alphabet.assign(static_cast<std::size_t>(im.num_layers), mv);
    for (int k = 0; k < system.num_resources(); ++k) {
        const auto kk = static_cast<std::size_t>(k);
        for (int j : system.graph().layers_at(k)) {
            const double h = channel.gain(j, k).real();
            const auto& cb = system.codebook(j);
            EdgeTable er{j, k, {}, {}};
            for (int p = 0; p < mu; ++p) {
                er.values.emplace_back(h * cb.codeword(p * mv)[kk].real(), 0.0);
                er.value_of_symbol.push_back(p);
            }
            EdgeTable ei{j, k, {}, {}};
            for (int q = 0; q < mv; ++q) {
                ei.values.emplace_back(h * cb.codeword(q)[kk].imag(), 0.0);
                ei.value_of_symbol.push_back(q);
            }
            re.edges.push_back(std::move(er));
            im.edges.push_back(std::move(ei));
        }
    }
    re.index_edges();
    im.index_edges();

    std::vector<Complex> y_re;
    std::vector<Complex> y_im;
    for (const auto& v : y) {
        y_re.emplace_back(v.real(), 0.0);
        y_im.emplace_back(v.imag(), 0.0);
    }
    // Each axis sees noise of variance noise_var / 2; exp(-r^2 / (2 * noise_var / 2))
    // is the same likelihood scale as the complex detector.
    MessagePassing mp_re(std::move(re), std::move(y_re), noise_var);
    MessagePassing mp_im(std::move(im), std::move(y_im), noise_var);
    mp_re.run(max_iter);
    mp_im.run(max_iter);
    const auto a = mp_re.marginals();
    const auto b = mp_im.marginals();

    std::vector<Distribution> marg;
    for (int j = 0; j < system.num_layers(); ++j) {
        Distribution p(static_cast<std::size_t>(mu * mv));
        for (int u = 0; u < mu; ++u)
            for (int v = 0; v < mv; ++v)
                p[static_cast<std::size_t>(u * mv + v)] =
                    a[static_cast<std::size_t>(j)][static_cast<std::size_t>(u)] * b[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)];
        normalize(p);
        marg.push_back(std::move(p));
    }
    return decide(std::move(marg), system, max_iter);
}

std::vector<std::vector<ProjectionTable>> collapse_projections(const ScmaSystem& system) {
    std::vector<std::vector<ProjectionTable>> out(static_cast<std::size_t>(system.num_resources()));
    for (int k = 0; k < system.num_resources(); ++k)
        for (int j : system.graph().layers_at(k)) out[static_cast<std::size_t>(k)].push_back(project(system.codebook(j), j, k));
    return out;
}

std::vector<ResourceComplexity> complexity_report(const ScmaSystem& system) {
    const auto tables = collapse_projections(system);
    const bool split = split_applicable(system);
    std::vector<ResourceComplexity> out;
    for (int k = 0; k < system.num_resources(); ++k) {
        const int d = system.graph().degrees()[static_cast<std::size_t>(k)];
        ResourceComplexity rc;
        rc.plain = ipow(system.alphabet_size(), d);
        rc.collapsed = 1;
        for (const auto& t : tables[static_cast<std::size_t>(k)]) rc.collapsed *= static_cast<std::int64_t>(t.values.size());
        if (split) {
            rc.split_real = ipow(system.mother().shuffle()->real_size, d);
            rc.split_imag = ipow(system.mother().shuffle()->imag_size, d);
        }
        out.push_back(rc);
    }
    return out;
}

}  // namespace scma
