#include "scma/factor_graph.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "scma/errors.hpp"

namespace scma {

namespace {

constexpr int kMaxResources = 16;

void check_dimensions(int num_resources, int num_nonzero) {
    if (num_nonzero < 1 || num_nonzero >= num_resources || num_resources > kMaxResources) {
        throw ParameterError("factor graph requires 1 <= N < K <= 16, got K=" +
                             std::to_string(num_resources) + ", N=" + std::to_string(num_nonzero));
    }
}

// Lexicographic enumeration of N-subsets of {0..K-1}.
std::vector<std::vector<int>> subsets(int k, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) current[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(current);
        int pos = n - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == k - n + pos) --pos;
        if (pos < 0) break;
        ++current[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < n; ++i)
            current[static_cast<std::size_t>(i)] = current[static_cast<std::size_t>(i - 1)] + 1;
    }
    return out;
}

std::vector<std::uint8_t> indicator_of(const std::vector<int>& support, int k) {
    std::vector<std::uint8_t> ind(static_cast<std::size_t>(k), 0);
    for (int r : support) ind[static_cast<std::size_t>(r)] = 1;
    return ind;
}

}  // namespace

LayerSignature::LayerSignature(std::vector<std::uint8_t> indicator, int layer_index)
    : indicator_(std::move(indicator)), layer_index_(layer_index) {
    for (std::size_t k = 0; k < indicator_.size(); ++k) {
        if (indicator_[k] > 1) throw ParameterError("signature entries must be 0 or 1");
        if (indicator_[k] == 1) support_.push_back(static_cast<int>(k));
    }
    const int k = num_resources();
    const int n = num_nonzero();
    if (n < 1 || n >= k) {
        throw ParameterError("signature must have 1 <= N < K nonzero entries, got N=" +
                             std::to_string(n) + " of K=" + std::to_string(k));
    }
    if (layer_index_ < 0) throw ParameterError("layer index must be nonnegative");
}

FactorGraph::FactorGraph(std::vector<LayerSignature> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw ParameterError("factor graph needs at least one layer");
    k_ = columns_.front().num_resources();
    n_ = columns_.front().num_nonzero();
    check_dimensions(k_, n_);
    layers_at_.assign(static_cast<std::size_t>(k_), {});
    degrees_.assign(static_cast<std::size_t>(k_), 0);
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        const auto& col = columns_[j];
        if (col.num_resources() != k_ || col.num_nonzero() != n_)
            throw ParameterError("all layers must share K and N");
        for (std::size_t i = 0; i < j; ++i) {
            if (columns_[i] == col) throw ParameterError("factor graph columns must be distinct");
        }
        for (int r : col.support()) {
            layers_at_[static_cast<std::size_t>(r)].push_back(static_cast<int>(j));
            ++degrees_[static_cast<std::size_t>(r)];
        }
    }
}

int FactorGraph::max_degree() const { return *std::max_element(degrees_.begin(), degrees_.end()); }

int FactorGraph::min_degree() const { return *std::min_element(degrees_.begin(), degrees_.end()); }

std::vector<std::vector<int>> FactorGraph::matrix() const {
    std::vector<std::vector<int>> f(static_cast<std::size_t>(k_),
                                    std::vector<int>(columns_.size(), 0));
    for (int k = 0; k < k_; ++k)
        for (int j = 0; j < num_layers(); ++j) f[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = at(k, j);
    return f;
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t result = 1;
    for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

FactorGraph build_full_graph(int num_resources, int num_nonzero) {
    check_dimensions(num_resources, num_nonzero);
    std::vector<LayerSignature> columns;
    int j = 0;
    for (const auto& s : subsets(num_resources, num_nonzero))
        columns.emplace_back(indicator_of(s, num_resources), j++);
    return FactorGraph(std::move(columns));
}

namespace {

// Depth-first search (include before exclude, lexicographic column order) for
// J columns whose resource degrees all lie in {q, q+1}, q = floor(JN/K).
// Bounded; empty when no such set is found within the budget.
class BalancedSearch {
public:
    BalancedSearch(const std::vector<std::vector<int>>& all, int num_resources, int num_layers)
        : all_(all), degree_(static_cast<std::size_t>(num_resources), 0), taken_(all.size(), false),
          layers_(num_layers) {
        const int total = num_layers * static_cast<int>(all.front().size());
        q_ = total / num_resources;
        extra_ = total % num_resources;
    }

    std::optional<std::vector<bool>> run() {
        if (descend(0, 0, 0)) return taken_;
        return std::nullopt;
    }

private:
    bool descend(std::size_t c, int chosen, int at_top) {
        if (++nodes_ > kBudget) return false;
        if (chosen == layers_) return true;
        if (static_cast<int>(all_.size() - c) < layers_ - chosen) return false;
        // include column c
        bool fits = true;
        int top = at_top;
        for (int r : all_[c]) {
            const int d = degree_[static_cast<std::size_t>(r)] + 1;
            if (d > q_ + 1 || (d == q_ + 1 && ++top > extra_)) fits = false;
        }
        if (fits) {
            for (int r : all_[c]) ++degree_[static_cast<std::size_t>(r)];
            taken_[c] = true;
            if (descend(c + 1, chosen + 1, top)) return true;
            taken_[c] = false;
            for (int r : all_[c]) --degree_[static_cast<std::size_t>(r)];
        }
        return descend(c + 1, chosen, at_top);
    }

    static constexpr long kBudget = 2'000'000;
    const std::vector<std::vector<int>>& all_;
    std::vector<int> degree_;
    std::vector<bool> taken_;
    int layers_;
    int q_ = 0;
    int extra_ = 0;
    long nodes_ = 0;
};

std::optional<std::vector<bool>> balanced_selection(const std::vector<std::vector<int>>& all, int num_resources,
                                                    int num_layers) {
    return BalancedSearch(all, num_resources, num_layers).run();
}

}  // namespace

FactorGraph build_subgraph(int num_resources, int num_nonzero, int num_layers) {
    check_dimensions(num_resources, num_nonzero);
    const auto all = subsets(num_resources, num_nonzero);
    if (num_layers < 1 || num_layers > static_cast<int>(all.size())) {
        throw ParameterError("J must lie in [1, C(K,N)] = [1, " + std::to_string(all.size()) +
                             "], got " + std::to_string(num_layers));
    }

    std::vector<int> degree(static_cast<std::size_t>(num_resources), 0);
    std::vector<bool> taken(all.size(), false);
    for (int step = 0; step < num_layers; ++step) {
        // Key: resulting max degree, then load already on the chosen resources
        // (smaller keeps degrees level), then lexicographic position.
        std::size_t best = all.size();
        int best_max = 0;
        int best_load = 0;
        for (std::size_t c = 0; c < all.size(); ++c) {
            if (taken[c]) continue;
            int load = 0;
            int new_max = *std::max_element(degree.begin(), degree.end());
            for (int r : all[c]) {
                load += degree[static_cast<std::size_t>(r)];
                new_max = std::max(new_max, degree[static_cast<std::size_t>(r)] + 1);
            }
            if (best == all.size() || new_max < best_max ||
                (new_max == best_max && load < best_load)) {
                best = c;
                best_max = new_max;
                best_load = load;
            }
        }
        taken[best] = true;
        for (int r : all[best]) ++degree[static_cast<std::size_t>(r)];
    }

    const auto [lo, hi] = std::minmax_element(degree.begin(), degree.end());
    if (*hi - *lo > 1) {
        if (auto balanced = balanced_selection(all, num_resources, num_layers)) taken = std::move(*balanced);
    }

    std::vector<LayerSignature> columns;
    int j = 0;
    for (std::size_t c = 0; c < all.size(); ++c)
        if (taken[c]) columns.emplace_back(indicator_of(all[c], num_resources), j++);
    return FactorGraph(std::move(columns));
}

int overlap(const LayerSignature& a, const LayerSignature& b) {
    if (a.num_resources() != b.num_resources())
        throw ParameterError("overlap requires signatures over the same K");
    if (a == b) throw IdentityError("overlap is defined for distinct layers only");
    int l = 0;
    for (int k = 0; k < a.num_resources(); ++k)
        l += a.indicator()[static_cast<std::size_t>(k)] * b.indicator()[static_cast<std::size_t>(k)];
    return l;
}

MappingMatrix mapping_matrix(const LayerSignature& signature) {
    MappingMatrix v;
    v.rows = signature.num_resources();
    v.cols = signature.num_nonzero();
    v.entries.assign(static_cast<std::size_t>(v.rows * v.cols), 0);
    int n = 0;
    for (int r : signature.support()) v.entries[static_cast<std::size_t>(r * v.cols + n++)] = 1;
    return v;
}

}  // namespace scma
