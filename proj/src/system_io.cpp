#include "scma/system_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scma/errors.hpp"

namespace scma {

namespace {

using nlohmann::json;

json to_pair(const Complex& v) { return json::array({v.real(), v.imag()}); }

Complex from_pair(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParameterError("complex values must be [re, im] pairs");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json to_json(const ComplexPoint& p) {
    json a = json::array();
    for (const auto& v : p) a.push_back(to_pair(v));
    return a;
}

ComplexPoint point_from_json(const json& j) {
    ComplexPoint p;
    for (const auto& v : j) p.push_back(from_pair(v));
    return p;
}

}  // namespace

std::string serialize_system(const ScmaSystem& system) {
    json doc;
    doc["K"] = system.num_resources();
    doc["N"] = system.num_nonzero();
    doc["J"] = system.num_layers();
    doc["M"] = system.alphabet_size();
    doc["design"] = system.design();
    doc["factor_graph"] = system.graph().matrix();

    json mother;
    mother["points"] = json::array();
    for (const auto& p : system.mother().points()) mother["points"].push_back(to_json(p));
    mother["labels"] = system.mother().labels();
    if (const auto& s = system.mother().shuffle())
        mother["shuffle"] = json::array({s->real_size, s->imag_size});
    else
        mother["shuffle"] = nullptr;
    doc["mother_constellation"] = std::move(mother);

    doc["operators"] = json::array();
    for (const auto& op : system.operators()) {
        json phases = json::array();
        for (const auto& ph : op.phases) phases.push_back(to_pair(ph));
        doc["operators"].push_back(std::move(phases));
    }

    doc["codebooks"] = json::array();
    for (const auto& cb : system.codebooks()) {
        json words = json::array();
        for (const auto& c : cb.codewords()) words.push_back(to_json(c));
        doc["codebooks"].push_back(std::move(words));
    }
    return doc.dump(2) + "\n";
}

ScmaSystem parse_system(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("system file is not valid JSON: ") + e.what());
    }
    try {
        const int k = doc.at("K").get<int>();
        const int j_layers = doc.at("J").get<int>();
        const auto f = doc.at("factor_graph").get<std::vector<std::vector<int>>>();
        if (static_cast<int>(f.size()) != k) throw ParameterError("factor_graph must have K rows");
        std::vector<LayerSignature> columns;
        for (int j = 0; j < j_layers; ++j) {
            std::vector<std::uint8_t> ind(static_cast<std::size_t>(k));
            for (int r = 0; r < k; ++r) {
                const auto& row = f[static_cast<std::size_t>(r)];
                if (static_cast<int>(row.size()) != j_layers) throw ParameterError("factor_graph rows must have J entries");
                ind[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(row[static_cast<std::size_t>(j)]);
            }
            columns.emplace_back(std::move(ind), j);
        }
        FactorGraph graph(std::move(columns));

        const auto& m = doc.at("mother_constellation");
        std::vector<ComplexPoint> points;
        for (const auto& p : m.at("points")) points.push_back(point_from_json(p));
        auto labels = m.at("labels").get<std::vector<std::uint32_t>>();
        std::optional<ShuffleSizes> shuffle;
        if (m.contains("shuffle") && !m.at("shuffle").is_null())
            shuffle = ShuffleSizes{m.at("shuffle").at(0).get<int>(), m.at("shuffle").at(1).get<int>()};
        auto mother = MotherConstellation::from_points(std::move(points), std::move(labels), shuffle);

        std::vector<LayerOperator> ops;
        for (const auto& o : doc.at("operators")) {
            LayerOperator op;
            for (const auto& ph : o) op.phases.push_back(from_pair(ph));
            ops.push_back(std::move(op));
        }

        const std::string design = doc.value("design", std::string("custom"));
        ScmaSystem system(std::move(graph), std::move(mother), std::move(ops), design);
        if (system.alphabet_size() != doc.at("M").get<int>() || system.num_nonzero() != doc.at("N").get<int>())
            throw ParameterError("M or N disagrees with the stored constellation");

        if (doc.contains("codebooks")) {
            const auto& cbs = doc.at("codebooks");
            if (static_cast<int>(cbs.size()) != system.num_layers()) throw ParameterError("one codebook per layer required");
            for (int j = 0; j < system.num_layers(); ++j) {
                const auto& stored = cbs.at(static_cast<std::size_t>(j));
                const auto& built = system.codebook(j);
                if (static_cast<int>(stored.size()) != built.size()) throw ParameterError("codebook size mismatch");
                for (int s = 0; s < built.size(); ++s) {
                    const auto c = point_from_json(stored.at(static_cast<std::size_t>(s)));
                    if (c.size() != built.codeword(s).size()) throw ParameterError("codeword length mismatch");
                    for (std::size_t r = 0; r < c.size(); ++r)
                        if (std::abs(c[r] - built.codeword(s)[r]) > 1e-12)
                            throw ParameterError("stored codebooks disagree with mother and operators");
                }
            }
        }
        return system;
    } catch (const json::exception& e) {
        throw ParameterError(std::string("malformed system file: ") + e.what());
    }
}

void write_system(const ScmaSystem& system, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot open " + path.string() + " for writing");
    out << serialize_system(system);
}

ScmaSystem read_system(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

}  // namespace scma
