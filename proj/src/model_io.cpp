#include "splnc/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "splnc/error.hpp"

namespace splnc {

namespace {

using nlohmann::json;

json config_to_json(const TrainerConfig& c) {
    json j;
    j["c"] = c.c;
    j["gamma"] = c.gamma;
    j["lambda0"] = c.lambda0 ? json(*c.lambda0) : json("auto");
    j["quantile"] = c.quantile;
    j["kappa"] = c.kappa;
    j["regularizer"] = std::string(to_string(c.regularizer));
    j["entropy_mode"] = std::string(to_string(c.entropy_mode));
    j["stop_eps"] = c.stop_eps;
    j["max_iters"] = c.max_iters;
    j["tol"] = c.tol;
    j["seed"] = c.seed;
    j["warm_start_size"] = c.warm_start_size;
    j["normalize"] = c.normalize;
    return j;
}

TrainerConfig config_from_json(const json& j) {
    TrainerConfig c;
    c.c = j.at("c").get<double>();
    c.gamma = j.at("gamma").get<double>();
    if (j.at("lambda0").is_number()) c.lambda0 = j.at("lambda0").get<double>();
    c.quantile = j.at("quantile").get<double>();
    c.kappa = j.at("kappa").get<double>();
    c.regularizer = parse_regularizer(j.at("regularizer").get<std::string>());
    c.entropy_mode = parse_entropy_mode(j.at("entropy_mode").get<std::string>());
    c.stop_eps = j.at("stop_eps").get<double>();
    c.max_iters = j.at("max_iters").get<std::size_t>();
    c.tol = j.at("tol").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.warm_start_size = j.at("warm_start_size").get<std::size_t>();
    c.normalize = j.at("normalize").get<bool>();
    return c;
}

json coherency_to_json(const CoherencyMatrix& t) {
    return json::array({t.t11, t.t22, t.t33, t.t12.real(), t.t12.imag(), t.t13.real(), t.t13.imag(), t.t23.real(),
                        t.t23.imag()});
}

CoherencyMatrix coherency_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 9) throw Error(ErrorCode::ParseError, "coherency entry needs 9 reals");
    return CoherencyMatrix{v[0], v[1], v[2], {v[3], v[4]}, {v[5], v[6]}, {v[7], v[8]}};
}

json multiclass_to_json(const MulticlassModel& m) {
    json j;
    j["kind"] = "svm";
    j["method"] = m.method;
    j["config"] = config_to_json(m.config);
    if (m.stats) {
        j["normalization"] = {{"mean", m.stats->mean}, {"stddev", m.stats->stddev}};
    } else {
        j["normalization"] = nullptr;
    }
    json classes = json::array();
    for (std::size_t k = 0; k < m.models.size(); ++k) {
        const SvmModel& svm = m.models[k];
        json sv = json::array();
        for (std::size_t r = 0; r < svm.support_vectors().rows(); ++r) {
            const auto row = svm.support_vectors().row(r);
            sv.push_back(std::vector<double>(row.begin(), row.end()));
        }
        classes.push_back({{"id", m.class_ids[k]},
                           {"gamma", svm.kernel().gamma},
                           {"bias", svm.bias()},
                           {"coefficients", svm.coefficients()},
                           {"support_vectors", std::move(sv)}});
    }
    j["classes"] = std::move(classes);
    return j;
}

MulticlassModel multiclass_from_json(const json& j) {
    MulticlassModel m;
    m.method = j.at("method").get<std::string>();
    m.config = config_from_json(j.at("config"));
    if (!j.at("normalization").is_null()) {
        FeatureStats s;
        s.mean = j.at("normalization").at("mean").get<FeatureVector>();
        s.stddev = j.at("normalization").at("stddev").get<FeatureVector>();
        m.stats = s;
    }
    for (const auto& c : j.at("classes")) {
        FeatureMatrix sv;
        for (const auto& row : c.at("support_vectors")) sv.push_row(row.get<std::vector<double>>());
        m.class_ids.push_back(c.at("id").get<int>());
        m.models.emplace_back(std::move(sv), c.at("coefficients").get<std::vector<double>>(), c.at("bias").get<double>(),
                              KernelParams{c.at("gamma").get<double>()});
    }
    if (m.class_ids.size() < 2) throw Error(ErrorCode::InvalidModel, "model needs at least two classes");
    return m;
}

json wishart_to_json(const WishartCenters& w) {
    json j;
    j["kind"] = "wishart";
    j["method"] = "wc";
    json centers = json::array();
    for (const auto& c : w.centers) centers.push_back({{"id", c.class_id}, {"sigma", coherency_to_json(c.sigma)}});
    j["centers"] = std::move(centers);
    return j;
}

WishartCenters wishart_from_json(const json& j) {
    WishartCenters w;
    for (const auto& c : j.at("centers"))
        w.centers.push_back(make_wishart_center(c.at("id").get<int>(), coherency_from_json(c.at("sigma"))));
    return w;
}

}  // namespace

std::string model_to_json(const StoredModel& model) {
    json j = std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, MulticlassModel>) return multiclass_to_json(m);
            else return wishart_to_json(m);
        },
        model);
    j["format"] = "splnc-model";
    j["format_version"] = kModelFormatVersion;
    return j.dump(1) + "\n";
}

StoredModel model_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != "splnc-model")
            throw Error(ErrorCode::ParseError, "not a model document");
        if (j.at("format_version").get<int>() != kModelFormatVersion)
            throw Error(ErrorCode::ParseError, "unsupported model format version");
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "svm") return multiclass_from_json(j);
        if (kind == "wishart") return wishart_from_json(j);
        throw Error(ErrorCode::ParseError, "unknown model kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

void save_model_file(const std::string& path, const StoredModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << model_to_json(model);
}

StoredModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

std::vector<int> predict_stored(const StoredModel& model, const GridDataset& dataset) {
    if (const auto* m = std::get_if<MulticlassModel>(&model)) return predict(*m, dataset);
    return wishart_predict(std::get<WishartCenters>(model), dataset);
}

}  // namespace splnc
