#include "spf/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spf::io {

std::string fmt_double(double v) {
    // shortest representation that round-trips among 12/17 significant digits
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    if (std::strtod(buf, nullptr) != v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
    }
    return buf;
}

nlohmann::json mixture_to_json(const mixture::MixtureModel& model) {
    nlohmann::json j;
    j["family"] = mixture::family_name(model.family);
    if (model.family == mixture::MixtureFamily::Beta) {
        j["alpha1"] = model.beta[0].alpha;
        j["beta1"] = model.beta[0].beta;
        j["alpha2"] = model.beta[1].alpha;
        j["beta2"] = model.beta[1].beta;
    } else {
        j["mean1"] = model.gauss[0].mean;
        j["variance1"] = model.gauss[0].variance;
        j["mean2"] = model.gauss[1].mean;
        j["variance2"] = model.gauss[1].variance;
    }
    j["gamma1"] = model.weights[0];
    j["gamma2"] = model.weights[1];
    return j;
}

mixture::MixtureModel mixture_from_json(const nlohmann::json& j) {
    mixture::MixtureModel m;
    m.family = mixture::family_from_name(j.at("family").get<std::string>());
    if (m.family == mixture::MixtureFamily::Beta) {
        m.beta[0] = {j.at("alpha1").get<double>(), j.at("beta1").get<double>()};
        m.beta[1] = {j.at("alpha2").get<double>(), j.at("beta2").get<double>()};
    } else {
        m.gauss[0] = {j.at("mean1").get<double>(), j.at("variance1").get<double>()};
        m.gauss[1] = {j.at("mean2").get<double>(), j.at("variance2").get<double>()};
    }
    m.weights = {j.at("gamma1").get<double>(), j.at("gamma2").get<double>()};
    if (!m.valid()) throw std::invalid_argument("mixture_from_json: invalid model");
    return m;
}

void save_checkpoint(const nn::MlpClassifier& model, const std::string& path) {
    nlohmann::json j;
    j["layer_sizes"] = model.layer_sizes();
    j["activation"] = nn::activation_name(model.activation());
    j["params"] = model.parameters();
    write_text_file(path, j.dump());
}

nn::MlpClassifier load_checkpoint(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    nn::MlpClassifier model(j.at("layer_sizes").get<std::vector<int>>(),
                            nn::activation_from_name(j.at("activation").get<std::string>()));
    auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != model.parameters().size()) {
        throw std::runtime_error("load_checkpoint: parameter count mismatch");
    }
    model.parameters() = std::move(params);
    return model;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace spf::io
