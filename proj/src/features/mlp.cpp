#include "catlearn/features/mlp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "catlearn/knowledge/random.hpp"

namespace catlearn::features {

using nlohmann::json;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double sign(double x) { return (x > 0.0) - (x < 0.0); }

constexpr int kCheckpointVersion = 1;

} // namespace

void Dataset::validate() const {
    if (inputs == 0 || classes == 0) throw FeatureError("dataset needs inputs and classes");
    for (const auto& s : samples) {
        if (s.input.size() != inputs) throw FeatureError("sample has the wrong input dimension");
        if (s.label >= classes) throw FeatureError("sample label out of range");
    }
}

Mlp::Mlp(std::size_t inputs, std::size_t hidden, std::size_t outputs, std::uint64_t seed, RpropConfig rprop)
    : sizes_{inputs, hidden, outputs}, seed_(seed), rprop_(rprop) {
    if (inputs == 0 || hidden == 0 || outputs == 0) throw FeatureError("layer sizes must be positive");
    if (!(rprop.minStep > 0.0 && rprop.minStep <= rprop.initialStep && rprop.initialStep <= rprop.maxStep)) {
        throw FeatureError("rprop steps must satisfy 0 < min <= initial <= max");
    }
    const std::size_t n = hidden * (inputs + 1) + outputs * (hidden + 1);
    knowledge::Rng rng(seed);
    weights_.resize(n);
    for (auto& w : weights_) w = rng.uniform(-0.5, 0.5);
    steps_.assign(n, rprop.initialStep);
    previousGradient_.assign(n, 0.0);
}

void Mlp::setWeights(std::vector<double> w) {
    if (w.size() != weights_.size()) throw FeatureError("weight count mismatch");
    weights_ = std::move(w);
}

void Mlp::checkInput(const std::vector<double>& input) const {
    if (input.size() != inputs()) {
        throw FeatureError("input has " + std::to_string(input.size()) + " values, network expects " +
                           std::to_string(inputs()));
    }
}

std::vector<double> Mlp::forward(const std::vector<double>& input) const {
    checkInput(input);
    const auto [ni, nh, no] = sizes_;
    std::vector<double> h(nh), out(no);
    const double* w = weights_.data();
    for (std::size_t j = 0; j < nh; ++j, w += ni + 1) {
        double z = w[0];
        for (std::size_t i = 0; i < ni; ++i) z += w[i + 1] * input[i];
        h[j] = sigmoid(z);
    }
    for (std::size_t k = 0; k < no; ++k, w += nh + 1) {
        double z = w[0];
        for (std::size_t j = 0; j < nh; ++j) z += w[j + 1] * h[j];
        out[k] = sigmoid(z);
    }
    return out;
}

double Mlp::loss(const Dataset& data) const {
    double total = 0.0;
    for (const auto& s : data.samples) {
        const auto y = forward(s.input);
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double t = k == s.label ? 1.0 : 0.0;
            total += 0.5 * (y[k] - t) * (y[k] - t);
        }
    }
    return total;
}

std::vector<double> Mlp::gradient(const Dataset& data) const {
    const auto [ni, nh, no] = sizes_;
    if (data.inputs != ni || data.classes != no) throw FeatureError("dataset does not match the network");
    std::vector<double> g(weights_.size(), 0.0);
    std::vector<double> h(nh), y(no), deltaOut(no), deltaHidden(nh);
    const std::size_t outBase = nh * (ni + 1);
    for (const auto& s : data.samples) {
        checkInput(s.input);
        for (std::size_t j = 0; j < nh; ++j) {
            const double* w = &weights_[j * (ni + 1)];
            double z = w[0];
            for (std::size_t i = 0; i < ni; ++i) z += w[i + 1] * s.input[i];
            h[j] = sigmoid(z);
        }
        for (std::size_t k = 0; k < no; ++k) {
            const double* w = &weights_[outBase + k * (nh + 1)];
            double z = w[0];
            for (std::size_t j = 0; j < nh; ++j) z += w[j + 1] * h[j];
            y[k] = sigmoid(z);
            const double t = k == s.label ? 1.0 : 0.0;
            deltaOut[k] = (y[k] - t) * y[k] * (1.0 - y[k]);
        }
        for (std::size_t j = 0; j < nh; ++j) {
            double back = 0.0;
            for (std::size_t k = 0; k < no; ++k) back += deltaOut[k] * weights_[outBase + k * (nh + 1) + j + 1];
            deltaHidden[j] = back * h[j] * (1.0 - h[j]);
        }
        for (std::size_t k = 0; k < no; ++k) {
            double* gk = &g[outBase + k * (nh + 1)];
            gk[0] += deltaOut[k];
            for (std::size_t j = 0; j < nh; ++j) gk[j + 1] += deltaOut[k] * h[j];
        }
        for (std::size_t j = 0; j < nh; ++j) {
            double* gj = &g[j * (ni + 1)];
            gj[0] += deltaHidden[j];
            for (std::size_t i = 0; i < ni; ++i) gj[i + 1] += deltaHidden[j] * s.input[i];
        }
    }
    return g;
}

void Mlp::rpropEpoch(const Dataset& data) {
    const auto g = gradient(data);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double gi = g[i];
        const double agreement = gi * previousGradient_[i];
        if (agreement > 0.0) {
            steps_[i] = std::min(steps_[i] * rprop_.increase, rprop_.maxStep);
        } else if (agreement < 0.0) {
            steps_[i] = std::max(steps_[i] * rprop_.decrease, rprop_.minStep);
        }
        weights_[i] -= sign(gi) * steps_[i];
        previousGradient_[i] = gi;
    }
}

std::size_t Mlp::predict(const std::vector<double>& input) const {
    const auto y = forward(input);
    return static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
}

json Mlp::checkpoint() const {
    return {{"version", kCheckpointVersion},
            {"layerSizes", sizes_},
            {"seed", seed_},
            {"weights", weights_},
            {"rpropConfig",
             {{"increase", rprop_.increase},
              {"decrease", rprop_.decrease},
              {"initialStep", rprop_.initialStep},
              {"minStep", rprop_.minStep},
              {"maxStep", rprop_.maxStep},
              {"targetLoss", rprop_.targetLoss}}},
            {"rpropState", {{"steps", steps_}, {"previousGradient", previousGradient_}}}};
}

Mlp Mlp::fromCheckpoint(const json& doc) {
    try {
        if (doc.at("version").get<int>() != kCheckpointVersion) throw FeatureError("unsupported checkpoint version");
        const auto sizes = doc.at("layerSizes").get<std::vector<std::size_t>>();
        if (sizes.size() != 3) throw FeatureError("checkpoint must have three layers");
        const auto& rc = doc.at("rpropConfig");
        RpropConfig config{rc.at("increase").get<double>(), rc.at("decrease").get<double>(),
                           rc.at("initialStep").get<double>(), rc.at("minStep").get<double>(),
                           rc.at("maxStep").get<double>(), rc.at("targetLoss").get<double>()};
        Mlp m(sizes[0], sizes[1], sizes[2], doc.at("seed").get<std::uint64_t>(), config);
        m.setWeights(doc.at("weights").get<std::vector<double>>());
        auto steps = doc.at("rpropState").at("steps").get<std::vector<double>>();
        auto previous = doc.at("rpropState").at("previousGradient").get<std::vector<double>>();
        if (steps.size() != m.weights_.size() || previous.size() != m.weights_.size()) {
            throw FeatureError("rprop state size mismatch");
        }
        for (double s : steps) {
            if (!(s >= config.minStep && s <= config.maxStep)) throw FeatureError("step size outside its bounds");
        }
        m.steps_ = std::move(steps);
        m.previousGradient_ = std::move(previous);
        return m;
    } catch (const json::exception& e) {
        throw FeatureError(std::string("malformed checkpoint: ") + e.what());
    }
}

std::vector<double> rpropTrain(Mlp& m, const Dataset& data, int epochs) {
    data.validate();
    if (data.samples.empty()) throw FeatureError("training set is empty");
    if (data.inputs != m.inputs() || data.classes != m.outputs()) {
        throw FeatureError("dataset does not match the network");
    }
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(std::max(epochs, 0)) + 1);
    const double target = m.rpropConfig().targetLoss * static_cast<double>(data.samples.size());
    for (int e = 0; e < epochs; ++e) {
        trace.push_back(m.loss(data));
        if (trace.back() <= target) return trace;
        m.rpropEpoch(data);
    }
    trace.push_back(m.loss(data));
    return trace;
}

knowledge::FeatureVector classify(const Mlp& m, const std::vector<double>& input, const std::string& featureId) {
    const auto y = m.forward(input);
    return knowledge::normalizePercept(y, y.size(), featureId);
}

double accuracy(const Mlp& m, const Dataset& data) {
    if (data.samples.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& s : data.samples) hits += m.predict(s.input) == s.label;
    return static_cast<double>(hits) / static_cast<double>(data.samples.size());
}

ConfusionStats confusionStats(const Mlp& m, const Dataset& data) {
    const std::size_t n = m.outputs();
    std::vector<std::size_t> truth(n), predicted(n), hits(n);
    for (const auto& s : data.samples) {
        const auto y = m.predict(s.input);
        ++truth.at(s.label);
        ++predicted[y];
        hits[y] += y == s.label;
    }
    ConfusionStats out;
    for (std::size_t a = 0; a < n; ++a) {
        out.recall.push_back(truth[a] ? std::optional(double(hits[a]) / double(truth[a])) : std::nullopt);
        out.precision.push_back(predicted[a] ? std::optional(double(hits[a]) / double(predicted[a])) : std::nullopt);
    }
    return out;
}

void writeDatasetCsv(std::ostream& out, const Dataset& data) {
    data.validate();
    for (std::size_t i = 0; i < data.inputs; ++i) out << 'x' << i << ',';
    out << "label\n";
    char buf[32];
    for (const auto& s : data.samples) {
        for (double v : s.input) {
            const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out.write(buf, end - buf) << ',';
        }
        out << s.label << '\n';
    }
}

Dataset readDatasetCsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FeatureError("dataset is empty");
    Dataset data;
    data.inputs = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
    if (data.inputs == 0 || line.substr(line.rfind(',') + 1) != "label") {
        throw FeatureError("dataset header must be x0,...,label");
    }
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        Sample s;
        const char* p = line.data();
        const char* end = p + line.size();
        for (std::size_t i = 0; i <= data.inputs; ++i) {
            const char* stop = std::find(p, end, ',');
            if ((i < data.inputs) == (stop == end)) throw FeatureError("row " + std::to_string(row) + ": wrong field count");
            if (i < data.inputs) {
                double v = 0.0;
                const auto r = std::from_chars(p, stop, v);
                if (r.ec != std::errc{} || r.ptr != stop) throw FeatureError("row " + std::to_string(row) + ": bad number");
                s.input.push_back(v);
            } else {
                const auto r = std::from_chars(p, stop, s.label);
                if (r.ec != std::errc{} || r.ptr != stop) throw FeatureError("row " + std::to_string(row) + ": bad label");
            }
            p = stop + 1;
        }
        data.classes = std::max(data.classes, s.label + 1);
        data.samples.push_back(std::move(s));
    }
    return data;
}

} // namespace catlearn::features
